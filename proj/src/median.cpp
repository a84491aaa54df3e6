#include "medimax/median.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace medimax {

ValueSummary summarize(const StepFunction& f, const CubeView& view) {
  const Rational cell = f.universe.cell_measure();
  std::map<Rational, Rational> dist;
  Rational inside(0);
  for_each_cell(view.box, [&](const std::vector<long>& c) {
    dist[f.at(c)] += cell;
    inside += cell;
  });
  const Rational outside = view.total_measure - inside;
  if (outside > 0) {
    dist[Rational(0)] += outside;
  }
  ValueSummary s;
  s.total = view.total_measure;
  s.items.assign(dist.begin(), dist.end());
  return s;
}

ValueSummary merge_summaries(const ValueSummary& a, const ValueSummary& b) {
  ValueSummary out;
  out.total = a.total + b.total;
  out.items.reserve(a.items.size() + b.items.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.items.size() || j < b.items.size()) {
    if (j == b.items.size() || (i < a.items.size() && a.items[i].first < b.items[j].first)) {
      out.items.push_back(a.items[i++]);
    } else if (i == a.items.size() || b.items[j].first < a.items[i].first) {
      out.items.push_back(b.items[j++]);
    } else {
      out.items.emplace_back(a.items[i].first, a.items[i].second + b.items[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

void pad_with_zero(ValueSummary& s, const Rational& new_total) {
  const Rational pad = new_total - s.total;
  if (pad < 0) {
    throw std::logic_error("pad_with_zero: summary already exceeds target total");
  }
  if (pad == 0) {
    return;
  }
  auto it = std::lower_bound(
      s.items.begin(), s.items.end(), Rational(0),
      [](const std::pair<Rational, Rational>& item, const Rational& v) { return item.first < v; });
  if (it != s.items.end() && it->first == 0) {
    it->second += pad;
  } else {
    s.items.insert(it, {Rational(0), pad});
  }
  s.total = new_total;
}

MedianInterval median_interval(const ValueSummary& s) {
  if (s.total <= 0 || s.items.empty()) {
    throw std::domain_error("median_interval: empty cube");
  }
  const Rational half = s.total / 2;
  // a = least value with |{f <= a}| >= |Q|/2; b = greatest with
  // |{f >= b}| >= |Q|/2.
  Rational cum(0);
  Rational lo;
  for (const auto& [v, m] : s.items) {
    cum += m;
    if (cum >= half) {
      lo = v;
      break;
    }
  }
  Rational tail(0);
  Rational hi;
  for (auto it = s.items.rbegin(); it != s.items.rend(); ++it) {
    tail += it->second;
    if (tail >= half) {
      hi = it->first;
      break;
    }
  }
  return MedianInterval{lo, hi};
}

MedianInterval median_interval(const StepFunction& f, const GridCube& q) {
  if (!cube_inside(f.universe, q)) {
    throw std::domain_error("median_interval: cube outside universe");
  }
  return median_interval(summarize(f, view_of(f.universe, q)));
}

Rational median_max_abs(const ValueSummary& s) {
  const MedianInterval iv = median_interval(s);
  return abs(iv.hi) >= abs(iv.lo) ? iv.hi : iv.lo;
}

Rational median_max_abs(const StepFunction& f, const GridCube& q) {
  if (!cube_inside(f.universe, q)) {
    throw std::domain_error("median_max_abs: cube outside universe");
  }
  return median_max_abs(summarize(f, view_of(f.universe, q)));
}

Rational tau_median(const ValueSummary& s, const Rational& tau) {
  if (tau <= 0 || tau >= 1) {
    throw std::domain_error("tau_median: tau must lie in (0,1)");
  }
  if (s.total <= 0 || s.items.empty()) {
    throw std::domain_error("tau_median: empty cube");
  }
  const Rational threshold = tau * s.total;
  std::map<Rational, Rational> abs_dist;
  for (const auto& [v, m] : s.items) {
    abs_dist[Rational(abs(v))] += m;
  }
  Rational tail(0);
  for (auto it = abs_dist.rbegin(); it != abs_dist.rend(); ++it) {
    tail += it->second;
    if (it->first > 0 && tail >= threshold) {
      return it->first;
    }
  }
  return Rational(0);
}

Rational tau_median(const StepFunction& f, const GridCube& q, const Rational& tau) {
  if (!cube_inside(f.universe, q)) {
    throw std::domain_error("tau_median: cube outside universe");
  }
  return tau_median(summarize(f, view_of(f.universe, q)), tau);
}

Rational abs_average(const ValueSummary& s) {
  if (s.total <= 0) {
    throw std::domain_error("abs_average: empty cube");
  }
  Rational sum(0);
  for (const auto& [v, m] : s.items) {
    sum += abs(v) * m;
  }
  return sum / s.total;
}

}  // namespace medimax
