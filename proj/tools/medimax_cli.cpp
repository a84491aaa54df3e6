// Command-line frontend: generate inputs, run operators, compute weight
// characteristics, run verification suites, and summarize reports.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
// 3 internal invariant breach.

#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "medimax/maximal.hpp"
#include "medimax/verify.hpp"

namespace {

using namespace medimax;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& item : split_commas(s)) out.push_back(parse_rational(item));
  return out;
}

/// Shared --dim/--cell/--radius/--origin/--extent flags. Either give
/// origin+extent explicitly, or a radius R for the symmetric window
/// [-R, R)^dim.
struct UniverseOpts {
  int dim = 1;
  std::string cell = "1/10";
  std::string radius = "10";
  std::string origin;
  std::string extent;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dim", dim, "dimension n");
    cmd->add_option("--cell", cell, "cell side h, as p/q");
    cmd->add_option("--radius", radius, "half-width R of the window [-R, R)^n");
    cmd->add_option("--origin", origin, "comma-separated lower corner (overrides --radius)");
    cmd->add_option("--extent", extent, "comma-separated cell counts (requires --origin)");
  }

  Universe build() const {
    Universe u;
    u.dim = dim;
    u.cell = parse_rational(cell);
    if (!origin.empty() || !extent.empty()) {
      if (origin.empty() || extent.empty()) {
        throw std::invalid_argument("--origin and --extent must be given together");
      }
      u.origin = parse_rational_list(origin);
      for (const auto& e : split_commas(extent)) u.extent.push_back(std::stol(e));
    } else {
      Rational r = parse_rational(radius);
      Rational cells = 2 * r / u.cell;
      if (denominator(cells) != 1 || cells <= 0) {
        throw std::invalid_argument("window width 2R must be a positive multiple of the cell");
      }
      u.origin.assign(static_cast<std::size_t>(dim), -r);
      u.extent.assign(static_cast<std::size_t>(dim),
                      static_cast<long>(numerator(cells).convert_to<long long>()));
    }
    u.validate();
    return u;
  }
};

/// Shared family flags: --family all|dyadic plus --max-side or
/// --grid-shift/--k-min/--k-max.
struct FamilyOpts {
  std::string family = "all";
  long max_side = 0;
  std::string grid_shift;
  int k_min = 0;
  int k_max = 0;
  bool k_max_set = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "cube family: all | dyadic")
        ->check(CLI::IsMember({"all", "dyadic"}));
    cmd->add_option("--max-side", max_side, "side cap in cells for the all-cube family");
    cmd->add_option("--grid-shift", grid_shift,
                    "comma-separated dyadic shift per axis, each 0 or 1/3");
    cmd->add_option("--k-min", k_min, "coarsest dyadic scale (side 2^-k)");
    cmd->add_option("--k-max", k_max, "finest dyadic scale (default: finest cell-aligned)")
        ->each([this](const std::string&) { k_max_set = true; });
  }

  DyadicGridSpec build_spec(const Universe& u) const {
    DyadicGridSpec spec;
    if (grid_shift.empty()) {
      spec.shift.assign(static_cast<std::size_t>(u.dim), Rational(0));
    } else {
      spec.shift = parse_rational_list(grid_shift);
    }
    spec.k_min = k_min;
    if (k_max_set) {
      spec.k_max = k_max;
    } else {
      // Deepest scale still aligned with the cell lattice.
      spec.k_max = spec.k_min;
      DyadicGridSpec probe = spec;
      while (true) {
        probe.k_max = spec.k_max + 1;
        if (dyadic_side(probe.k_max) < u.cell || !cell_aligned(probe, u)) break;
        spec.k_max = probe.k_max;
      }
    }
    if (!cell_aligned(spec, u)) {
      throw std::invalid_argument("dyadic grid is not aligned with the cell lattice");
    }
    return spec;
  }

  CubeFamily build(const Universe& u) const {
    if (family == "dyadic") return CubeFamily::dyadic(u, build_spec(u));
    return CubeFamily::all_grid_aligned(u, max_side);
  }
};

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out_path, content.back() == '\n' ? content : content + "\n");
  }
}

void emit_stepfn(const StepFunction& f, const std::string& out_path, const std::string& format,
                 const Json& meta = nullptr) {
  if (format == "csv") {
    emit(out_path, stepfn_to_csv(f));
    return;
  }
  Json j = stepfn_to_json(f);
  if (!meta.is_null()) j["meta"] = meta;
  emit(out_path, j.dump(2));
}

StepFunction ramp_fn(const Universe& u) {
  StepFunction f = StepFunction::zero(u);
  CellBox all;
  all.lo.assign(static_cast<std::size_t>(u.dim), 0);
  all.hi.assign(u.extent.begin(), u.extent.end());
  Rational half = u.cell / 2;
  for_each_cell(all, [&](const std::vector<long>& c) {
    f.values[static_cast<std::size_t>(u.flat_index(c))] = u.coordinate(0, c[0]) + half;
  });
  return f;
}

StepFunction step_fn(const Universe& u, const Rational& at) {
  StepFunction f = StepFunction::zero(u);
  CellBox all;
  all.lo.assign(static_cast<std::size_t>(u.dim), 0);
  all.hi.assign(u.extent.begin(), u.extent.end());
  Rational half = u.cell / 2;
  for_each_cell(all, [&](const std::vector<long>& c) {
    if (u.coordinate(0, c[0]) + half >= at) {
      f.values[static_cast<std::size_t>(u.flat_index(c))] = 1;
    }
  });
  return f;
}

StepFunction load_stepfn(const std::string& path) {
  return stepfn_from_json(Json::parse(read_text_file(path)));
}

Weight load_weight(const std::string& path) { return weight_from_json(Json::parse(read_text_file(path))); }

int run_verify_suites(const std::vector<std::string>& suites, long count, std::uint64_t seed,
                      const std::string& tau_str, const std::string& t_list,
                      const std::string& p_list, int dim, long cells, long samples,
                      const std::string& out_path) {
  Rational tau = parse_rational(tau_str);
  std::vector<Rational> ts = parse_rational_list(t_list);
  std::vector<unsigned> ps;
  for (const auto& p : split_commas(p_list)) ps.push_back(static_cast<unsigned>(std::stoul(p)));

  std::vector<std::string> names = suites;
  const std::vector<std::string> all{"comparison", "a1",       "weak-type",   "sharpness",
                                     "lp-lower",   "expansion", "mollification", "covering",
                                     "dyadic-oracle", "stopping", "truncation"};
  if (names.size() == 1 && names[0] == "all") names = all;

  std::ostringstream lines;
  bool ok = true;
  for (const auto& name : names) {
    VerificationReport r;
    if (name == "comparison") {
      r = check_comparison(count, seed);
    } else if (name == "a1") {
      r = check_a1_bound(count, tau, seed);
    } else if (name == "weak-type") {
      r = check_weak_type(count, tau, seed);
    } else if (name == "sharpness") {
      r = check_sharpness(ts);
    } else if (name == "lp-lower") {
      r = check_lp_lower(ts, ps);
    } else if (name == "expansion") {
      std::vector<Rational> etas{Rational(1, 4), Rational(1, 2), Rational(3, 4)};
      if (dim != 1) etas = {Rational(1, 2)};
      r = check_expansion(dim, cells, etas, dim == 1 ? 0 : samples, seed);
    } else if (name == "mollification") {
      r = check_mollification();
    } else if (name == "covering") {
      r = check_covering_and_domination(count, tau, seed);
    } else if (name == "dyadic-oracle") {
      r = check_dyadic_oracle(count, seed);
    } else if (name == "stopping") {
      r = check_stopping(count, tau, seed);
    } else if (name == "truncation") {
      r = check_truncation(count, seed);
    } else {
      throw CLI::ValidationError("verify", "unknown suite: " + name);
    }
    ok = ok && r.pass;
    lines << report_to_json(r).dump() << "\n";
  }
  emit(out_path, lines.str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"median maximal functions, dyadic variants, and Muckenhoupt characteristics"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string out_path;
  std::string format = "json";
  app.add_option("--out", out_path, "output file (default stdout)")->configurable(false);
  // --format lives on the root so every subcommand shares it.
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.fallthrough();

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate step functions and weights");
  gen->require_subcommand(1);

  auto universe_opts = std::make_shared<UniverseOpts>();
  {
    auto* ind = gen->add_subcommand("indicator", "indicator of a box [from, to)");
    universe_opts->attach(ind);
    auto from = std::make_shared<std::string>("-1");
    auto to = std::make_shared<std::string>("1");
    ind->add_option("--from", *from, "comma-separated lower corner");
    ind->add_option("--to", *to, "comma-separated upper corner");
    ind->callback([&, from, to]() {
      action = [&, from, to]() {
        Universe u = universe_opts->build();
        std::vector<Rational> lo = parse_rational_list(*from);
        std::vector<Rational> hi = parse_rational_list(*to);
        if (lo.size() == 1) lo.assign(static_cast<std::size_t>(u.dim), lo[0]);
        if (hi.size() == 1) hi.assign(static_cast<std::size_t>(u.dim), hi[0]);
        emit_stepfn(indicator_interval(u, lo, hi), out_path, format);
        return 0;
      };
    });

    auto* ramp = gen->add_subcommand("ramp", "identity ramp along axis 0 (cell midpoints)");
    universe_opts->attach(ramp);
    ramp->callback([&]() {
      action = [&]() {
        emit_stepfn(ramp_fn(universe_opts->build()), out_path, format);
        return 0;
      };
    });

    auto* step = gen->add_subcommand("step", "unit step along axis 0");
    universe_opts->attach(step);
    auto at = std::make_shared<std::string>("0");
    step->add_option("--at", *at, "jump location");
    step->callback([&, at]() {
      action = [&, at]() {
        emit_stepfn(step_fn(universe_opts->build(), parse_rational(*at)), out_path, format);
        return 0;
      };
    });

    auto* rnd = gen->add_subcommand("random", "random step function or weight");
    universe_opts->attach(rnd);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto as_weight = std::make_shared<bool>(false);
    rnd->add_option("--seed", *seed, "RNG seed");
    rnd->add_flag("--weight", *as_weight, "emit a weight (values 2^j) instead");
    rnd->callback([&, seed, as_weight]() {
      action = [&, seed, as_weight]() {
        Universe u = universe_opts->build();
        Rng rng(*seed);
        if (*as_weight) {
          emit(out_path, weight_to_json(random_weight(u, rng)).dump(2));
        } else {
          emit_stepfn(random_stepfn(u, rng), out_path, format);
        }
        return 0;
      };
    });

    auto* wt = gen->add_subcommand("w_t", "weight t on [-1,1), 1 elsewhere");
    universe_opts->attach(wt);
    auto t = std::make_shared<std::string>("1/2");
    wt->add_option("--t", *t, "value on [-1,1), rational in (0,1)");
    wt->callback([&, t]() {
      action = [&, t]() {
        Universe u = universe_opts->build();
        std::vector<Rational> lo(static_cast<std::size_t>(u.dim), Rational(-1));
        std::vector<Rational> hi(static_cast<std::size_t>(u.dim), Rational(1));
        emit(out_path, weight_to_json(wt_weight(u, parse_rational(*t), lo, hi)).dump(2));
        return 0;
      };
    });
  }

  // ---- run ----
  auto* run = app.add_subcommand("run", "apply a maximal operator or mollifier");
  {
    auto in = std::make_shared<std::string>();
    auto op = std::make_shared<std::string>();
    auto tau = std::make_shared<std::string>("1/2");
    auto moll_r = std::make_shared<std::string>("");
    auto fam = std::make_shared<FamilyOpts>();
    run->add_option("--in", *in, "input step function JSON")->required();
    run->add_option("--op", *op, "operator")
        ->required()
        ->check(CLI::IsMember({"median-max", "tau-max", "hl-max", "dyadic-median-max",
                               "dyadic-tau-max", "dyadic-hl-max", "domination", "mollify"}));
    run->add_option("--tau", *tau, "tau parameter, rational in (0,1)");
    run->add_option("--r", *moll_r, "mollification radius (rational)");
    fam->attach(run);
    run->callback([&, in, op, tau, moll_r, fam]() {
      action = [&, in, op, tau, moll_r, fam]() {
        StepFunction f = load_stepfn(*in);
        StepFunction out;
        Json meta{{"op", *op}};
        if (*op == "mollify") {
          if (moll_r->empty()) throw CLI::ValidationError("run", "--r required for mollify");
          out = median_mollify(f, parse_rational(*moll_r));
          meta["r"] = *moll_r;
        } else if (*op == "domination") {
          out = domination_bound(f, parse_rational(*tau));
          meta["tau"] = *tau;
        } else {
          MaximalKind kind = MaximalKind::median();
          if (op->find("tau") != std::string::npos) {
            kind = MaximalKind::tau(parse_rational(*tau));
            meta["tau"] = *tau;
          } else if (op->find("hl") != std::string::npos) {
            kind = MaximalKind::hl_average();
          }
          if (op->rfind("dyadic-", 0) == 0) {
            out = dyadic_maximal(f, fam->build_spec(f.universe), kind);
            meta["family"] = family_to_json(CubeFamily::dyadic(f.universe, fam->build_spec(f.universe)));
          } else {
            CubeFamily family = fam->family == "dyadic"
                                    ? fam->build(f.universe)
                                    : CubeFamily::all_grid_aligned(f.universe, fam->max_side);
            MaximalResult res = brute_maximal(f, family, kind);
            if (res.empty_family) throw std::invalid_argument("cube family is empty");
            out = res.fn;
            meta["family"] = family_to_json(family);
          }
        }
        emit_stepfn(out, out_path, format, meta);
        return 0;
      };
    });
  }

  // ---- char ----
  auto* chr = app.add_subcommand("char", "compute the four weight characteristics");
  {
    auto in = std::make_shared<std::string>();
    auto p = std::make_shared<std::string>("2");
    auto which = std::make_shared<std::string>("A1,Ap,Ainf_exp,Ainf_fujii");
    auto fam = std::make_shared<FamilyOpts>();
    chr->add_option("--in", *in, "input weight JSON")->required();
    chr->add_option("--p", *p, "exponent for [w]_{A_p}, rational > 1");
    chr->add_option("--which", *which,
                    "comma subset of A1,Ap,Ainf_exp,Ainf_fujii (Ainf_fujii iterates a maximal "
                    "operator per cube; restrict the family on large universes)");
    fam->attach(chr);
    chr->callback([&, in, p, which, fam]() {
      action = [&, in, p, which, fam]() {
        Weight w = load_weight(*in);
        CubeFamily family = fam->build(w.base.universe);
        CubeFamily inner = CubeFamily::all_grid_aligned(w.base.universe, fam->max_side);
        Json j;
        j["family"] = family_to_json(family);
        j["characteristics"] = Json::array();
        for (const auto& name : split_commas(*which)) {
          if (name == "A1") {
            j["characteristics"].push_back(
                characteristic_to_json(a1_characteristic(w, family), "A1", family));
          } else if (name == "Ap") {
            j["characteristics"].push_back(characteristic_to_json(
                ap_characteristic(w, parse_rational(*p), family), "Ap(p=" + *p + ")", family));
          } else if (name == "Ainf_exp") {
            j["characteristics"].push_back(
                characteristic_to_json(ainf_exp_characteristic(w, family), "Ainf_exp", family));
          } else if (name == "Ainf_fujii") {
            j["characteristics"].push_back(characteristic_to_json(
                ainf_fujii_characteristic(w, family, inner), "Ainf_fujii", family));
          } else {
            throw CLI::ValidationError("char", "unknown characteristic: " + name);
          }
        }
        emit(out_path, j.dump(2));
        return 0;
      };
    });
  }

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "run property suites, one JSON line per claim");
  {
    auto suites = std::make_shared<std::vector<std::string>>();
    auto count = std::make_shared<long>(100);
    auto seed = std::make_shared<std::uint64_t>(17);
    auto tau = std::make_shared<std::string>("1/2");
    auto ts = std::make_shared<std::string>("1/2,1/4,1/8");
    auto ps = std::make_shared<std::string>("1,2,4");
    auto dim = std::make_shared<int>(1);
    auto cells = std::make_shared<long>(12);
    auto samples = std::make_shared<long>(10000);
    ver->add_option("suite", *suites,
                    "comparison a1 weak-type sharpness lp-lower expansion mollification "
                    "covering dyadic-oracle stopping truncation, or all")
        ->required();
    ver->add_option("--count", *count, "instances per suite (per dimension where applicable)");
    ver->add_option("--seed", *seed, "RNG seed");
    ver->add_option("--tau", *tau, "tau parameter");
    ver->add_option("--t", *ts, "comma-separated t values for the sharpness family");
    ver->add_option("--p", *ps, "comma-separated integer exponents");
    ver->add_option("--n", *dim, "dimension for the expansion suite");
    ver->add_option("--cells", *cells, "cells per axis for the expansion suite");
    ver->add_option("--samples", *samples, "sampled subsets for the expansion suite (n > 1)");
    ver->callback([&, suites, count, seed, tau, ts, ps, dim, cells, samples]() {
      action = [&, suites, count, seed, tau, ts, ps, dim, cells, samples]() {
        return run_verify_suites(*suites, *count, *seed, *tau, *ts, *ps, *dim, *cells, *samples,
                                 out_path);
      };
    });
  }

  // ---- report ----
  auto* rep = app.add_subcommand("report", "summarize a JSON-lines verification report");
  {
    auto in = std::make_shared<std::string>();
    rep->add_option("--in", *in, "report file (JSON lines)")->required();
    rep->callback([&, in]() {
      action = [&, in]() {
        std::istringstream is(read_text_file(*in));
        std::string line;
        bool ok = true;
        std::ostringstream table;
        while (std::getline(is, line)) {
          if (line.empty()) continue;
          Json j = Json::parse(line);
          bool pass = j.at("pass").get<bool>();
          ok = ok && pass;
          table << (pass ? "PASS" : "FAIL") << "  " << j.at("claim").get<std::string>() << "  "
                << j.at("instances").get<long>() << " instances";
          std::string ratio = j.value("worst_ratio", std::string());
          if (!ratio.empty()) table << "  worst ratio " << ratio;
          table << "  (" << j.at("runtime_seconds").get<double>() << " s)\n";
        }
        emit(out_path, table.str());
        return ok ? 0 : 1;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
