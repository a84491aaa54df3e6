#include "medimax/io.hpp"

#include <fstream>
#include <sstream>

namespace medimax {

namespace {

std::vector<Rational> rationals_from_json(const Json& j) {
  std::vector<Rational> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    out.push_back(parse_rational(item.get<std::string>()));
  }
  return out;
}

Json rationals_to_json(const std::vector<Rational>& values) {
  Json j = Json::array();
  for (const auto& v : values) {
    j.push_back(format_rational(v));
  }
  return j;
}

}  // namespace

Json universe_to_json(const Universe& u) {
  return Json{{"dims", u.dim},
              {"origin", rationals_to_json(u.origin)},
              {"cell", format_rational(u.cell)},
              {"extent", u.extent}};
}

Universe universe_from_json(const Json& j) {
  Universe u;
  u.dim = j.at("dims").get<int>();
  u.origin = rationals_from_json(j.at("origin"));
  u.cell = parse_rational(j.at("cell").get<std::string>());
  u.extent = j.at("extent").get<std::vector<long>>();
  u.validate();
  return u;
}

Json stepfn_to_json(const StepFunction& f) {
  Json j = universe_to_json(f.universe);
  j["values"] = rationals_to_json(f.values);
  return j;
}

StepFunction stepfn_from_json(const Json& j) {
  StepFunction f;
  f.universe = universe_from_json(j);
  f.values = rationals_from_json(j.at("values"));
  f.validate();
  return f;
}

Json weight_to_json(const Weight& w) { return stepfn_to_json(w.base); }

Weight weight_from_json(const Json& j) {
  Weight w{stepfn_from_json(j)};
  w.validate();
  return w;
}

Json family_to_json(const CubeFamily& family) {
  Json j;
  j["universe"] = universe_to_json(family.universe);
  switch (family.kind) {
    case CubeFamily::Kind::all_grid_aligned:
      j["kind"] = "all_grid_aligned";
      j["max_side"] = family.max_side;
      break;
    case CubeFamily::Kind::dyadic: {
      j["kind"] = "dyadic";
      Json shift = Json::array();
      for (const auto& s : family.spec.shift) {
        shift.push_back(format_rational(s));
      }
      j["shift"] = shift;
      j["k_min"] = family.spec.k_min;
      j["k_max"] = family.spec.k_max;
      break;
    }
    case CubeFamily::Kind::explicit_list: {
      j["kind"] = "explicit";
      Json cubes = Json::array();
      for (const auto& q : family.cubes) {
        cubes.push_back(grid_cube_to_json(q));
      }
      j["cubes"] = cubes;
      break;
    }
  }
  return j;
}

CubeFamily family_from_json(const Json& j) {
  Universe u = universe_from_json(j.at("universe"));
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "all_grid_aligned") {
    return CubeFamily::all_grid_aligned(std::move(u), j.value("max_side", 0L));
  }
  if (kind == "dyadic") {
    DyadicGridSpec spec;
    spec.shift = rationals_from_json(j.at("shift"));
    spec.k_min = j.at("k_min").get<int>();
    spec.k_max = j.at("k_max").get<int>();
    return CubeFamily::dyadic(std::move(u), std::move(spec));
  }
  if (kind == "explicit") {
    std::vector<GridCube> cubes;
    for (const auto& item : j.at("cubes")) {
      cubes.push_back(grid_cube_from_json(item));
    }
    return CubeFamily::explicit_list(std::move(u), std::move(cubes));
  }
  throw std::invalid_argument("unknown family kind: " + kind);
}

Json grid_cube_to_json(const GridCube& q) {
  return Json{{"corner", q.corner}, {"side", q.side}};
}

GridCube grid_cube_from_json(const Json& j) {
  return GridCube{j.at("corner").get<std::vector<long>>(), j.at("side").get<long>()};
}

Json characteristic_to_json(const Characteristic& c, const std::string& name,
                            const CubeFamily& family) {
  Json j;
  j["characteristic"] = name;
  if (c.infinite) {
    j["value"] = "inf";
  } else if (c.exact) {
    j["value"] = format_rational(c.value);
    j["value_approx"] = c.approx;
  } else {
    j["value"] = c.approx;
  }
  if (c.witness) {
    j["witness"] = grid_cube_to_json(*c.witness);
  }
  if (c.skipped_cubes > 0) {
    j["skipped_cubes"] = c.skipped_cubes;
  }
  j["family"] = family_to_json(family);
  return j;
}

std::string stepfn_to_csv(const StepFunction& f) {
  std::ostringstream out;
  out << "index";
  for (int a = 0; a < f.universe.dim; ++a) {
    out << ",coord" << a;
  }
  out << ",value\n";
  CellBox all{std::vector<long>(static_cast<std::size_t>(f.universe.dim), 0), f.universe.extent};
  long idx = 0;
  for_each_cell(all, [&](const std::vector<long>& c) {
    out << idx++;
    for (int a = 0; a < f.universe.dim; ++a) {
      out << "," << format_rational(f.universe.coordinate(a, c[static_cast<std::size_t>(a)]));
    }
    out << "," << format_rational(f.at(c)) << "\n";
  });
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  // Write-then-rename keeps partially written outputs invisible.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp);
    }
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot rename into place: " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace medimax
