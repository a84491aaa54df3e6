#pragma once

#include <string>

#include "medimax/weights.hpp"

// Single-header nlohmann/json lives in vendor/; pull the full header here so
// callers only include this file.
#include "json.hpp"

namespace medimax {

using Json = nlohmann::json;

/// Rationals serialize as "p/q" strings throughout so golden files stay
/// exact across platforms.
Json universe_to_json(const Universe& u);
Universe universe_from_json(const Json& j);

Json stepfn_to_json(const StepFunction& f);
StepFunction stepfn_from_json(const Json& j);

Json weight_to_json(const Weight& w);
Weight weight_from_json(const Json& j);

Json family_to_json(const CubeFamily& family);
CubeFamily family_from_json(const Json& j);

Json grid_cube_to_json(const GridCube& q);
GridCube grid_cube_from_json(const Json& j);

Json characteristic_to_json(const Characteristic& c, const std::string& name,
                            const CubeFamily& family);

std::string stepfn_to_csv(const StepFunction& f);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace medimax
