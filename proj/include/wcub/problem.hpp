#pragma once

#include "wcub/sde.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace wcub {

// Problem file:
//   { "state_dim": n, "driving_dim": d, "kind": "affine" | "polynomial" | "gbm",
//     "params": {...}, "x0": [...], "payoff": "identity" | "coordinate:i" | "power:i:p",
//     "T": float, "reference": float | null }
//
// params by kind:
//   gbm:        { "a": float, "b": float | [d floats] }   (state_dim 1)
//   affine:     { "A": [d+1 matrices n x n], "b": [d+1 vectors] (optional) }
//   polynomial: { "fields": [d+1 directions][n components][ {"coeff": c, "powers": [n ints]} ] }
//
// Direction 0 is the drift. A null gbm reference is filled in analytically.
[[nodiscard]] SDEProblem problem_from_json(const nlohmann::json& j);
[[nodiscard]] SDEProblem load_problem(const std::string& path);

} // namespace wcub
