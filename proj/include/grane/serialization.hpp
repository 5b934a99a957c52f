#pragma once

#include <json.hpp>

#include "grane/augmented.hpp"
#include "grane/game.hpp"
#include "grane/network.hpp"

// JSON forms of the value types. Infinite box sides are written as null.
namespace grane {

using Json = nlohmann::ordered_json;

/// {n, a[], b[], C[][], boxes[][2]} plus an optional "antisymmetric" flag.
Json to_json(const QuadraticGame& q);
QuadraticGame quadratic_game_from_json(const Json& j);

/// {n, edges[][2]}
Json to_json(const Graph& g);
Graph graph_from_json(const Json& j);

/// {W[][], sigma_max, lambda_min_nz}
Json to_json(const MixingMatrix& m);

Json to_json(const GameConstants& k);

/// {alpha[], L_Fa, mu_Fa?, mu_r_Fa?, gamma, C, bound_holds, ...}
Json constants_report(const AugmentedConfig& cfg, const ConditionReport& report);

}  // namespace grane
