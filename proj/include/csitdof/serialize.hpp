#pragma once

// JSON/CSV/text encodings shared by the CLI and tests. Rationals are always
// "p/q" strings; users are 1-based in every file format.

#include "csitdof/achievability.hpp"
#include "csitdof/csit_model.hpp"
#include "csitdof/entropy_oracle.hpp"
#include "csitdof/mat_sim.hpp"
#include "csitdof/polytope.hpp"
#include "csitdof/region_outer.hpp"

#include "json.hpp"

#include <string>
#include <variant>

namespace csitdof {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& r);
/// Accepts "p/q", "p" or an integer. Throws ParseError.
Rational rational_from_json(const Json& j);

/// {"type":"marginal","k":K,"users":[{"p":..,"d":..,"n":..}, ...]}
Json profile_to_json(const MarginalProfile& profile);
/// {"type":"joint","k":K,"mass":{"PPN":"1/3", ...}}
Json profile_to_json(const JointProfile& joint);

using AnyProfile = std::variant<MarginalProfile, JointProfile>;
/// Throws ParseError for malformed documents, InvalidArgument for bad probabilities.
AnyProfile profile_from_json(const Json& j);

/// {"coeffs":[..],"rhs":..,"label":..}; with_float adds coeffs_float / rhs_float.
Json inequality_to_json(const LinearInequality& row, bool with_float = false);
LinearInequality inequality_from_json(const Json& j);
/// {"k":K,"rows":[...]}
Json hpolytope_to_json(const HPolytope& h, bool with_float = false);
HPolytope hpolytope_from_json(const Json& j);

/// Array of rational-string vectors.
Json vrep_to_json(const VRep& v);
VRep vrep_from_json(std::size_t k, const Json& j);
/// Header d1,...,dK then one vertex per line; K = 2 in polygon path order.
std::string vrep_to_csv(const VRep& v, bool with_float = false);

/// {"k":K,"slots":[{"type":"zf","serve":[..]}, {"type":"mat","scheme":[..],
/// "phase":m,"recipients":[..]}, {"type":"single","user":u}],"feedback":["PDN",...]}
Json schedule_to_json(const Schedule& s);
/// Ignores "feedback" (it is derived). Throws ParseError / MalformedSchedule.
Schedule schedule_from_json(const Json& j);

Json dof_to_json(const DoFPoint& p, bool with_float = false);
Json sim_report_to_json(const SimReport& r);
Json lemma_sweep_to_json(const LemmaSweep& s);

/// Parses JSON text, rethrowing syntax errors as ParseError.
Json parse_json(const std::string& text);

}  // namespace csitdof
