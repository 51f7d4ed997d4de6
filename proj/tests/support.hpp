#pragma once

// Independent oracles used by the unit and acceptance tests.

#include "csitdof/achievability.hpp"
#include "csitdof/csit_model.hpp"
#include "csitdof/polytope.hpp"
#include "csitdof/rational.hpp"
#include "csitdof/region_outer.hpp"

#include <string>
#include <vector>

namespace csitdof::testing {

inline Rational R(const char* text) { return Rational::parse(text); }

DoFPoint point(std::initializer_list<const char*> coords);

MarginalProfile sym(std::size_t k, const char* p, const char* d);

/// Vertices by solving every K-subset of rows (nonnegativity included) exactly.
VRep brute_force_vertices(const HPolytope& h);

/// Delayed-CSI events of phases j..k over (slots of phases j..k) * k.
Rational counting_lambda_d_min(int k, int j);

/// Pattern from rows such as {"PNN", "NPN", "NNP"}.
CsitPattern pattern_rows(std::initializer_list<const char*> rows);

/// {0, ..., k-1}.
UserSet all_users(int k);

/// Patterns with equal marginals: (a) columns PPP, NNN, NNN; (b) columns PNN, NPN, NNP.
CsitPattern pattern_a();
CsitPattern pattern_b();

}  // namespace csitdof::testing
