#pragma once

// Outer-bound inequality families for the K-user MISO broadcast channel with
// hybrid (P/D/N) CSIT, generated from marginal or joint CSIT statistics.
//
// Users are 0-based in the API. Labels use 1-based user numbers so they read
// like the usual d_1..d_K notation:
//   weighted(2,1,3)   sum_i d_{pi(i)}/i   over the ordering (2,1,3)
//   sum{1,3}          d_1 + d_3
//   joint{1,2|3}      2d_1 + 2d_2 + d_3 from joint-state aggregates

#include "csitdof/csit_model.hpp"
#include "csitdof/rational.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace csitdof {

/// coeffs . d <= rhs. Coefficients are never all zero.
struct LinearInequality {
    std::vector<Rational> coeffs;
    Rational rhs;
    std::string label;

    LinearInequality(std::vector<Rational> c, Rational r, std::string l);

    [[nodiscard]] std::size_t dim() const { return coeffs.size(); }
    /// Same halfspace (identical coefficients and rhs), label ignored.
    [[nodiscard]] bool same_halfspace(const LinearInequality& other) const {
        return coeffs == other.coeffs && rhs == other.rhs;
    }
    /// Human-readable form, e.g. "d1 + 1/2 d2 <= 5/4".
    [[nodiscard]] std::string to_string() const;
};

/// Halfspace representation {d >= 0 : every row holds}. Nonnegativity of each
/// coordinate is implied and never stored as a row.
class HPolytope {
public:
    HPolytope(std::size_t k, std::vector<LinearInequality> rows);

    [[nodiscard]] std::size_t k() const { return k_; }
    [[nodiscard]] const std::vector<LinearInequality>& rows() const { return rows_; }
    [[nodiscard]] std::size_t size() const { return rows_.size(); }

    /// Rows of `this` followed by the rows of `extra` not already present.
    [[nodiscard]] HPolytope intersect(const std::vector<LinearInequality>& extra) const;

private:
    std::size_t k_;
    std::vector<LinearInequality> rows_;
};

/// sum_{i=1}^{j} d_{pi(i)}/i <= 1 + sum_{i=2}^{j} (sum_{r<i} lambda_P^{pi(r)}) / (i(i-1)).
/// Throws InvalidArgument on an empty ordering, repeated users or out-of-range users.
LinearInequality weighted_bound(const MarginalProfile& profile, std::span<const std::size_t> ordering);

/// sum_{i in S} d_i <= 1 + (sum of lambda_P + lambda_D over S, minus its largest term).
/// This is the tightest of the per-permutation sum bounds for the subset.
LinearInequality sum_bound(const MarginalProfile& profile, std::span<const std::size_t> subset);

/// Every weighted bound (all orderings of all nonempty subsets) and every sum
/// bound, with exact duplicates merged (first label kept). Throws
/// UnsupportedDimension for K > kMaxUsers.
HPolytope outer_bound(const MarginalProfile& profile);

/// The three joint-statistics bounds for K = 3:
///   2d1 + 2d2 + d3 <= 2 + (lP1+lD1) + (lP2+lD2) + Pr[users 1,2 both in {P,D}]
/// and its two rotations (users {1,3} and {2,3} doubled).
std::array<LinearInequality, 3> joint_bounds_3user(const JointProfile& joint);

/// outer_bound(marginals_of_joint(joint)), intersected with the joint bounds when K = 3.
HPolytope refined_outer_bound(const JointProfile& joint);

}  // namespace csitdof
