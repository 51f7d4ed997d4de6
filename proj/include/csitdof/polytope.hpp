#pragma once

// Exact-rational polyhedral engine for the small bounded regions this toolkit
// handles (K <= 6): vertex enumeration, membership, containment and
// redundancy removal. All regions live in the nonnegative orthant.

#include "csitdof/rational.hpp"
#include "csitdof/region_outer.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace csitdof {

/// A DoF tuple (d_1, ..., d_K).
struct DoFPoint {
    std::vector<Rational> coords;

    DoFPoint() = default;
    explicit DoFPoint(std::vector<Rational> c) : coords(std::move(c)) {}

    [[nodiscard]] std::size_t dim() const { return coords.size(); }
    [[nodiscard]] const Rational& operator[](std::size_t i) const { return coords[i]; }
    /// "(23/33, 23/33, 23/33)"
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const DoFPoint&, const DoFPoint&) = default;
    friend auto operator<=>(const DoFPoint& a, const DoFPoint& b) { return a.coords <=> b.coords; }
};

/// Vertex representation: sorted, duplicate-free.
struct VRep {
    std::size_t k = 0;
    std::vector<DoFPoint> vertices;

    [[nodiscard]] bool contains(const DoFPoint& p) const;
    [[nodiscard]] std::size_t size() const { return vertices.size(); }
    [[nodiscard]] bool empty() const { return vertices.empty(); }
};

/// Exact vertex set of h (with d >= 0 implied).
///
/// Incremental cutting: start from a bounding box derived from h's rows, cut
/// by one row at a time, creating new vertices on edges that cross the cut.
/// Edge adjacency uses the algebraic rank test on the common tight rows, so
/// degenerate vertices (more than K tight rows) are handled exactly.
/// Throws BoundednessError if some coordinate has no nonnegative row bounding it.
VRep enumerate_vertices(const HPolytope& h);

/// a . p <= rhs exactly.
bool satisfies(const LinearInequality& row, const DoFPoint& p);
/// a . p == rhs exactly.
bool is_tight(const LinearInequality& row, const DoFPoint& p);

/// p >= 0 and every row of h holds. Throws DimensionMismatch.
bool contains_point(const HPolytope& h, const DoFPoint& p);

/// Indices of rows of h that hold with equality at p.
std::vector<std::size_t> tight_rows(const HPolytope& h, const DoFPoint& p);

/// a is contained in b (every vertex of a lies in b).
bool region_subset(const HPolytope& a, const HPolytope& b);
bool regions_equal(const HPolytope& a, const HPolytope& b);
/// A vertex of a outside b, if any.
std::optional<DoFPoint> containment_witness(const HPolytope& a, const HPolytope& b);

/// Minimal subset of rows defining the same region; survivors keep their
/// labels and relative order. For a full-dimensional region the survivors are
/// exactly the facet-defining rows (first of any scaled duplicates).
HPolytope remove_redundant(const HPolytope& h);

/// Vertices of a 2-D region ordered counter-clockwise as a closed polygon path
/// (first vertex not repeated). Throws UnsupportedDimension unless k == 2.
std::vector<DoFPoint> polygon_path(const VRep& v);

}  // namespace csitdof
