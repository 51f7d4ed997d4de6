#include "csitdof/polytope.hpp"

#include "csitdof/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

namespace csitdof {

namespace {

// Fixed-width bitset over constraint indices.
class RowSet {
public:
    RowSet() = default;
    explicit RowSet(std::size_t n) : words_((n + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    [[nodiscard]] bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    [[nodiscard]] std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    [[nodiscard]] RowSet intersect(const RowSet& o) const {
        RowSet r;
        r.words_.resize(words_.size());
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
        return r;
    }
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                fn(w * 64 + static_cast<std::size_t>(b));
                bits &= bits - 1;
            }
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

struct Constraint {
    std::vector<Rational> a;
    Rational b;
};

struct Vertex {
    std::vector<Rational> x;
    RowSet tight;
};

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& x) {
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) s += a[i] * x[i];
    return s;
}

// Incremental row-echelon basis used for exact rank tests.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

    // Returns true if v increased the rank.
    bool add(std::vector<Rational> v) {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const std::size_t p = pivots_[r];
            if (v[p].is_zero()) continue;
            const Rational f = v[p];
            for (std::size_t c = 0; c < dim_; ++c)
                if (!rows_[r][c].is_zero()) v[c] -= f * rows_[r][c];
        }
        const auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return !x.is_zero(); });
        if (it == v.end()) return false;
        const std::size_t p = static_cast<std::size_t>(it - v.begin());
        const Rational inv = Rational(1) / v[p];
        for (auto& x : v) x *= inv;
        // Keep the basis fully reduced so later reductions only touch pivots.
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Rational f = rows_[r][p];
            if (f.is_zero()) continue;
            for (std::size_t c = 0; c < dim_; ++c) rows_[r][c] -= f * v[c];
        }
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        return true;
    }
    [[nodiscard]] std::size_t rank() const { return rows_.size(); }

private:
    std::size_t dim_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> pivots_;
};

std::size_t affine_rank(const std::vector<const DoFPoint*>& pts, std::size_t k) {
    if (pts.empty()) return 0;
    EchelonBasis basis(k);
    for (std::size_t i = 1; i < pts.size() && basis.rank() < k; ++i) {
        std::vector<Rational> d(k);
        for (std::size_t c = 0; c < k; ++c) d[c] = pts[i]->coords[c] - pts[0]->coords[c];
        basis.add(std::move(d));
    }
    return basis.rank();
}

void check_dim(const HPolytope& h, std::size_t dim) {
    if (h.k() != dim)
        throw DimensionMismatch("dimension " + std::to_string(dim) + " does not match region dimension " +
                                std::to_string(h.k()));
}

// Row scaled so its largest |coefficient| is one; used to spot scaled duplicates.
std::pair<std::vector<Rational>, Rational> normalized(const LinearInequality& row) {
    Rational m;
    for (const auto& c : row.coeffs) m = std::max(m, abs(c));
    std::vector<Rational> a;
    a.reserve(row.coeffs.size());
    for (const auto& c : row.coeffs) a.push_back(c / m);
    return {std::move(a), row.rhs / m};
}

}  // namespace

std::string DoFPoint::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? ", " : "") << coords[i].pretty();
    os << ")";
    return os.str();
}

bool VRep::contains(const DoFPoint& p) const {
    return std::binary_search(vertices.begin(), vertices.end(), p);
}

VRep enumerate_vertices(const HPolytope& h) {
    const std::size_t k = h.k();
    VRep out{k, {}};

    // Bounding box 0 <= d_i <= upper_i from rows with nonnegative coefficients.
    std::vector<std::optional<Rational>> upper(k);
    for (const auto& row : h.rows()) {
        if (std::any_of(row.coeffs.begin(), row.coeffs.end(), [](const Rational& c) { return c.sign() < 0; }))
            continue;
        if (row.rhs.sign() < 0) return out;  // infeasible with d >= 0
        for (std::size_t i = 0; i < k; ++i) {
            if (row.coeffs[i].sign() <= 0) continue;
            Rational u = row.rhs / row.coeffs[i];
            if (!upper[i] || u < *upper[i]) upper[i] = std::move(u);
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        if (!upper[i])
            throw BoundednessError("coordinate d" + std::to_string(i + 1) +
                                   " has no nonnegative row bounding it from above");

    // Constraint indices: [0, n) user rows, [n, n+k) nonnegativity, [n+k, n+2k) box.
    const std::size_t n = h.size();
    const std::size_t total = n + 2 * k;
    std::vector<Constraint> cons;
    cons.reserve(total);
    for (const auto& row : h.rows()) cons.push_back({row.coeffs, row.rhs});
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rational> a(k);
        a[i] = Rational(-1);
        cons.push_back({std::move(a), Rational(0)});
    }
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rational> a(k);
        a[i] = Rational(1);
        cons.push_back({std::move(a), *upper[i]});
    }

    std::vector<Vertex> verts;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        Vertex v{std::vector<Rational>(k), RowSet(total)};
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::size_t{1} << i)) {
                v.x[i] = *upper[i];
                v.tight.set(n + k + i);
            } else {
                v.tight.set(n + i);
            }
        }
        // A zero upper bound collapses the box; mark both rows tight.
        for (std::size_t i = 0; i < k; ++i)
            if (upper[i]->is_zero()) {
                v.tight.set(n + i);
                v.tight.set(n + k + i);
            }
        verts.push_back(std::move(v));
    }
    if (std::any_of(upper.begin(), upper.end(), [](const auto& u) { return u->is_zero(); })) {
        std::sort(verts.begin(), verts.end(), [](const Vertex& a, const Vertex& b) { return a.x < b.x; });
        verts.erase(std::unique(verts.begin(), verts.end(), [](const Vertex& a, const Vertex& b) { return a.x == b.x; }),
                    verts.end());
    }

    auto adjacent = [&](const Vertex& u, const Vertex& v) {
        const RowSet common = u.tight.intersect(v.tight);
        if (k == 1) return true;
        if (common.count() + 1 < k) return false;
        EchelonBasis basis(k);
        bool done = false;
        common.for_each([&](std::size_t r) {
            if (done) return;
            basis.add(cons[r].a);
            if (basis.rank() + 1 >= k) done = true;
        });
        return done;
    };

    for (std::size_t r = 0; r < n; ++r) {
        const Constraint& c = cons[r];
        std::vector<Rational> slack(verts.size());
        bool any_out = false, any_in = false;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            slack[i] = dot(c.a, verts[i].x) - c.b;
            any_out |= slack[i].sign() > 0;
            any_in |= slack[i].sign() <= 0;
        }
        if (!any_in) return out;
        if (!any_out) {
            for (std::size_t i = 0; i < verts.size(); ++i)
                if (slack[i].is_zero()) verts[i].tight.set(r);
            continue;
        }

        std::vector<Vertex> next;
        std::vector<std::size_t> inside, outside;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (slack[i].sign() > 0) outside.push_back(i);
            else inside.push_back(i);
        }
        for (auto i : inside) {
            Vertex v = verts[i];
            if (slack[i].is_zero()) v.tight.set(r);
            next.push_back(std::move(v));
        }
        for (auto o : outside) {
            for (auto i : inside) {
                if (slack[i].is_zero()) continue;  // cut through an existing vertex adds no point
                if (!adjacent(verts[o], verts[i])) continue;
                // Point on segment [in, out] where the row is tight.
                const Rational t = slack[i] / (slack[i] - slack[o]);
                Vertex w{std::vector<Rational>(k), verts[o].tight.intersect(verts[i].tight)};
                for (std::size_t d = 0; d < k; ++d) w.x[d] = verts[i].x[d] + t * (verts[o].x[d] - verts[i].x[d]);
                w.tight.set(r);
                next.push_back(std::move(w));
            }
        }
        verts = std::move(next);
    }

    out.vertices.reserve(verts.size());
    for (auto& v : verts) out.vertices.emplace_back(std::move(v.x));
    std::sort(out.vertices.begin(), out.vertices.end());
    out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
    return out;
}

bool satisfies(const LinearInequality& row, const DoFPoint& p) {
    return dot(row.coeffs, p.coords) <= row.rhs;
}

bool is_tight(const LinearInequality& row, const DoFPoint& p) {
    return dot(row.coeffs, p.coords) == row.rhs;
}

bool contains_point(const HPolytope& h, const DoFPoint& p) {
    check_dim(h, p.dim());
    if (std::any_of(p.coords.begin(), p.coords.end(), [](const Rational& x) { return x.sign() < 0; })) return false;
    return std::all_of(h.rows().begin(), h.rows().end(), [&](const LinearInequality& r) { return satisfies(r, p); });
}

std::vector<std::size_t> tight_rows(const HPolytope& h, const DoFPoint& p) {
    check_dim(h, p.dim());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (is_tight(h.rows()[i], p)) out.push_back(i);
    return out;
}

std::optional<DoFPoint> containment_witness(const HPolytope& a, const HPolytope& b) {
    check_dim(b, a.k());
    for (const auto& v : enumerate_vertices(a).vertices)
        if (!contains_point(b, v)) return v;
    return std::nullopt;
}

bool region_subset(const HPolytope& a, const HPolytope& b) {
    return !containment_witness(a, b).has_value();
}

bool regions_equal(const HPolytope& a, const HPolytope& b) {
    return region_subset(a, b) && region_subset(b, a);
}

HPolytope remove_redundant(const HPolytope& h) {
    const std::size_t k = h.k();
    const VRep v = enumerate_vertices(h);

    std::vector<const DoFPoint*> all;
    for (const auto& p : v.vertices) all.push_back(&p);
    const bool full_dim = affine_rank(all, k) == k;

    if (!full_dim) {
        // Lower-dimensional (or empty) region: drop rows greedily while the
        // vertex set is unchanged.
        std::vector<LinearInequality> kept = h.rows();
        for (std::size_t i = 0; i < kept.size();) {
            std::vector<LinearInequality> trial = kept;
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
            bool same = false;
            try {
                same = enumerate_vertices(HPolytope(k, trial)).vertices == v.vertices;
            } catch (const BoundednessError&) {
            }
            if (same) kept = std::move(trial);
            else ++i;
        }
        return HPolytope(k, std::move(kept));
    }

    std::vector<LinearInequality> kept;
    std::vector<std::pair<std::vector<Rational>, Rational>> kept_norm;
    for (const auto& row : h.rows()) {
        auto norm = normalized(row);
        if (std::find(kept_norm.begin(), kept_norm.end(), norm) != kept_norm.end()) continue;
        std::vector<const DoFPoint*> on;
        for (const auto& p : v.vertices)
            if (is_tight(row, p)) on.push_back(&p);
        if (on.size() < k || affine_rank(on, k) + 1 != k) continue;
        // A facet that coincides with an implicit d_i >= 0 facet adds nothing.
        const auto nz = std::count_if(norm.first.begin(), norm.first.end(), [](const Rational& c) { return !c.is_zero(); });
        if (nz == 1 && norm.second.is_zero() &&
            std::any_of(norm.first.begin(), norm.first.end(), [](const Rational& c) { return c.sign() < 0; }))
            continue;
        kept.push_back(row);
        kept_norm.push_back(std::move(norm));
    }
    return HPolytope(k, std::move(kept));
}

std::vector<DoFPoint> polygon_path(const VRep& v) {
    if (v.k != 2) throw UnsupportedDimension("polygon path needs a 2-D region");
    if (v.vertices.size() < 3) return v.vertices;
    double cx = 0, cy = 0;
    for (const auto& p : v.vertices) {
        cx += p[0].to_double();
        cy += p[1].to_double();
    }
    cx /= static_cast<double>(v.vertices.size());
    cy /= static_cast<double>(v.vertices.size());
    std::vector<DoFPoint> path = v.vertices;
    auto angle = [&](const DoFPoint& p) { return std::atan2(p[1].to_double() - cy, p[0].to_double() - cx); };
    std::sort(path.begin(), path.end(), [&](const DoFPoint& a, const DoFPoint& b) { return angle(a) < angle(b); });
    // Start at the origin when present, which is where plots usually begin.
    const auto origin = std::find(path.begin(), path.end(), DoFPoint({Rational(0), Rational(0)}));
    if (origin != path.end()) std::rotate(path.begin(), origin, path.end());
    return path;
}

}  // namespace csitdof
