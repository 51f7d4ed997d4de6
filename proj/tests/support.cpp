#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace csitdof::testing {

DoFPoint point(std::initializer_list<const char*> coords) {
    std::vector<Rational> c;
    for (const char* x : coords) c.push_back(Rational::parse(x));
    return DoFPoint(std::move(c));
}

MarginalProfile sym(std::size_t k, const char* p, const char* d) {
    return MarginalProfile::symmetric(k, MarginalTriple::from_pd(R(p), R(d)));
}

namespace {

// Solves a x = b exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace

VRep brute_force_vertices(const HPolytope& h) {
    const std::size_t k = h.k();
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (const auto& r : h.rows()) {
        rows.push_back(r.coeffs);
        rhs.push_back(r.rhs);
    }
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rational> e(k, Rational(0));
        e[i] = -1;
        rows.push_back(e);
        rhs.push_back(0);
    }

    VRep out;
    out.k = k;
    std::vector<bool> pick(rows.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
    do {
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (pick[i]) {
                a.push_back(rows[i]);
                b.push_back(rhs[i]);
            }
        if (auto x = solve(a, b)) {
            DoFPoint p(*x);
            if (contains_point(h, p)) out.vertices.push_back(std::move(p));
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(out.vertices.begin(), out.vertices.end());
    out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
    return out;
}

Rational counting_lambda_d_min(int k, int j) {
    const MatPlan plan = mat_plan(k);
    long events = 0, slots = 0;
    for (const auto& ph : plan.phases) {
        if (ph.order < j) continue;
        events += ph.feedback_events();
        slots += ph.total_slots();
    }
    return Rational(events, slots * k);
}

CsitPattern pattern_rows(std::initializer_list<const char*> rows) {
    std::string text;
    for (const char* r : rows) text += std::string(r) + "\n";
    return CsitPattern::parse(text);
}

UserSet all_users(int k) {
    UserSet u(static_cast<std::size_t>(k));
    std::iota(u.begin(), u.end(), std::size_t{0});
    return u;
}

CsitPattern pattern_a() { return pattern_rows({"PNN", "PNN", "PNN"}); }
CsitPattern pattern_b() { return pattern_rows({"PNN", "NPN", "NNP"}); }

}  // namespace csitdof::testing
