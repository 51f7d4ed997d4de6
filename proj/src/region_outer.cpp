#include "csitdof/region_outer.hpp"

#include "csitdof/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace csitdof {

namespace {

void check_users(const MarginalProfile& profile, std::span<const std::size_t> users, const char* what) {
    if (users.empty()) throw InvalidArgument(std::string(what) + " must be nonempty");
    std::vector<bool> seen(profile.k(), false);
    for (auto u : users) {
        if (u >= profile.k())
            throw InvalidArgument(std::string(what) + " references user " + std::to_string(u + 1) + " but K = " +
                                  std::to_string(profile.k()));
        if (seen[u]) throw InvalidArgument(std::string(what) + " repeats user " + std::to_string(u + 1));
        seen[u] = true;
    }
}

std::string user_list(std::span<const std::size_t> users, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(users[i] + 1);
    }
    return out;
}

// Visits every ordered tuple of distinct users of length `len`.
template <class Fn>
void for_each_ordering(std::size_t k, std::size_t len, std::vector<std::size_t>& prefix, std::vector<bool>& used,
                       Fn&& fn) {
    if (prefix.size() == len) {
        fn(std::span<const std::size_t>(prefix));
        return;
    }
    for (std::size_t u = 0; u < k; ++u) {
        if (used[u]) continue;
        used[u] = true;
        prefix.push_back(u);
        for_each_ordering(k, len, prefix, used, fn);
        prefix.pop_back();
        used[u] = false;
    }
}

}  // namespace

LinearInequality::LinearInequality(std::vector<Rational> c, Rational r, std::string l)
    : coeffs(std::move(c)), rhs(std::move(r)), label(std::move(l)) {
    if (coeffs.empty()) throw InvalidArgument("inequality has no coefficients");
    if (std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& x) { return x.is_zero(); }))
        throw InvalidArgument("inequality '" + label + "' has all-zero coefficients");
}

std::string LinearInequality::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Rational& c = coeffs[i];
        if (c.is_zero()) continue;
        if (!first) os << (c.sign() < 0 ? " - " : " + ");
        else if (c.sign() < 0) os << "-";
        const Rational mag = abs(c);
        if (mag != Rational(1)) os << mag.pretty() << " ";
        os << "d" << (i + 1);
        first = false;
    }
    os << " <= " << rhs.pretty();
    return os.str();
}

HPolytope::HPolytope(std::size_t k, std::vector<LinearInequality> rows) : k_(k), rows_(std::move(rows)) {
    if (k == 0) throw InvalidArgument("polytope dimension must be at least 1");
    for (const auto& r : rows_)
        if (r.dim() != k)
            throw DimensionMismatch("row '" + r.label + "' has dimension " + std::to_string(r.dim()) + ", expected " +
                                    std::to_string(k));
}

HPolytope HPolytope::intersect(const std::vector<LinearInequality>& extra) const {
    std::vector<LinearInequality> rows = rows_;
    for (const auto& e : extra) {
        if (std::none_of(rows.begin(), rows.end(), [&](const LinearInequality& r) { return r.same_halfspace(e); }))
            rows.push_back(e);
    }
    return HPolytope(k_, std::move(rows));
}

LinearInequality weighted_bound(const MarginalProfile& profile, std::span<const std::size_t> ordering) {
    check_users(profile, ordering, "ordering");
    std::vector<Rational> coeffs(profile.k());
    Rational rhs(1);
    Rational prefix_p;  // sum of lambda_P over the first i-1 users of the ordering
    for (std::size_t pos = 0; pos < ordering.size(); ++pos) {
        const long i = static_cast<long>(pos) + 1;
        coeffs[ordering[pos]] = Rational(1, i);
        if (i >= 2) rhs += prefix_p / Rational(i * (i - 1));
        prefix_p += profile.user(ordering[pos]).p();
    }
    return {std::move(coeffs), std::move(rhs), "weighted(" + user_list(ordering, ",") + ")"};
}

LinearInequality sum_bound(const MarginalProfile& profile, std::span<const std::size_t> subset) {
    check_users(profile, subset, "subset");
    std::vector<std::size_t> sorted(subset.begin(), subset.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<Rational> known;  // lambda_P + lambda_D per member
    known.reserve(sorted.size());
    for (auto u : sorted) known.push_back(profile.user(u).p_plus_d());
    std::sort(known.begin(), known.end());

    std::vector<Rational> coeffs(profile.k());
    for (auto u : sorted) coeffs[u] = Rational(1);
    Rational rhs(1);
    for (std::size_t i = 0; i + 1 < known.size(); ++i) rhs += known[i];
    return {std::move(coeffs), std::move(rhs), "sum{" + user_list(sorted, ",") + "}"};
}

HPolytope outer_bound(const MarginalProfile& profile) {
    const std::size_t k = profile.k();
    if (k > kMaxUsers)
        throw UnsupportedDimension("K = " + std::to_string(k) + " exceeds the supported maximum of " +
                                   std::to_string(kMaxUsers));

    std::vector<LinearInequality> rows;
    auto add = [&](LinearInequality row) {
        if (std::none_of(rows.begin(), rows.end(), [&](const LinearInequality& r) { return r.same_halfspace(row); }))
            rows.push_back(std::move(row));
    };

    for (std::size_t j = 1; j <= k; ++j) {
        std::vector<std::size_t> prefix;
        std::vector<bool> used(k, false);
        for_each_ordering(k, j, prefix, used, [&](std::span<const std::size_t> ord) { add(weighted_bound(profile, ord)); });
    }
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t u = 0; u < k; ++u)
            if (mask & (std::size_t{1} << u)) subset.push_back(u);
        add(sum_bound(profile, subset));
    }
    return HPolytope(k, std::move(rows));
}

std::array<LinearInequality, 3> joint_bounds_3user(const JointProfile& joint) {
    if (joint.k() != 3)
        throw UnsupportedDimension("joint-statistics bounds are defined for K = 3 only, got K = " +
                                   std::to_string(joint.k()));
    const MarginalProfile marginals = marginals_of_joint(joint);
    const StateSet known{CsitState::P, CsitState::D};

    auto make = [&](std::size_t a, std::size_t b) {
        const std::size_t c = 3 - a - b;
        std::array<StateSet, 3> filter{StateSet::any(), StateSet::any(), StateSet::any()};
        filter[a] = known;
        filter[b] = known;
        std::vector<Rational> coeffs(3);
        coeffs[a] = Rational(2);
        coeffs[b] = Rational(2);
        coeffs[c] = Rational(1);
        Rational rhs = Rational(2) + marginals.user(a).p_plus_d() + marginals.user(b).p_plus_d() +
                       aggregate_sets(joint, filter);
        return LinearInequality(std::move(coeffs), std::move(rhs),
                                "joint{" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "|" +
                                    std::to_string(c + 1) + "}");
    };
    return {make(0, 1), make(0, 2), make(1, 2)};
}

HPolytope refined_outer_bound(const JointProfile& joint) {
    HPolytope base = outer_bound(marginals_of_joint(joint));
    if (joint.k() != 3) return base;
    const auto extra = joint_bounds_3user(joint);
    return base.intersect(std::vector<LinearInequality>(extra.begin(), extra.end()));
}

}  // namespace csitdof
