#include "csitdof/achievability.hpp"

#include "csitdof/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace csitdof {

namespace {

long binom(long n, long r) {
    if (r < 0 || r > n) return 0;
    long out = 1;
    for (long i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

long factorial(long n) {
    long out = 1;
    for (long i = 2; i <= n; ++i) out *= i;
    return out;
}

void check_scheme_size(int k, int min_k = 2) {
    if (k < min_k) throw InvalidArgument("MAT needs at least " + std::to_string(min_k) + " users, got " + std::to_string(k));
    if (k > static_cast<int>(kMaxUsers))
        throw UnsupportedDimension("MAT plans are supported up to " + std::to_string(kMaxUsers) + " users");
}

MatPlan plan_with_repetitions(int k, const std::vector<long>& reps) {
    MatPlan plan{k, {}};
    for (int m = 1; m <= k; ++m) {
        MatPhase ph;
        ph.order = m;
        ph.repetitions = reps[static_cast<std::size_t>(m - 1)];
        ph.slots_per_repetition = binom(k, m);
        ph.inputs = (k - m + 1) * binom(k, m);
        ph.outputs = m * binom(k, m + 1);
        ph.feedback_per_slot = k - m;
        plan.phases.push_back(ph);
    }
    return plan;
}

void check_user_set(const UserSet& users, std::size_t k, const char* what) {
    if (users.empty()) throw MalformedSchedule(std::string(what) + " is empty");
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (users[i] >= k) throw MalformedSchedule(std::string(what) + " references a user outside [1, K]");
        if (i > 0 && users[i] <= users[i - 1]) throw MalformedSchedule(std::string(what) + " is not sorted and unique");
    }
}

void validate_action(const SlotAction& action, std::size_t k) {
    if (const auto* zf = std::get_if<ZfAction>(&action)) {
        check_user_set(zf->served, k, "ZF served set");
    } else if (const auto* mat = std::get_if<MatAction>(&action)) {
        check_user_set(mat->scheme, k, "MAT scheme");
        check_user_set(mat->recipients, k, "MAT recipients");
        if (mat->scheme.size() < 2) throw MalformedSchedule("MAT scheme needs at least 2 users");
        if (mat->phase < 1 || static_cast<std::size_t>(mat->phase) > mat->scheme.size())
            throw MalformedSchedule("MAT phase out of range");
        if (mat->recipients.size() != static_cast<std::size_t>(mat->phase))
            throw MalformedSchedule("MAT phase-m slot must have m recipients");
        if (!std::includes(mat->scheme.begin(), mat->scheme.end(), mat->recipients.begin(), mat->recipients.end()))
            throw MalformedSchedule("MAT recipients are not scheme members");
    } else {
        if (std::get<SingleAction>(action).user >= k) throw MalformedSchedule("single-user slot outside [1, K]");
    }
}

}  // namespace

std::string to_string(const UserSet& users) {
    std::string out = "{";
    for (std::size_t i = 0; i < users.size(); ++i) out += (i ? "," : "") + std::to_string(users[i] + 1);
    return out + "}";
}

std::vector<UserSet> nonempty_subsets(std::size_t k) {
    UserSet all(k);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<UserSet> out;
    for (std::size_t j = 1; j <= k; ++j) {
        auto s = subsets_of_size(all, j);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

std::vector<UserSet> subsets_of_size(const UserSet& users, std::size_t m) {
    std::vector<UserSet> out;
    if (m > users.size()) return out;
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const std::size_t n = users.size();
    while (true) {
        UserSet s;
        for (auto i : idx) s.push_back(users[i]);
        out.push_back(std::move(s));
        std::size_t pos = m;
        while (pos > 0 && idx[pos - 1] == n - m + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t q = pos; q < m; ++q) idx[q] = idx[q - 1] + 1;
    }
    return out;
}

long MatPlan::total_slots() const {
    long s = 0;
    for (const auto& ph : phases) s += ph.total_slots();
    return s;
}

long MatPlan::symbols_per_user() const {
    return phases.empty() ? 0 : phases.front().repetitions * phases.front().inputs / k;
}

Rational MatPlan::per_user_dof() const {
    return Rational(symbols_per_user(), total_slots());
}

MatPlan mat_plan(int k) {
    check_scheme_size(k);
    std::vector<long> reps;
    for (int m = 1; m <= k; ++m) reps.push_back(factorial(m - 1) * factorial(k - m) * k);
    return plan_with_repetitions(k, reps);
}

MatPlan minimal_mat_plan(int k, long copies) {
    check_scheme_size(k, 1);
    if (copies < 1) throw InvalidArgument("MAT plan copies must be positive");
    // r_m proportional to 1 / C(k-1, m-1); scale by the lcm to make all integral.
    long l = 1;
    for (int m = 1; m <= k; ++m) l = std::lcm(l, binom(k - 1, m - 1));
    std::vector<long> reps;
    for (int m = 1; m <= k; ++m) reps.push_back(copies * l / binom(k - 1, m - 1));
    return plan_with_repetitions(k, reps);
}

Rational lambda_d_min(int k, int j) {
    if (k < 2) throw InvalidArgument("lambda_d_min needs k >= 2");
    if (j < 1 || j > k) throw InvalidArgument("lambda_d_min needs 1 <= j <= k");
    return Rational(1) - Rational(k - j + 1) / (Rational(k) * harmonic(j, k));
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::ZfOnly: return "zf-only";
        case Regime::ZfMat: return "zf-mat";
        case Regime::Unclassified: break;
    }
    return "unclassified";
}

Regime classify_regime(std::size_t k, const MarginalTriple& triple) {
    if (triple.d().is_zero()) return Regime::ZfOnly;
    const Rational tail = harmonic(2, static_cast<int>(k));
    if (tail.is_zero()) return Regime::ZfMat;  // k = 1: nothing to align
    return triple.n() <= triple.d() / tail ? Regime::ZfMat : Regime::Unclassified;
}

DoFPoint corner_point_symmetric(std::size_t k, const Rational& lambda_p, const UserSet& subset) {
    if (subset.empty()) throw InvalidArgument("corner point needs a nonempty subset");
    const int j = static_cast<int>(subset.size());
    const Rational inside = (Rational(1) + lambda_p * harmonic(2, j)) / harmonic(1, j);
    std::vector<Rational> c(k, lambda_p);
    for (auto u : subset) {
        if (u >= k) throw InvalidArgument("subset references a user outside [1, K]");
        c[u] = inside;
    }
    return DoFPoint(std::move(c));
}

std::vector<DoFPoint> corner_points_symmetric(std::size_t k, const Rational& lambda_p, const Rational& lambda_d) {
    (void)MarginalTriple::from_pd(lambda_p, lambda_d);
    if (k == 0 || k > kMaxUsers) throw UnsupportedDimension("K must be in [1, " + std::to_string(kMaxUsers) + "]");
    std::vector<DoFPoint> out;
    for (const auto& s : nonempty_subsets(k)) out.push_back(corner_point_symmetric(k, lambda_p, s));
    return out;
}

JointState required_csit(const SlotAction& action, std::size_t k) {
    JointState req(k, CsitState::N);
    if (const auto* zf = std::get_if<ZfAction>(&action)) {
        for (auto u : zf->served) req.at(u) = CsitState::P;
    } else if (const auto* mat = std::get_if<MatAction>(&action)) {
        for (auto u : mat->scheme)
            if (!std::binary_search(mat->recipients.begin(), mat->recipients.end(), u)) req.at(u) = CsitState::D;
    }
    return req;
}

Schedule::Schedule(std::size_t k, std::vector<SlotAction> slots) : k_(k), slots_(std::move(slots)) {
    if (k == 0 || k > kMaxUsers) throw UnsupportedDimension("schedule K must be in [1, " + std::to_string(kMaxUsers) + "]");
    feedback_.reserve(slots_.size());
    for (const auto& a : slots_) {
        validate_action(a, k_);
        feedback_.push_back(required_csit(a, k_));
    }
}

std::vector<MatAction> mat_slot_sequence(const UserSet& scheme, const MatPlan& plan) {
    if (scheme.size() != static_cast<std::size_t>(plan.k))
        throw InvalidArgument("scheme size " + std::to_string(scheme.size()) + " does not match plan size " +
                              std::to_string(plan.k));
    std::vector<MatAction> seq;
    seq.reserve(static_cast<std::size_t>(plan.total_slots()));
    for (const auto& ph : plan.phases) {
        const auto groups = subsets_of_size(scheme, static_cast<std::size_t>(ph.order));
        for (long r = 0; r < ph.repetitions; ++r)
            for (const auto& g : groups) seq.push_back(MatAction{scheme, ph.order, g});
    }
    return seq;
}

std::vector<MatRun> mat_runs(const Schedule& s) {
    std::vector<UserSet> order;
    std::map<UserSet, std::vector<std::size_t>> groups;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const auto* mat = std::get_if<MatAction>(&s.slots()[t]);
        if (!mat) continue;
        auto [it, fresh] = groups.try_emplace(mat->scheme);
        if (fresh) order.push_back(mat->scheme);
        it->second.push_back(t);
    }

    std::vector<MatRun> runs;
    for (const auto& scheme : order) {
        const auto& idx = groups[scheme];
        const int j = static_cast<int>(scheme.size());
        const MatPlan unit = minimal_mat_plan(j);
        const long unit_phase1 = unit.phases.front().total_slots();
        std::size_t pos = 0;
        while (pos < idx.size()) {
            std::size_t phase1 = 0;
            while (pos + phase1 < idx.size() && std::get<MatAction>(s.slots()[idx[pos + phase1]]).phase == 1) ++phase1;
            if (phase1 == 0 || phase1 % static_cast<std::size_t>(unit_phase1) != 0)
                throw MalformedSchedule("MAT run over " + to_string(scheme) + " starting at slot " +
                                        std::to_string(idx[pos]) + " does not begin with a whole phase 1");
            MatPlan plan = minimal_mat_plan(j, static_cast<long>(phase1) / unit_phase1);
            const auto expected = mat_slot_sequence(scheme, plan);
            if (pos + expected.size() > idx.size())
                throw MalformedSchedule("MAT run over " + to_string(scheme) + " is truncated");
            MatRun run{scheme, plan, {}};
            for (std::size_t q = 0; q < expected.size(); ++q) {
                const auto t = idx[pos + q];
                if (!(std::get<MatAction>(s.slots()[t]) == expected[q]))
                    throw MalformedSchedule("slot " + std::to_string(t) + " breaks the MAT slot order of scheme " +
                                            to_string(scheme));
                run.slots.push_back(t);
            }
            pos += expected.size();
            runs.push_back(std::move(run));
        }
    }
    return runs;
}

DoFPoint dof_of_schedule(const Schedule& s) {
    if (s.size() == 0) throw MalformedSchedule("empty schedule");
    std::vector<long> symbols(s.k(), 0);
    for (const auto& a : s.slots()) {
        if (const auto* zf = std::get_if<ZfAction>(&a)) {
            for (auto u : zf->served) ++symbols[u];
        } else if (const auto* single = std::get_if<SingleAction>(&a)) {
            ++symbols[single->user];
        }
    }
    for (const auto& run : mat_runs(s))
        for (auto u : run.scheme) symbols[u] += run.plan.symbols_per_user();

    std::vector<Rational> c;
    c.reserve(s.k());
    for (auto n : symbols) c.emplace_back(n, static_cast<long>(s.size()));
    return DoFPoint(std::move(c));
}

Synthesis synthesize_schedule(std::size_t k, const Rational& lambda_p, const Rational& lambda_d, const UserSet& subset) {
    if (k == 0 || k > kMaxUsers) throw UnsupportedDimension("K must be in [1, " + std::to_string(kMaxUsers) + "]");
    const MarginalTriple triple = MarginalTriple::from_pd(lambda_p, lambda_d);
    if (subset.empty()) throw InvalidArgument("subset must be nonempty");
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] >= k) throw InvalidArgument("subset references a user outside [1, K]");
        if (i && subset[i] <= subset[i - 1]) throw InvalidArgument("subset must be sorted and unique");
    }

    const Regime regime = classify_regime(k, triple);
    if (regime == Regime::Unclassified) {
        const Rational limit = triple.d() / harmonic(2, static_cast<int>(k));
        throw NotSynthesizable("regime unclassified: lambda_N = " + triple.n().pretty() +
                               " exceeds lambda_D / sum_{i=2}^{K} 1/i = " + limit.pretty());
    }

    const int j = static_cast<int>(subset.size());
    const Rational dmin = j >= 2 ? lambda_d_min(j, 1) : Rational(0);
    if (triple.d() < dmin * (Rational(1) - triple.p())) {
        throw NotSynthesizable("lambda_D = " + triple.d().pretty() + " is below lambda_d_min(" + std::to_string(j) +
                               ",1) * (1 - lambda_P) = " + (dmin * (Rational(1) - triple.p())).pretty() +
                               "; a " + std::to_string(j) + "-user MAT cannot be fed");
    }

    const long m1 = triple.p().numerator().get_si(), n1 = triple.p().denominator().get_si();
    const long m2 = triple.d().numerator().get_si(), n2 = triple.d().denominator().get_si();
    const long n = dmin.denominator().get_si();

    long scale = 1;
    const long base_rest = n * (n1 * n2 - m1 * n2);
    if (j >= 2 && base_rest > 0) {
        const long unit = minimal_mat_plan(j).total_slots();
        scale = unit / std::gcd(base_rest, unit);
    }
    const long period = scale * n * n1 * n2;
    const long zf = scale * n * m1 * n2;
    const long rest = period - zf;
    const long d_cells = scale * n * n1 * m2;

    UserSet all(k);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<SlotAction> slots;
    slots.reserve(static_cast<std::size_t>(period));
    for (long t = 0; t < zf; ++t) slots.emplace_back(ZfAction{all});
    if (rest > 0) {
        if (j == 1) {
            for (long t = 0; t < rest; ++t) slots.emplace_back(SingleAction{subset.front()});
        } else {
            const MatPlan unit = minimal_mat_plan(j);
            const auto run = mat_slot_sequence(subset, unit);
            for (long c = 0; c < rest / unit.total_slots(); ++c)
                for (const auto& a : run) slots.emplace_back(a);
        }
    }
    if (static_cast<long>(slots.size()) != period) throw std::logic_error("slot count mismatch in synthesis");
    Schedule schedule(k, std::move(slots));

    // Required cells first; each user's remaining D budget goes to the earliest
    // unused cells after the ZF block; everything else is N.
    std::vector<CsitState> cells(k * static_cast<std::size_t>(period), CsitState::N);
    auto cell = [&](std::size_t u, long t) -> CsitState& { return cells[u * static_cast<std::size_t>(period) + static_cast<std::size_t>(t)]; };
    for (std::size_t u = 0; u < k; ++u) {
        long used = 0;
        for (long t = 0; t < period; ++t) {
            const CsitState req = schedule.feedback_plan()[static_cast<std::size_t>(t)][u];
            cell(u, t) = req;
            if (req == CsitState::D) ++used;
        }
        if (used > d_cells) throw std::logic_error("MAT feedback demand exceeds the delayed-CSIT budget");
        for (long t = zf; t < period && used < d_cells; ++t) {
            if (cell(u, t) == CsitState::N) {
                cell(u, t) = CsitState::D;
                ++used;
            }
        }
        if (used != d_cells) throw std::logic_error("could not place all delayed-CSIT cells");
    }
    CsitPattern pattern(k, static_cast<std::size_t>(period), std::move(cells));

    DoFPoint dof = dof_of_schedule(schedule);
    if (dof != corner_point_symmetric(k, triple.p(), subset))
        throw std::logic_error("synthesized schedule misses the corner point: " + dof.to_string());
    return Synthesis{std::move(pattern), std::move(schedule), std::move(dof), zf, rest};
}

}  // namespace csitdof
