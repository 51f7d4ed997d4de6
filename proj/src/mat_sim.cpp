#include "csitdof/mat_sim.hpp"

#include "csitdof/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>

namespace csitdof {

namespace {

using Complex = std::complex<double>;

class ComplexGaussian {
public:
    explicit ComplexGaussian(std::uint64_t seed) : rng_(seed) {}
    // CN(0, 1): independent real and imaginary parts with variance 1/2.
    Complex operator()() { return {normal_(rng_), normal_(rng_)}; }
    Eigen::MatrixXcd matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = (*this)();
        return m;
    }

    // rows x cols with orthonormal columns (rows >= cols) or rows (rows < cols).
    Eigen::MatrixXcd orthonormal(Eigen::Index rows, Eigen::Index cols) {
        const bool tall = rows >= cols;
        const Eigen::MatrixXcd g = tall ? matrix(rows, cols) : matrix(cols, rows);
        const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
        const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(g.rows(), g.cols());
        return tall ? q : Eigen::MatrixXcd(q.adjoint());
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, std::sqrt(0.5)};
};

// Distinct, reproducible stream for transmitter-side randomness.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct RankInfo {
    std::size_t rank = 0;
    double margin = 1.0;  // smallest retained singular value / largest
};

RankInfo numerical_rank(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return {};
    RankInfo info;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= kRankTolerance * sv(0)) break;
        ++info.rank;
        info.margin = sv(i) / sv(0);
    }
    return info;
}

bool grants_delayed(CsitState s) { return s == CsitState::D || s == CsitState::P; }

}  // namespace

ChannelRealization ChannelRealization::draw(std::size_t slots, std::size_t users, std::size_t antennas,
                                            std::uint64_t seed) {
    if (antennas < users)
        throw DimensionMismatch("need at least as many antennas as users (M = " + std::to_string(antennas) +
                                ", K = " + std::to_string(users) + ")");
    ChannelRealization ch;
    ch.users_ = users;
    ch.antennas_ = antennas;
    ch.per_slot_.reserve(slots);
    ComplexGaussian gen(derive_seed(seed, 0));
    for (std::size_t t = 0; t < slots; ++t)
        ch.per_slot_.push_back(gen.matrix(static_cast<Eigen::Index>(antennas), static_cast<Eigen::Index>(users)));
    return ch;
}

ChannelRealization ChannelRealization::from_slots(std::vector<Eigen::MatrixXcd> slots) {
    ChannelRealization ch;
    if (!slots.empty()) {
        ch.antennas_ = static_cast<std::size_t>(slots.front().rows());
        ch.users_ = static_cast<std::size_t>(slots.front().cols());
    }
    for (const auto& m : slots)
        if (static_cast<std::size_t>(m.rows()) != ch.antennas_ || static_cast<std::size_t>(m.cols()) != ch.users_)
            throw DimensionMismatch("channel matrices differ in shape");
    ch.per_slot_ = std::move(slots);
    return ch;
}

ZfSlotResult run_zf_slot(const Eigen::MatrixXcd& channels, const UserSet& served, const JointState& csit,
                         std::size_t slot_index) {
    if (served.empty()) throw InvalidArgument("ZF slot serves nobody");
    if (served.size() > static_cast<std::size_t>(channels.rows()))
        throw DimensionMismatch("ZF serves " + std::to_string(served.size()) + " users with only " +
                                std::to_string(channels.rows()) + " antennas");
    for (auto u : served) {
        if (u >= static_cast<std::size_t>(channels.cols())) throw InvalidArgument("served user outside channel matrix");
        if (csit.at(u) != CsitState::P)
            throw FeedbackViolation(slot_index, "zero-forcing user " + std::to_string(u + 1) + " without perfect CSIT");
    }

    const auto s = static_cast<Eigen::Index>(served.size());
    Eigen::MatrixXcd h(channels.rows(), s);
    for (Eigen::Index c = 0; c < s; ++c) h.col(c) = channels.col(static_cast<Eigen::Index>(served[c]));

    // Right pseudo-inverse of H^H: column c is orthogonal to every other served channel.
    Eigen::MatrixXcd v = h * (h.adjoint() * h).inverse();
    v.colwise().normalize();

    ZfSlotResult out;
    out.served = served;
    out.gains = h.adjoint() * v;
    double min_diag = std::numeric_limits<double>::infinity(), max_off = 0.0;
    for (Eigen::Index r = 0; r < s; ++r)
        for (Eigen::Index c = 0; c < s; ++c) {
            const double g = std::abs(out.gains(r, c));
            if (r == c) min_diag = std::min(min_diag, g);
            else max_off = std::max(max_off, g);
        }
    out.leakage = min_diag > 0.0 ? max_off / min_diag : std::numeric_limits<double>::infinity();
    out.decodable = out.leakage <= kRankTolerance ? served.size() : 0;
    return out;
}

bool MatOutcome::all_decodable() const {
    return std::all_of(users.begin(), users.end(), [](const MatUserOutcome& u) { return u.decodable == u.intended; });
}

MatOutcome run_mat(const UserSet& scheme, const MatPlan& plan, const ChannelRealization& channels,
                   std::span<const std::size_t> slots, const CsitLookup& csit, std::uint64_t precoder_seed,
                   bool strict) {
    const std::size_t j = scheme.size();
    if (j == 0 || static_cast<std::size_t>(plan.k) != j)
        throw InvalidArgument("MAT plan size " + std::to_string(plan.k) + " does not match scheme size " +
                              std::to_string(j));
    if (slots.size() != static_cast<std::size_t>(plan.total_slots()))
        throw InvalidArgument("MAT run needs " + std::to_string(plan.total_slots()) + " slots, got " +
                              std::to_string(slots.size()));
    const auto antennas = static_cast<Eigen::Index>(channels.antennas());
    if (static_cast<std::size_t>(antennas) < j) throw DimensionMismatch("fewer antennas than MAT scheme users");

    const auto per_user = static_cast<Eigen::Index>(plan.symbols_per_user());
    const Eigen::Index width = per_user * static_cast<Eigen::Index>(j);
    ComplexGaussian precoders(derive_seed(precoder_seed, 1));

    // Pending order-m symbols per recipient subset, as coefficient rows over the fresh symbols.
    std::map<UserSet, std::deque<Eigen::RowVectorXcd>> pending;
    for (std::size_t a = 0; a < j; ++a)
        for (Eigen::Index s = 0; s < per_user; ++s) {
            Eigen::RowVectorXcd e = Eigen::RowVectorXcd::Zero(width);
            e(static_cast<Eigen::Index>(a) * per_user + s) = 1.0;
            pending[UserSet{scheme[a]}].push_back(std::move(e));
        }

    std::vector<std::vector<Eigen::RowVectorXcd>> observed(j);
    MatOutcome outcome;
    outcome.feedback_events.assign(j, 0);

    std::size_t step = 0;
    for (const auto& phase : plan.phases) {
        const auto m = static_cast<std::size_t>(phase.order);
        const auto groups = subsets_of_size(scheme, m);
        // Overheard equations of this phase, per repetition and per (m+1)-subset.
        std::vector<std::map<UserSet, std::vector<Eigen::RowVectorXcd>>> overheard(
            static_cast<std::size_t>(phase.repetitions));

        for (long rep = 0; rep < phase.repetitions; ++rep) {
            for (const auto& group : groups) {
                const std::size_t slot = slots[step++];
                auto& queue = pending[group];
                const std::size_t width_m = j - m + 1;
                if (queue.size() < width_m)
                    throw std::logic_error("MAT symbol flow broken for " + to_string(group));
                Eigen::MatrixXcd symbols(static_cast<Eigen::Index>(width_m), width);
                for (std::size_t q = 0; q < width_m; ++q) {
                    symbols.row(static_cast<Eigen::Index>(q)) = queue.front();
                    queue.pop_front();
                }
                const Eigen::MatrixXcd beam = precoders.orthonormal(antennas, static_cast<Eigen::Index>(width_m));
                const Eigen::MatrixXcd& h = channels.slot(slot);

                for (std::size_t a = 0; a < j; ++a) {
                    const std::size_t user = scheme[a];
                    const Eigen::RowVectorXcd row =
                        (h.col(static_cast<Eigen::Index>(user)).adjoint() * beam) * symbols;
                    observed[a].push_back(row.normalized());
                    if (std::binary_search(group.begin(), group.end(), user)) continue;
                    // Overhearer: the transmitter needs this user's channel, delayed.
                    if (!grants_delayed(csit(slot, user)))
                        throw FeedbackViolation(slot, "MAT phase " + std::to_string(m) + " needs delayed CSIT of user " +
                                                          std::to_string(user + 1));
                    ++outcome.feedback_events[a];
                    UserSet superset = group;
                    superset.insert(std::upper_bound(superset.begin(), superset.end(), user), user);
                    overheard[static_cast<std::size_t>(rep)][superset].push_back(row);
                }
            }
        }

        // Each (m+1)-subset's m+1 overheard equations become m order-(m+1) symbols.
        if (m < j) {
            for (long rep = 0; rep < phase.repetitions; ++rep) {
                for (const auto& superset : subsets_of_size(scheme, m + 1)) {
                    const auto& eqs = overheard[static_cast<std::size_t>(rep)][superset];
                    if (eqs.size() != m + 1) throw std::logic_error("overheard equation count mismatch");
                    Eigen::MatrixXcd stacked(static_cast<Eigen::Index>(m + 1), width);
                    for (std::size_t q = 0; q <= m; ++q) stacked.row(static_cast<Eigen::Index>(q)) = eqs[q];
                    const Eigen::MatrixXcd mix =
                        precoders.orthonormal(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m + 1)) * stacked;
                    for (Eigen::Index q = 0; q < mix.rows(); ++q) pending[superset].push_back(mix.row(q).normalized());
                }
            }
        }
    }

    for (std::size_t a = 0; a < j; ++a) {
        MatUserOutcome u;
        u.user = scheme[a];
        u.intended = static_cast<std::size_t>(per_user);
        u.observations = observed[a].size();
        u.equations.resize(static_cast<Eigen::Index>(observed[a].size()), width);
        for (std::size_t r = 0; r < observed[a].size(); ++r) u.equations.row(static_cast<Eigen::Index>(r)) = observed[a][r];

        Eigen::MatrixXcd interference(u.equations.rows(), width - per_user);
        const Eigen::Index own = static_cast<Eigen::Index>(a) * per_user;
        interference.leftCols(own) = u.equations.leftCols(own);
        interference.rightCols(width - own - per_user) = u.equations.rightCols(width - own - per_user);

        const RankInfo full = numerical_rank(u.equations);
        const RankInfo inter = numerical_rank(interference);
        u.decodable = std::min(u.intended, full.rank > inter.rank ? full.rank - inter.rank : std::size_t{0});
        u.rank_margin = std::min(full.margin, inter.margin);
        if (strict && u.decodable < u.intended)
            throw DegenerateChannel(precoder_seed, "user " + std::to_string(u.user + 1) + " resolves only " +
                                                       std::to_string(u.decodable) + " of " +
                                                       std::to_string(u.intended) + " MAT symbols");
        outcome.users.push_back(std::move(u));
    }
    return outcome;
}

MatOutcome run_mat(const UserSet& scheme, const MatPlan& plan, std::uint64_t seed, std::size_t antennas) {
    if (antennas == 0) antennas = scheme.empty() ? 1 : scheme.back() + 1;
    antennas = std::max(antennas, scheme.size());
    const std::size_t users = scheme.empty() ? 0 : scheme.back() + 1;
    const auto total = static_cast<std::size_t>(plan.total_slots());
    const ChannelRealization ch = ChannelRealization::draw(total, users, std::max(antennas, users), seed);
    std::vector<std::size_t> slots(total);
    for (std::size_t t = 0; t < total; ++t) slots[t] = t;
    return run_mat(scheme, plan, ch, slots, [](std::size_t, std::size_t) { return CsitState::D; }, seed);
}

SimReport verify_schedule(const Schedule& schedule, const CsitPattern& pattern, std::uint64_t seed,
                          std::size_t antennas) {
    const std::size_t k = schedule.k();
    const std::size_t period = schedule.size();
    if (pattern.k() != k || pattern.t() != period)
        throw DimensionMismatch("schedule is " + std::to_string(k) + "x" + std::to_string(period) + " but pattern is " +
                                std::to_string(pattern.k()) + "x" + std::to_string(pattern.t()));
    if (antennas == 0) antennas = k;

    SimReport report;
    report.seed = seed;
    report.slots = period;
    report.antennas = antennas;
    report.users.assign(k, UserReport{});

    // Feedback audit, slot order; the first unmet requirement is reported.
    for (std::size_t t = 0; t < period; ++t) {
        const JointState& need = schedule.feedback_plan()[t];
        for (std::size_t u = 0; u < k; ++u) {
            const CsitState have = pattern.at(u, t);
            auto& ur = report.users[u];
            if (have == CsitState::D) ++ur.delayed_available;
            if (have == CsitState::P) ++ur.perfect_available;
            if (need[u] == CsitState::P) {
                ++ur.perfect_required;
                if (have != CsitState::P)
                    throw FeedbackViolation(t, "action needs perfect CSIT of user " + std::to_string(u + 1) +
                                                   " but the pattern grants " + std::string(1, to_char(have)));
            } else if (need[u] == CsitState::D) {
                ++ur.delayed_required;
                if (!grants_delayed(have))
                    throw FeedbackViolation(t, "action needs delayed CSIT of user " + std::to_string(u + 1) +
                                                   " but the pattern grants N");
            }
        }
    }
    report.audit_pass = true;

    const ChannelRealization channels = ChannelRealization::draw(period, k, antennas, seed);
    const CsitLookup lookup = [&pattern](std::size_t t, std::size_t u) { return pattern.at(u, t); };

    for (std::size_t t = 0; t < period; ++t) {
        const SlotAction& action = schedule.slots()[t];
        if (const auto* zf = std::get_if<ZfAction>(&action)) {
            const ZfSlotResult r = run_zf_slot(channels.slot(t), zf->served, pattern.column(t), t);
            report.max_zf_leakage = std::max(report.max_zf_leakage, r.leakage);
            for (auto u : zf->served) {
                ++report.users[u].intended;
                ++report.users[u].slots_used;
                if (r.decodable == zf->served.size()) ++report.users[u].decodable;
            }
        } else if (const auto* single = std::get_if<SingleAction>(&action)) {
            auto& ur = report.users[single->user];
            ++ur.intended;
            ++ur.slots_used;
            if (channels.slot(t).col(static_cast<Eigen::Index>(single->user)).norm() > 0.0) ++ur.decodable;
        }
    }

    std::uint64_t run_index = 0;
    for (const auto& run : mat_runs(schedule)) {
        const MatOutcome out =
            run_mat(run.scheme, run.plan, channels, run.slots, lookup, derive_seed(seed, 100 + run_index++), false);
        for (const auto& u : out.users) {
            auto& ur = report.users[u.user];
            ur.intended += u.intended;
            ur.decodable += u.decodable;
            ur.slots_used += run.slots.size();
            report.min_rank_margin = std::min(report.min_rank_margin, u.rank_margin);
        }
    }

    report.all_decodable = std::all_of(report.users.begin(), report.users.end(),
                                       [](const UserReport& u) { return u.decodable == u.intended; });
    std::vector<Rational> dof;
    for (const auto& u : report.users) dof.emplace_back(static_cast<long>(u.decodable), static_cast<long>(period));
    report.achieved_dof = DoFPoint(std::move(dof));
    return report;
}

}  // namespace csitdof
