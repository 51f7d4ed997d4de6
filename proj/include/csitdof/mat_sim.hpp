#pragma once

// Noise-free linear-algebra simulation of ZFBF and MAT slots over random
// channels. Every transmitted quantity is tracked as a coefficient row over
// the scheme's fresh (order-1) symbols, so decodability reduces to rank tests:
// a user can resolve its own s symbols iff
//   rank(all its observations) - rank(observations restricted to other users' symbols) = s.

#include "csitdof/achievability.hpp"
#include "csitdof/csit_model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace csitdof {

/// Relative singular-value threshold for numerical rank and ZF leakage.
inline constexpr double kRankTolerance = 1e-9;

/// Per-slot channel vectors, i.i.d. CN(0, I_M) per user and slot.
class ChannelRealization {
public:
    static ChannelRealization draw(std::size_t slots, std::size_t users, std::size_t antennas, std::uint64_t seed);
    /// Explicit channels, one antennas x users matrix per slot (all the same shape).
    static ChannelRealization from_slots(std::vector<Eigen::MatrixXcd> slots);

    [[nodiscard]] std::size_t slots() const { return per_slot_.size(); }
    [[nodiscard]] std::size_t users() const { return users_; }
    [[nodiscard]] std::size_t antennas() const { return antennas_; }
    /// antennas x users; column i is H_i(t).
    [[nodiscard]] const Eigen::MatrixXcd& slot(std::size_t t) const { return per_slot_.at(t); }

private:
    std::size_t users_ = 0;
    std::size_t antennas_ = 0;
    std::vector<Eigen::MatrixXcd> per_slot_;
};

/// CSIT the transmitter holds for (slot, user).
using CsitLookup = std::function<CsitState(std::size_t slot, std::size_t user)>;

struct ZfSlotResult {
    UserSet served;
    /// gains(r, c): coefficient of served[c]'s symbol at receiver served[r].
    Eigen::MatrixXcd gains;
    /// max |off-diagonal| / min |diagonal|.
    double leakage = 0.0;
    /// Symbols received interference-free (leakage within tolerance).
    std::size_t decodable = 0;
};

/// Zero-forcing precoding for one slot: each served user's beam lies in the
/// orthogonal complement of the other served users' channels. Throws
/// FeedbackViolation if a served user lacks P, DimensionMismatch if more users
/// are served than there are antennas.
ZfSlotResult run_zf_slot(const Eigen::MatrixXcd& channels, const UserSet& served, const JointState& csit,
                         std::size_t slot_index = 0);

struct MatUserOutcome {
    std::size_t user = 0;
    std::size_t intended = 0;
    std::size_t decodable = 0;
    std::size_t observations = 0;
    /// Smallest retained singular value over the largest, across both rank tests.
    double rank_margin = 1.0;
    /// Observation rows over all fresh symbols of the run (columns grouped per scheme user).
    Eigen::MatrixXcd equations;
};

struct MatOutcome {
    std::vector<MatUserOutcome> users;
    /// Delayed-CSI events used by the run, per scheme user.
    std::vector<long> feedback_events;

    [[nodiscard]] bool all_decodable() const;
};

/// Runs one MAT plan over `scheme` (plan.k == |scheme|). `slots[q]` is the
/// channel slot used by the q-th transmission of mat_slot_sequence(scheme, plan).
/// Overhearers of each transmission must have D or P in that slot.
/// Throws FeedbackViolation, and DegenerateChannel on a rank shortfall when
/// `strict` is set.
MatOutcome run_mat(const UserSet& scheme, const MatPlan& plan, const ChannelRealization& channels,
                   std::span<const std::size_t> slots, const CsitLookup& csit, std::uint64_t precoder_seed,
                   bool strict = true);

/// Convenience: fresh channels (M = antennas, default |scheme|) and delayed
/// CSIT everywhere, slots 0..T-1.
MatOutcome run_mat(const UserSet& scheme, const MatPlan& plan, std::uint64_t seed, std::size_t antennas = 0);

struct UserReport {
    std::size_t intended = 0;
    std::size_t decodable = 0;
    std::size_t slots_used = 0;
    long delayed_required = 0;   // D cells demanded by the feedback plan
    long delayed_available = 0;  // D cells in the pattern
    long perfect_required = 0;
    long perfect_available = 0;
};

struct SimReport {
    std::uint64_t seed = 0;
    std::size_t slots = 0;
    std::size_t antennas = 0;
    std::vector<UserReport> users;
    bool audit_pass = false;
    bool all_decodable = false;
    double max_zf_leakage = 0.0;
    double min_rank_margin = 1.0;
    DoFPoint achieved_dof;
};

/// Executes every slot of `schedule` on fresh random channels, honouring the
/// CSIT granted by `pattern`. Throws FeedbackViolation (first offending slot)
/// when an action needs CSIT the pattern does not grant, DimensionMismatch if
/// the schedule and pattern disagree on K or T.
SimReport verify_schedule(const Schedule& schedule, const CsitPattern& pattern, std::uint64_t seed,
                          std::size_t antennas = 0);

}  // namespace csitdof
