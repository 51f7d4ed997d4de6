#pragma once

// Achievable corner points for symmetric hybrid-CSIT profiles and explicit
// ZFBF + MAT schedules that reach them.

#include "csitdof/csit_model.hpp"
#include "csitdof/polytope.hpp"
#include "csitdof/rational.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace csitdof {

/// Sorted, duplicate-free list of 0-based user indices.
using UserSet = std::vector<std::size_t>;

/// "{1,2,3}" (1-based).
std::string to_string(const UserSet& users);

/// All nonempty subsets of [0, k), ordered by size then lexicographically.
std::vector<UserSet> nonempty_subsets(std::size_t k);

/// All m-subsets of `users`, lexicographic in position.
std::vector<UserSet> subsets_of_size(const UserSet& users, std::size_t m);

/// Bookkeeping for one MAT phase. Phase m sends order-m symbols, one slot per
/// m-subset of the k scheme users.
struct MatPhase {
    int order = 0;                  // m
    long repetitions = 0;           // how many times the phase is run
    long slots_per_repetition = 0;  // C(k, m)
    long inputs = 0;                // order-m symbols consumed per repetition: (k-m+1) C(k,m)
    long outputs = 0;               // order-(m+1) symbols produced per repetition: m C(k,m+1)
    long feedback_per_slot = 0;     // delayed CSI needed per slot: k - m

    [[nodiscard]] long total_slots() const { return repetitions * slots_per_repetition; }
    [[nodiscard]] long feedback_events() const { return total_slots() * feedback_per_slot; }
    friend bool operator==(const MatPhase&, const MatPhase&) = default;
};

struct MatPlan {
    int k = 0;
    std::vector<MatPhase> phases;  // phases[m-1] is phase m

    [[nodiscard]] long total_slots() const;
    /// Fresh symbols delivered to each scheme user (phase-1 inputs / k).
    [[nodiscard]] long symbols_per_user() const;
    /// Per-user DoF of the plan: symbols_per_user / total_slots = 1 / H_k.
    [[nodiscard]] Rational per_user_dof() const;
    friend bool operator==(const MatPlan&, const MatPlan&) = default;
};

/// The plan with phase m repeated (m-1)!(k-m)! k times. Throws for k < 2 or k > kMaxUsers.
MatPlan mat_plan(int k);
/// Smallest integral repetitions (proportional to mat_plan), times `copies`.
/// k = 1 gives the trivial one-slot, one-symbol plan.
MatPlan minimal_mat_plan(int k, long copies = 1);

/// Minimum fraction of delayed-CSIT slots needed to run MAT phases j..k:
/// 1 - (k-j+1) / (k * sum_{i=j}^{k} 1/i). Requires 1 <= j <= k, k >= 2.
Rational lambda_d_min(int k, int j);

enum class Regime { ZfOnly, ZfMat, Unclassified };

std::string to_string(Regime r);

/// ZfOnly iff lambda_D = 0; otherwise ZfMat iff lambda_N <= lambda_D / sum_{i=2}^{k} 1/i.
Regime classify_regime(std::size_t k, const MarginalTriple& triple);

/// Symmetric corner point for subset S: members get
/// (1 + lambda_P sum_{i=2}^{j} 1/i) / sum_{i=1}^{j} 1/i, everyone else lambda_P.
DoFPoint corner_point_symmetric(std::size_t k, const Rational& lambda_p, const UserSet& subset);

/// The 2^k - 1 corner points in nonempty_subsets(k) order. lambda_d only
/// validates the profile; the coordinates do not depend on it.
std::vector<DoFPoint> corner_points_symmetric(std::size_t k, const Rational& lambda_p, const Rational& lambda_d);

/// Zero-forcing slot serving every user in `served` (all need P).
struct ZfAction {
    UserSet served;
    friend bool operator==(const ZfAction&, const ZfAction&) = default;
};

/// One slot of a MAT run over `scheme`: phase m, sending order-m symbols to
/// `recipients` (|recipients| = m). Users in scheme \ recipients need D.
struct MatAction {
    UserSet scheme;
    int phase = 0;
    UserSet recipients;
    friend bool operator==(const MatAction&, const MatAction&) = default;
};

/// Point-to-point slot for a single user; needs no CSIT.
struct SingleAction {
    std::size_t user = 0;
    friend bool operator==(const SingleAction&, const SingleAction&) = default;
};

using SlotAction = std::variant<ZfAction, MatAction, SingleAction>;

/// Minimum CSIT each user must grant for `action` in a system of k users:
/// P for ZF-served users, D for MAT overhearers, N otherwise.
JointState required_csit(const SlotAction& action, std::size_t k);

/// Slot-indexed transmission plan with its derived feedback plan.
class Schedule {
public:
    Schedule(std::size_t k, std::vector<SlotAction> slots);

    [[nodiscard]] std::size_t k() const { return k_; }
    [[nodiscard]] std::size_t size() const { return slots_.size(); }
    [[nodiscard]] const std::vector<SlotAction>& slots() const { return slots_; }
    /// feedback_plan()[t][i]: CSIT required from user i in slot t.
    [[nodiscard]] const std::vector<JointState>& feedback_plan() const { return feedback_; }

    friend bool operator==(const Schedule& a, const Schedule& b) { return a.k_ == b.k_ && a.slots_ == b.slots_; }

private:
    std::size_t k_;
    std::vector<SlotAction> slots_;
    std::vector<JointState> feedback_;
};

/// Canonical slot order of one run of `plan` over `scheme`: phase by phase,
/// repetition by repetition, recipients in subsets_of_size order.
std::vector<MatAction> mat_slot_sequence(const UserSet& scheme, const MatPlan& plan);

/// One complete MAT run found in a schedule.
struct MatRun {
    UserSet scheme;
    MatPlan plan;
    std::vector<std::size_t> slots;  // schedule slot indices, in order
};

/// Splits the schedule's MAT slots (grouped by scheme) into complete runs,
/// each a scaled minimal plan in canonical order. Throws MalformedSchedule.
std::vector<MatRun> mat_runs(const Schedule& s);

/// Per-user interference-free symbols divided by total slots.
DoFPoint dof_of_schedule(const Schedule& s);

struct Synthesis {
    CsitPattern pattern;
    Schedule schedule;
    DoFPoint dof;
    long zf_slots = 0;
    long mat_slots = 0;  // MAT or single-user slots after the ZF block
};

/// Builds a CSIT pattern and schedule whose achieved DoF is the symmetric
/// corner point for `subset`. The period is n N1 N2 with lambda_P = M1/N1,
/// lambda_D = M2/N2 and lambda_d_min(|S|,1) = m/n in lowest terms, scaled up
/// only when the MAT block is not a whole number of minimal MAT runs.
/// Throws NotSynthesizable when the profile cannot feed the |S|-user MAT.
Synthesis synthesize_schedule(std::size_t k, const Rational& lambda_p, const Rational& lambda_d, const UserSet& subset);

}  // namespace csitdof
