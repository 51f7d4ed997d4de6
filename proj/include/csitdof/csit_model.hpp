#pragma once

// CSIT states, per-user marginal profiles, joint state distributions and
// space-time CSIT patterns. Everything here is exact (Rational) and
// immutable after construction.

#include "csitdof/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csitdof {

/// Maximum number of users any routine in the toolkit accepts.
inline constexpr std::size_t kMaxUsers = 6;

/// Transmitter knowledge of one user's channel in one slot.
/// Enumerator order is the canonical sort order P > D > N.
enum class CsitState : std::uint8_t { P = 0, D = 1, N = 2 };

inline constexpr CsitState kAllStates[] = {CsitState::P, CsitState::D, CsitState::N};

char to_char(CsitState s);
CsitState state_from_char(char c);

/// A set of CSIT states, used for aggregate queries such as "P or D".
class StateSet {
public:
    constexpr StateSet() = default;
    constexpr StateSet(std::initializer_list<CsitState> states) {
        for (auto s : states) bits_ |= bit(s);
    }
    static constexpr StateSet any() { return {CsitState::P, CsitState::D, CsitState::N}; }
    [[nodiscard]] constexpr bool contains(CsitState s) const { return (bits_ & bit(s)) != 0; }

private:
    static constexpr std::uint8_t bit(CsitState s) { return std::uint8_t(1u << static_cast<unsigned>(s)); }
    std::uint8_t bits_ = 0;
};

/// (lambda_P, lambda_D, lambda_N) for one user; sums to one exactly.
class MarginalTriple {
public:
    MarginalTriple(Rational p, Rational d, Rational n);
    /// lambda_N = 1 - p - d.
    static MarginalTriple from_pd(const Rational& p, const Rational& d);

    [[nodiscard]] const Rational& p() const { return p_; }
    [[nodiscard]] const Rational& d() const { return d_; }
    [[nodiscard]] const Rational& n() const { return n_; }
    [[nodiscard]] const Rational& of(CsitState s) const;
    /// lambda_P + lambda_D: probability that the transmitter ever learns the channel.
    [[nodiscard]] Rational p_plus_d() const { return p_ + d_; }

    friend bool operator==(const MarginalTriple&, const MarginalTriple&) = default;

private:
    Rational p_, d_, n_;
};

class MarginalProfile {
public:
    explicit MarginalProfile(std::vector<MarginalTriple> users);
    static MarginalProfile symmetric(std::size_t k, const MarginalTriple& triple);

    [[nodiscard]] std::size_t k() const { return users_.size(); }
    [[nodiscard]] const MarginalTriple& user(std::size_t i) const { return users_.at(i); }
    [[nodiscard]] const std::vector<MarginalTriple>& users() const { return users_; }
    [[nodiscard]] bool is_symmetric() const;

    friend bool operator==(const MarginalProfile&, const MarginalProfile&) = default;

private:
    std::vector<MarginalTriple> users_;
};

/// One joint CSIT state: entry i is user i's state.
using JointState = std::vector<CsitState>;

std::string to_string(const JointState& s);
JointState joint_state_from_string(std::string_view text);

/// Probability mass over the 3^K joint CSIT states. Keys with zero mass are
/// dropped on construction, so absent keys mean probability zero.
class JointProfile {
public:
    JointProfile(std::size_t k, std::map<JointState, Rational> mass);

    [[nodiscard]] std::size_t k() const { return k_; }
    [[nodiscard]] const std::map<JointState, Rational>& mass() const { return mass_; }
    [[nodiscard]] Rational probability(const JointState& s) const;

    friend bool operator==(const JointProfile&, const JointProfile&) = default;

private:
    std::size_t k_;
    std::map<JointState, Rational> mass_;
};

/// K x T space-time matrix of CSIT states (rows = users, columns = slots).
class CsitPattern {
public:
    CsitPattern(std::size_t k, std::size_t t, std::vector<CsitState> cells_row_major);
    /// Builds a pattern from its columns, each a joint state of length K.
    static CsitPattern from_columns(const std::vector<JointState>& columns);
    /// One row per user, characters P/D/N, rows newline-separated and of equal length.
    /// Blank lines and trailing whitespace are ignored.
    static CsitPattern parse(std::string_view text);

    [[nodiscard]] std::size_t k() const { return k_; }
    [[nodiscard]] std::size_t t() const { return t_; }
    [[nodiscard]] CsitState at(std::size_t user, std::size_t slot) const { return cells_.at(user * t_ + slot); }
    [[nodiscard]] JointState column(std::size_t slot) const;
    [[nodiscard]] std::string to_text() const;

    friend bool operator==(const CsitPattern&, const CsitPattern&) = default;

private:
    std::size_t k_;
    std::size_t t_;
    std::vector<CsitState> cells_;
};

MarginalProfile marginals_of_joint(const JointProfile& joint);

/// Empirical joint distribution of the pattern's columns over one period.
JointProfile pattern_to_joint(const CsitPattern& pattern);

/// Total mass of joint states matching every non-dash position.
/// `filter[i] == std::nullopt` is a dash (user i unconstrained).
Rational aggregate_dash(const JointProfile& joint, std::span<const std::optional<CsitState>> filter);

/// Set-valued generalisation: total mass of states with state_i in filter[i] for all i.
Rational aggregate_sets(const JointProfile& joint, std::span<const StateSet> filter);

}  // namespace csitdof
