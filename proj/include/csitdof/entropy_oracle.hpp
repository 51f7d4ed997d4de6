#pragma once

// Numeric oracles for the two entropy lemmas behind the outer bound:
// the cyclic sliding-window inequality
//   (n-1) H(Y_1..Y_n | A) <= sum_i H(window_i of size n-1 | A)
// on discrete and Gaussian instances, and the pre-log of h(Y_m) - h(Y_q)
// for two single-antenna receivers of an M = 2 transmitter.
//
// All entropies are in bits.

#include "csitdof/csit_model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace csitdof {

/// Indices i, i+1, ..., i+j-1 taken cyclically in 1..n (all 1-based).
/// sliding_window(4, 3, 3) == {3, 4, 1}. Throws InvalidArgument unless 1 <= i, j <= n.
std::vector<std::size_t> sliding_window(std::size_t n, std::size_t i, std::size_t j);

/// Joint pmf of n discrete variables, row-major (last variable fastest).
class DiscreteJoint {
public:
    /// Throws InvalidArgument for n < 2, a size mismatch, negative mass or a
    /// total more than 1e-12 away from 1.
    DiscreteJoint(std::vector<std::size_t> alphabet, std::vector<double> pmf);

    [[nodiscard]] std::size_t n() const { return alphabet_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& alphabet() const { return alphabet_; }
    [[nodiscard]] const std::vector<double>& pmf() const { return pmf_; }

    /// Shannon entropy of the listed variables (0-based), by direct summation.
    [[nodiscard]] double entropy(std::span<const std::size_t> vars) const;
    /// Variable v of the result is variable order[v] of this joint.
    [[nodiscard]] DiscreteJoint permuted(std::span<const std::size_t> order) const;
    /// This joint with an independent variable appended last.
    [[nodiscard]] DiscreteJoint with_independent(std::span<const double> marginal) const;

private:
    std::vector<std::size_t> alphabet_;
    std::vector<double> pmf_;
};

/// sum_i H(window_i) - (n-1) H(all), windows of size n-1.
double check_lemma1_discrete(const DiscreteJoint& d);
/// Same slack with the last variable taken as the conditioning variable A
/// (needs at least three variables).
double check_lemma1_discrete_conditional(const DiscreteJoint& d);

/// Zero-mean real Gaussian vector.
class GaussianJoint {
public:
    /// Throws InvalidArgument unless cov is square, n >= 2, symmetric and positive definite.
    explicit GaussianJoint(Eigen::MatrixXd cov);

    [[nodiscard]] std::size_t n() const { return static_cast<std::size_t>(cov_.rows()); }
    [[nodiscard]] const Eigen::MatrixXd& covariance() const { return cov_; }
    /// log2 det of the covariance restricted to `vars` (0-based).
    [[nodiscard]] double log2_det(std::span<const std::size_t> vars) const;

private:
    Eigen::MatrixXd cov_;
};

/// Differential-entropy slack in bits:
/// (1/2) (sum_i log2 det Sigma_window_i - (n-1) log2 det Sigma).
double check_lemma1_gaussian(const GaussianJoint& g);
/// Conditioned on the last variable (Schur complement); needs n >= 3.
double check_lemma1_gaussian_conditional(const GaussianJoint& g);

/// Flat-Dirichlet pmf over the given alphabet.
DiscreteJoint random_discrete_joint(std::vector<std::size_t> alphabet, std::mt19937_64& rng);
/// A A^T + 1e-6 I with A standard normal.
GaussianJoint random_gaussian_joint(std::size_t n, std::mt19937_64& rng);

/// lo, lo*r, ..., hi with `points` entries.
std::vector<double> geometric_grid(double lo, double hi, std::size_t points);

struct PrelogEstimate {
    double slope = 0.0;
    std::vector<double> powers;
    /// Sample mean of h(Y_m) - h(Y_q) at each power, bits.
    std::vector<double> mean_difference;
};

/// Input covariance by CSIT pair: ZF against q when q is P, beamforming to m
/// when only m is P, isotropic when both are N. Channels are CN(0, I_2),
/// common across powers. Slope is the least-squares fit against log2 P.
/// Throws InvalidArgument for a D state or fewer than two powers.
PrelogEstimate check_lemma2_gaussian(CsitState m_state, CsitState q_state, std::span<const double> powers,
                                     std::uint64_t seed, std::size_t samples = 2000);

struct LemmaSweep {
    std::size_t cases = 0;
    double min_slack = 0.0;
    std::vector<std::string> failures;
};

/// Random sliding-window instances: `discrete` pmfs with n in {2,3,4} and alphabets
/// <= 3, `gaussian` covariances with n in {2..5}. Failure below -1e-9.
LemmaSweep lemma1_sweep(std::size_t discrete, std::size_t gaussian, std::uint64_t seed);

}  // namespace csitdof
