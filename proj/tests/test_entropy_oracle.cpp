#include "doctest.h"

#include "csitdof/entropy_oracle.hpp"
#include "csitdof/errors.hpp"

#include <cmath>

using namespace csitdof;

TEST_CASE("sliding windows") {
    CHECK(sliding_window(4, 3, 3) == std::vector<std::size_t>{3, 4, 1});
    CHECK(sliding_window(5, 1, 5) == std::vector<std::size_t>{1, 2, 3, 4, 5});
    CHECK(sliding_window(3, 2, 2) == std::vector<std::size_t>{2, 3});
    CHECK_THROWS_AS(sliding_window(3, 0, 2), InvalidArgument);
    CHECK_THROWS_AS(sliding_window(3, 4, 2), InvalidArgument);
    CHECK_THROWS_AS(sliding_window(3, 1, 4), InvalidArgument);
}

TEST_CASE("discrete examples") {
    const DiscreteJoint indep({2, 2, 2}, std::vector<double>(8, 0.125));
    CHECK(indep.entropy(std::vector<std::size_t>{0, 1, 2}) == doctest::Approx(3.0));
    CHECK(std::abs(check_lemma1_discrete(indep)) <= 1e-9);

    std::vector<double> same(8, 0.0);
    same[0] = same[7] = 0.5;
    const DiscreteJoint copies({2, 2, 2}, same);
    CHECK(check_lemma1_discrete(copies) == doctest::Approx(1.0));

    CHECK_THROWS_AS(DiscreteJoint({2, 2}, {0.5, 0.5, 0.5, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteJoint({2, 2}, {0.25, 0.25, 0.25}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteJoint({4}, {0.25, 0.25, 0.25, 0.25}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteJoint({2, 2}, {1.25, -0.25, 0, 0}), InvalidArgument);
}

TEST_CASE("random discrete sweep, relabeling and conditioning") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> pick_n(3, 4), pick_a(2, 3);
    const double a_marginal[] = {0.2, 0.5, 0.3};
    for (int c = 0; c < 300; ++c) {
        std::vector<std::size_t> alphabet(pick_n(rng));
        for (auto& a : alphabet) a = pick_a(rng);
        const DiscreteJoint d = random_discrete_joint(alphabet, rng);
        const double slack = check_lemma1_discrete(d);
        CHECK(slack >= -1e-9);

        std::vector<std::size_t> rot(d.n());
        for (std::size_t v = 0; v < d.n(); ++v) rot[v] = (v + 1) % d.n();
        CHECK(check_lemma1_discrete(d.permuted(rot)) == doctest::Approx(slack).epsilon(1e-9));

        CHECK(std::abs(check_lemma1_discrete_conditional(d.with_independent(a_marginal)) - slack) <= 1e-9);
        // A dependent conditioning variable: treat the last variable as A.
        CHECK(check_lemma1_discrete_conditional(d) >= -1e-9);
    }
}

TEST_CASE("gaussian examples") {
    const GaussianJoint id(Eigen::MatrixXd::Identity(3, 3));
    CHECK(std::abs(check_lemma1_gaussian(id)) <= 1e-12);

    Eigen::Matrix2d s;
    s << 2.0, 0.7, 0.7, 1.5;
    const GaussianJoint two(s);
    // n = 2: slack is Hadamard's inequality, (1/2) log2(s11 s22 / det).
    CHECK(check_lemma1_gaussian(two) == doctest::Approx(0.5 * std::log2(3.0 / (3.0 - 0.49))));

    Eigen::Matrix2d bad;
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(GaussianJoint{bad}, InvalidArgument);
    Eigen::Matrix2d asym;
    asym << 1.0, 0.1, 0.0, 1.0;
    CHECK_THROWS_AS(GaussianJoint{asym}, InvalidArgument);
    CHECK_THROWS_AS(GaussianJoint(Eigen::MatrixXd::Identity(1, 1)), InvalidArgument);
}

TEST_CASE("random gaussian sweep and conditioning") {
    std::mt19937_64 rng(8);
    for (int c = 0; c < 300; ++c) {
        const std::size_t n = 3 + static_cast<std::size_t>(c % 3);
        const GaussianJoint g = random_gaussian_joint(n, rng);
        CHECK(check_lemma1_gaussian(g) >= -1e-9);
        CHECK(check_lemma1_gaussian_conditional(g) >= -1e-9);

        Eigen::MatrixXd ext = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
        ext.topLeftCorner(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = g.covariance();
        ext(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 2.5;
        CHECK(std::abs(check_lemma1_gaussian_conditional(GaussianJoint(ext)) - check_lemma1_gaussian(g)) <= 1e-9);

        const Eigen::VectorXd diag = g.covariance().diagonal();
        CHECK(std::abs(check_lemma1_gaussian(GaussianJoint(diag.asDiagonal().toDenseMatrix()))) <= 1e-9);
    }
}

TEST_CASE("prelog slopes") {
    const auto grid = geometric_grid(1e2, 1e8, 7);
    CHECK(grid.front() == doctest::Approx(1e2));
    CHECK(grid.back() == 1e8);

    const double np = check_lemma2_gaussian(CsitState::N, CsitState::P, grid, 1).slope;
    CHECK(np <= 1.05);
    CHECK(np >= 0.95);
    CHECK(check_lemma2_gaussian(CsitState::P, CsitState::P, grid, 1).slope <= 1.05);
    CHECK(std::abs(check_lemma2_gaussian(CsitState::N, CsitState::N, grid, 1).slope) <= 0.05);
    CHECK(check_lemma2_gaussian(CsitState::P, CsitState::N, grid, 1).slope <= 0.05);

    CHECK_THROWS_AS(check_lemma2_gaussian(CsitState::D, CsitState::P, grid, 1), InvalidArgument);
    CHECK_THROWS_AS(check_lemma2_gaussian(CsitState::N, CsitState::D, grid, 1), InvalidArgument);
    const double one[] = {10.0};
    CHECK_THROWS_AS(check_lemma2_gaussian(CsitState::N, CsitState::N, one, 1), InvalidArgument);
}

TEST_CASE("prelog estimates are stable when the grid top doubles") {
    const auto grid = geometric_grid(1e2, 1e8, 7);
    auto doubled = grid;
    doubled.back() *= 2.0;
    for (auto [m, q] : {std::pair{CsitState::N, CsitState::P}, {CsitState::N, CsitState::N}, {CsitState::P, CsitState::N}}) {
        const double a = check_lemma2_gaussian(m, q, grid, 3).slope;
        const double b = check_lemma2_gaussian(m, q, doubled, 3).slope;
        CHECK(std::abs(a - b) < 0.02);
    }
}

TEST_CASE("sliding-window sweep summary") {
    const LemmaSweep s = lemma1_sweep(50, 50, 4);
    CHECK(s.cases == 100);
    CHECK(s.failures.empty());
    CHECK(s.min_slack >= -1e-9);
}
