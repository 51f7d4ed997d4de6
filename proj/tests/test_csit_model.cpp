#include "doctest.h"

#include "csitdof/csit_model.hpp"
#include "csitdof/errors.hpp"
#include "support.hpp"

#include <random>

using namespace csitdof;
using testing::R;

namespace {
JointProfile joint(std::size_t k, std::initializer_list<std::pair<const char*, const char*>> mass) {
    std::map<JointState, Rational> m;
    for (const auto& [s, p] : mass) m[joint_state_from_string(s)] = R(p);
    return {k, m};
}
}  // namespace

TEST_CASE("marginal triple validation") {
    CHECK_NOTHROW(MarginalTriple(R("1/3"), R("1/3"), R("1/3")));
    CHECK_THROWS_AS(MarginalTriple(R("1/2"), R("1/2"), R("1/2")), InvalidArgument);
    CHECK_THROWS_AS(MarginalTriple(R("-1/2"), R("1"), R("1/2")), InvalidArgument);
    CHECK(MarginalTriple::from_pd(R("1/3"), R("1/2")).n() == R("1/6"));
    CHECK_THROWS_AS(MarginalTriple::from_pd(R("2/3"), R("1/2")), InvalidArgument);
}

TEST_CASE("marginals of joint") {
    const auto m1 = marginals_of_joint(joint(3, {{"PPP", "1"}}));
    for (std::size_t i = 0; i < 3; ++i) CHECK(m1.user(i) == MarginalTriple(1, 0, 0));

    const auto m2 = marginals_of_joint(joint(3, {{"PNN", "1/3"}, {"NPN", "1/3"}, {"NNP", "1/3"}}));
    for (std::size_t i = 0; i < 3; ++i) CHECK(m2.user(i) == MarginalTriple(R("1/3"), 0, R("2/3")));

    const auto m3 = marginals_of_joint(joint(3, {{"DPP", "1/3"}, {"NDP", "1/3"}, {"PNP", "1/3"}}));
    CHECK(m3.user(0) == MarginalTriple(R("1/3"), R("1/3"), R("1/3")));
    CHECK(m3.user(1) == MarginalTriple(R("1/3"), R("1/3"), R("1/3")));
    CHECK(m3.user(2) == MarginalTriple(1, 0, 0));
}

TEST_CASE("joint profile validation") {
    CHECK_THROWS_AS(joint(2, {{"PP", "1/2"}}), InvalidArgument);
    CHECK_THROWS_AS(joint(2, {{"PPP", "1"}}), InvalidArgument);
    const auto j = joint(2, {{"PP", "1"}, {"NN", "0"}});
    CHECK(j.mass().size() == 1);
    CHECK(j.probability(joint_state_from_string("NN")) == 0);
}

TEST_CASE("pattern to joint") {
    const auto a = pattern_to_joint(testing::pattern_a());
    CHECK(a.mass().size() == 2);
    CHECK(a.probability(joint_state_from_string("PPP")) == R("1/3"));
    CHECK(a.probability(joint_state_from_string("NNN")) == R("2/3"));

    const auto b = pattern_to_joint(testing::pattern_b());
    for (const char* s : {"PNN", "NPN", "NNP"}) CHECK(b.probability(joint_state_from_string(s)) == R("1/3"));

    const auto d = pattern_to_joint(CsitPattern::parse("D\n"));
    CHECK(d.probability(joint_state_from_string("D")) == 1);
}

TEST_CASE("pattern text format") {
    const auto p = CsitPattern::parse("PDN\nNNP\n\n");
    CHECK(p.k() == 2);
    CHECK(p.t() == 3);
    CHECK(p.at(0, 1) == CsitState::D);
    CHECK(to_string(p.column(2)) == "NP");
    CHECK(p.to_text() == "PDN\nNNP\n");
    CHECK(CsitPattern::parse(p.to_text()) == p);
    CHECK_THROWS_AS(CsitPattern::parse("PDX\nNNP\n"), ParseError);
    CHECK_THROWS_AS(CsitPattern::parse("PD\nNNP\n"), ParseError);
    CHECK_THROWS_AS(CsitPattern::parse(""), ParseError);
    CHECK(CsitPattern::from_columns({joint_state_from_string("PN"), joint_state_from_string("DP")}).to_text() ==
          "PD\nNP\n");
}

TEST_CASE("aggregate dash") {
    using O = std::optional<CsitState>;
    const auto b = pattern_to_joint(testing::pattern_b());
    const O pp[] = {CsitState::P, CsitState::P, std::nullopt};
    CHECK(aggregate_dash(b, pp) == 0);
    CHECK(aggregate_dash(pattern_to_joint(testing::pattern_a()), pp) == R("1/3"));
    const O dashes[] = {std::nullopt, std::nullopt, std::nullopt};
    CHECK(aggregate_dash(b, dashes) == 1);
}

TEST_CASE("properties on random patterns") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng() % 4, t = 1 + rng() % 7;
        std::vector<CsitState> cells(k * t);
        for (auto& c : cells) c = kAllStates[rng() % 3];
        const CsitPattern p(k, t, cells);
        const JointProfile j = pattern_to_joint(p);
        const MarginalProfile m = marginals_of_joint(j);
        for (std::size_t u = 0; u < k; ++u) {
            Rational sum(0);
            for (auto s : kAllStates) {
                long count = 0;
                for (std::size_t c = 0; c < t; ++c) count += p.at(u, c) == s;
                CHECK(m.user(u).of(s) == Rational(count, static_cast<long>(t)));
                std::vector<std::optional<CsitState>> filter(k);
                filter[u] = s;
                CHECK(aggregate_dash(j, filter) == m.user(u).of(s));
                sum += aggregate_dash(j, filter);
            }
            CHECK(sum == 1);
        }
    }
}
