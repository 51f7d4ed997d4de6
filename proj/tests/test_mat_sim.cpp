#include "doctest.h"

#include "csitdof/errors.hpp"
#include "csitdof/mat_sim.hpp"
#include "support.hpp"

using namespace csitdof;
using testing::point;
using testing::R;

TEST_CASE("channel draws are seeded and shaped") {
    const auto a = ChannelRealization::draw(4, 3, 3, 9);
    const auto b = ChannelRealization::draw(4, 3, 3, 9);
    const auto c = ChannelRealization::draw(4, 3, 3, 10);
    CHECK(a.slots() == 4);
    CHECK(a.slot(2).rows() == 3);
    CHECK(a.slot(2).cols() == 3);
    CHECK(a.slot(3) == b.slot(3));
    CHECK(a.slot(3) != c.slot(3));
    CHECK_THROWS_AS(ChannelRealization::draw(1, 3, 2, 1), DimensionMismatch);
}

TEST_CASE("zero-forcing slots") {
    const auto ch = ChannelRealization::draw(1, 3, 3, 4);
    const JointState ppp(3, CsitState::P);
    const auto all = run_zf_slot(ch.slot(0), {0, 1, 2}, ppp);
    CHECK(all.decodable == 3);
    CHECK(all.leakage <= 1e-9);

    const auto one = run_zf_slot(ch.slot(0), {1}, ppp);
    CHECK(one.decodable == 1);
    CHECK(one.leakage == 0.0);

    const auto two = run_zf_slot(ch.slot(0), {0, 2}, ppp);
    CHECK(two.decodable == 2);
    CHECK(two.leakage <= 1e-9);

    const JointState pnp{CsitState::P, CsitState::N, CsitState::P};
    CHECK_THROWS_AS(run_zf_slot(ch.slot(0), {0, 1}, pnp, 5), FeedbackViolation);
    try {
        run_zf_slot(ch.slot(0), {0, 1}, pnp, 5);
    } catch (const FeedbackViolation& e) {
        CHECK(e.slot() == 5);
    }
    const auto narrow = ChannelRealization::draw(1, 2, 2, 1);
    CHECK_THROWS_AS(run_zf_slot(narrow.slot(0), {0, 1, 2}, ppp), DimensionMismatch);
}

TEST_CASE("MAT runs decode") {
    const auto two = run_mat({0, 1}, minimal_mat_plan(2), 1);
    CHECK(two.all_decodable());
    for (const auto& u : two.users) {
        CHECK(u.intended == 2);
        CHECK(u.observations == 3);
    }

    const auto three = run_mat({0, 1, 2}, mat_plan(3), 2);
    CHECK(three.all_decodable());
    for (const auto& u : three.users) CHECK(u.decodable == 18);

    const auto single = run_mat({1}, minimal_mat_plan(1), 3);
    CHECK(single.all_decodable());
    CHECK(single.users[0].decodable == 1);

    for (int k = 4; k <= 6; ++k) CHECK(run_mat(testing::all_users(k), minimal_mat_plan(k), 5).all_decodable());
}

TEST_CASE("MAT feedback events match the plan") {
    const MatPlan plan = mat_plan(3);
    const auto out = run_mat({0, 1, 2}, plan, 8);
    long total = 0;
    for (long e : out.feedback_events) total += e;
    long expected = 0;
    for (const auto& ph : plan.phases) expected += ph.feedback_events();
    CHECK(total == expected);
}

TEST_CASE("MAT needs delayed CSIT from overhearers") {
    const MatPlan plan = minimal_mat_plan(2);
    const auto ch = ChannelRealization::draw(3, 2, 2, 1);
    const std::size_t slots[] = {0, 1, 2};
    const CsitLookup none = [](std::size_t, std::size_t) { return CsitState::N; };
    CHECK_THROWS_AS(run_mat({0, 1}, plan, ch, slots, none, 1), FeedbackViolation);
    const CsitLookup perfect = [](std::size_t, std::size_t) { return CsitState::P; };
    CHECK(run_mat({0, 1}, plan, ch, slots, perfect, 1).all_decodable());
}

TEST_CASE("rank deficiency is reported") {
    // Both users share one channel vector, so overheard equations add nothing.
    const MatPlan plan = minimal_mat_plan(2);
    Eigen::MatrixXcd h(2, 2);
    h << std::complex<double>(1, 0.5), std::complex<double>(1, 0.5), std::complex<double>(-0.3, 2),
        std::complex<double>(-0.3, 2);
    const auto ch = ChannelRealization::from_slots({h});
    const std::size_t slots[] = {0, 0, 0};
    const CsitLookup d = [](std::size_t, std::size_t) { return CsitState::D; };
    CHECK_THROWS_AS(run_mat({0, 1}, plan, ch, slots, d, 1), DegenerateChannel);
    CHECK_FALSE(run_mat({0, 1}, plan, ch, slots, d, 1, false).all_decodable());
}

TEST_CASE("verify the 99-slot schedule") {
    const Synthesis s = synthesize_schedule(3, R("1/3"), R("2/3"), {0, 1, 2});
    const SimReport r = verify_schedule(s.schedule, s.pattern, 42);
    CHECK(r.audit_pass);
    CHECK(r.all_decodable);
    CHECK(r.achieved_dof == point({"23/33", "23/33", "23/33"}));
    CHECK(r.max_zf_leakage <= 1e-9);
    for (const auto& u : r.users) {
        CHECK(u.decodable == u.intended);
        CHECK(u.delayed_required <= u.delayed_available + u.perfect_available);
        CHECK(u.delayed_available == 66);
        CHECK(u.perfect_required == 33);
    }
    const SimReport again = verify_schedule(s.schedule, s.pattern, 42);
    CHECK(again.min_rank_margin == r.min_rank_margin);
    CHECK(again.achieved_dof == r.achieved_dof);
}

TEST_CASE("pure-MAT audit totals") {
    const MatPlan plan = mat_plan(3);
    const auto seq = mat_slot_sequence({0, 1, 2}, plan);
    const Schedule s(3, std::vector<SlotAction>(seq.begin(), seq.end()));
    const CsitPattern all_d(3, 33, std::vector<CsitState>(99, CsitState::D));
    const SimReport r = verify_schedule(s, all_d, 3);
    long required = 0;
    for (const auto& u : r.users) required += u.delayed_required;
    CHECK(Rational(required) == lambda_d_min(3, 1) * 33 * 3);
    CHECK(r.all_decodable);
    CHECK(r.achieved_dof == point({"6/11", "6/11", "6/11"}));
}

TEST_CASE("pattern (a) schedule") {
    const Schedule s(3, {ZfAction{{0, 1, 2}}, SingleAction{0}, SingleAction{0}});
    const SimReport r = verify_schedule(s, testing::pattern_a(), 1);
    CHECK(r.audit_pass);
    CHECK(r.achieved_dof == point({"1", "1/3", "1/3"}));
}

TEST_CASE("feedback violations and mismatches") {
    const Schedule zf_in_n(3, {ZfAction{{0, 1, 2}}, ZfAction{{0, 1, 2}}, SingleAction{0}});
    try {
        verify_schedule(zf_in_n, testing::pattern_a(), 1);
        FAIL("expected a feedback violation");
    } catch (const FeedbackViolation& e) {
        CHECK(e.slot() == 1);
    }
    const Schedule short_one(3, {ZfAction{{0, 1, 2}}});
    CHECK_THROWS_AS(verify_schedule(short_one, testing::pattern_a(), 1), DimensionMismatch);
}

TEST_CASE("more antennas than users") {
    const Synthesis s = synthesize_schedule(3, R("1/3"), R("2/3"), {0, 1, 2});
    const SimReport r = verify_schedule(s.schedule, s.pattern, 5, 5);
    CHECK(r.antennas == 5);
    CHECK(r.all_decodable);
}
