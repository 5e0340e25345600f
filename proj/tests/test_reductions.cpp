#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "wag/oracles.hpp"
#include "wag/reductions.hpp"

using namespace wag;

TEST_CASE("make_visible structure") {
    auto d1 = fixtures::g1();
    VisibleProduct vp = make_visible(d1.three, d1.obs1, d1.obs2, d1.objective);
    CHECK(vp.game.num_states() == 6);
    CHECK(vp.parity.kind == ObjectiveKind::Parity);
    // both partitions refined by the flag: blind splits into two cells
    CHECK(vp.obs1.num_cells() == 2);
    vp.game.validate();

    // target everywhere: the initial state is already flagged
    auto d0 = fixtures::g0();
    d0.objective = Objective::reach({1, 1});
    VisibleProduct t = make_visible(d0.three, d0.obs1, d0.obs2, d0.objective);
    CHECK(t.factors[t.game.initial].second == 1);
}

TEST_CASE("make_visible preserves verdicts against the oracle") {
    auto check_preserved = [](const GameDoc& d) {
        VisibleProduct vp = make_visible(d.three, d.obs1, d.obs2, d.objective);
        Verdict base = brute_force_three(d.three, d.obs1, d.obs2, d.objective, 8);
        Verdict lifted = brute_force_three(vp.game, vp.obs1, vp.obs2, vp.parity, 8);
        CHECK(base.yes() == lifted.yes());
    };
    check_preserved(fixtures::g1());
    check_preserved(fixtures::g2());

    Rng rng(59);
    int done = 0;
    for (int round = 0; round < 500 && done < 50; ++round) {
        GameDoc d = fixtures::random_three(rng);
        auto cert = horizon_certificate(d.three, d.objective);
        if (!cert || cert->horizon > 3) continue;
        ++done;
        check_preserved(d);
    }
    CHECK(done == 50);
}

TEST_CASE("lift_priority") {
    Objective p = Objective::parity({2, 2, 1});
    CHECK(lift_priority(p, {0, 1}) == 2);
    CHECK(lift_priority(p, {2}) == 1);
    CHECK_THROWS_AS(lift_priority(p, {1, 2}), VisibilityError);
}

TEST_CASE("knowledge game on singleton partitions is no bigger than the base") {
    Rng rng(61);
    for (int round = 0; round < 40; ++round) {
        GameDoc d = fixtures::random_three(rng);
        int n = d.three.num_states();
        Objective parity = Objective::parity(std::vector<int>(n, 0));
        KnowledgeGame h = build_knowledge_game(d.three, ObservationPartition::blind(n),
                                               ObservationPartition::perfect(n), parity);
        std::vector<char> reach(n, 0);
        std::vector<StateId> queue{d.three.initial};
        reach[d.three.initial] = 1;
        while (!queue.empty()) {
            StateId q = queue.back();
            queue.pop_back();
            for (int a1 = 0; a1 < d.three.n1(); ++a1)
                for (int a2 = 0; a2 < d.three.n2(); ++a2)
                    for (int a3 = 0; a3 < d.three.n3(); ++a3) {
                        StateId t = d.three.step(q, a1, a2, a3);
                        if (!reach[t]) {
                            reach[t] = 1;
                            queue.push_back(t);
                        }
                    }
        }
        int reachable = 0;
        for (char c : reach) reachable += c;
        CHECK(h.num_states() == reachable);
        for (const auto& s : h.states) CHECK(s.size() == 1);
    }
}

TEST_CASE("knowledge game candidate set, blindness, and the sink") {
    GameDoc d;
    d.kind = GameKind::Three;
    ThreePlayerGame& g = d.three;
    g.state_names = {"q0", "q1", "q2"};
    g.a1_names = {"a"};
    g.a2_names = {"b"};
    g.a3_names = {"c", "d"};
    g.initial = 0;
    g.table.assign(3 * 1 * 1 * 2, 0);
    g.at(0, 0, 0, 0) = 1;
    g.at(0, 0, 0, 1) = 2;
    g.at(1, 0, 0, 0) = 1;
    g.at(1, 0, 0, 1) = 2;
    g.at(2, 0, 0, 0) = 2;
    g.at(2, 0, 0, 1) = 1;
    auto obs1 = ObservationPartition::blind(3);
    auto obs2 = ObservationPartition::from_cells(3, {{0}, {1, 2}});
    KnowledgeGame h = build_knowledge_game(g, obs1, obs2, Objective::parity({0, 0, 0}));
    CHECK(h.candidate_count == 4);
    CHECK(h.num_obs1_cells == 1); // blind in the base stays blind here

    int sink = h.sink_index();
    CHECK(h.delta(h.initial, 0, 0, 0, g, obs2) == sink); // post {q1,q2} misses cell {q0}
    CHECK(h.delta(h.initial, 0, 0, 1, g, obs2) != sink);
    CHECK(KnowledgeGame::sink_priority % 2 == 1);
}

TEST_CASE("knowledge-state count bound holds on random instances") {
    Rng rng(67);
    for (int round = 0; round < 60; ++round) {
        GameDoc d = fixtures::random_three(rng);
        int n = d.three.num_states();
        std::vector<int> prio(n, 0);
        for (int c = 0; c < d.obs2.num_cells(); ++c) {
            int p = (int)rng.below(2);
            for (StateId q : d.obs2.cells[c]) prio[q] = p;
        }
        KnowledgeGame h = build_knowledge_game(d.three, d.obs1, d.obs2, Objective::parity(prio));
        CHECK((long long)h.num_states() <= h.candidate_count);
        for (int s = 0; s < h.num_states(); ++s) {
            CellId c = d.obs2.obs(h.states[s][0]);
            for (StateId q : h.states[s]) CHECK(d.obs2.obs(q) == c);
        }
    }
}

TEST_CASE("four_to_three composite alphabet size") {
    Rng rng(71);
    GameDoc d = fixtures::random_four(rng);
    MergedGame m = four_to_three(d.four, d.obs1, d.obs2, d.objective);
    long long expect = d.four.n2();
    for (int t : d.four.turn)
        if (t == 4) expect *= d.four.n4();
    CHECK((long long)m.actions24.size() == expect);
    m.game.validate();
}

TEST_CASE("four_to_three with empty player-4 region collapses to the base alphabet") {
    GameDoc d2 = fixtures::g2();
    GameDoc d;
    d.kind = GameKind::Four;
    FourPlayerGame& g = d.four;
    g.state_names = d2.three.state_names;
    g.a1_names = d2.three.a1_names;
    g.a2_names = d2.three.a2_names;
    g.a3_names = d2.three.a3_names;
    g.a4_names = {"d0", "d1"};
    g.initial = 0;
    g.turn = {3, 3, 3};
    g.table3 = d2.three.table;
    g.table4.assign(3 * 1 * 1 * 2, 0);
    for (int q = 0; q < 3; ++q)
        for (int a4 = 0; a4 < 2; ++a4) g.table4[q * 2 + a4] = q;
    d.obs1 = d2.obs1;
    d.obs2 = d2.obs2;
    d.objective = d2.objective;

    MergedGame m = four_to_three(d.four, d.obs1, d.obs2, d.objective);
    CHECK((int)m.actions24.size() == d.four.n2());
    Verdict a = brute_force_three(m.game, m.obs1, m.obs2, m.objective, 4);
    Verdict b = brute_force_three(d2.three, d2.obs1, d2.obs2, d2.objective, 4);
    CHECK(a.yes() == b.yes());
}

TEST_CASE("merged-game verdict equals the direct four-player verdict") {
    Rng rng(73);
    int done = 0;
    for (int round = 0; round < 600 && done < 60; ++round) {
        GameDoc d = fixtures::random_four(rng);
        auto cert = horizon_certificate(d.four, d.objective);
        if (!cert || cert->horizon > 3) continue;
        MergedGame m = four_to_three(d.four, d.obs1, d.obs2, d.objective);
        auto cert3 = horizon_certificate(m.game, m.objective);
        if (!cert3 || cert3->horizon > 4) continue;
        ++done;
        Verdict direct = brute_force_four(d.four, d.obs1, d.obs2, d.objective, cert->horizon);
        Verdict merged = brute_force_three(m.game, m.obs1, m.obs2, m.objective, cert3->horizon);
        CHECK(direct.yes() == merged.yes());
    }
    CHECK(done == 60);
}

TEST_CASE("uniform distribution counts") {
    auto d2 = fixtures::g2();
    StochasticGame sg = uniform(d2.three);
    const auto& dist = sg.dist(0, 0, 0);
    REQUIRE(dist.size() == 2);
    CHECK(dist[0] == std::pair<StateId, Rat>{1, Rat(1, 2)});
    CHECK(dist[1] == std::pair<StateId, Rat>{2, Rat(1, 2)});

    auto d1 = fixtures::g1();
    StochasticGame sg1 = uniform(d1.three);
    for (int q = 0; q < 3; ++q)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int a2 = 0; a2 < 2; ++a2) CHECK(sg1.dist(q, a1, a2).size() == 1);

    auto d0 = fixtures::g0();
    GameDoc d = d0;
    d.three.a3_names = {"x", "y"};
    d.three.table = {1, 1, 1, 1};
    StochasticGame sg0 = uniform(d.three);
    CHECK(sg0.dist(0, 0, 0).size() == 1);
    CHECK(sg0.dist(0, 0, 0)[0].second == Rat::one());
}

TEST_CASE("support_game structure") {
    auto d2 = fixtures::g2();
    StochasticGame sg = uniform(d2.three);
    ThreePlayerGame back = support_game(sg);
    CHECK(back.n3() == 2);
    for (int q = 0; q < 3; ++q) {
        std::set<StateId> orig, rebuilt;
        for (int a3 = 0; a3 < d2.three.n3(); ++a3) orig.insert(d2.three.step(q, 0, 0, a3));
        for (int a3 = 0; a3 < back.n3(); ++a3) rebuilt.insert(back.step(q, 0, 0, a3));
        CHECK(orig == rebuilt);
    }

    auto d1 = fixtures::g1();
    CHECK(support_game(uniform(d1.three)).n3() == 1);

    // supports of sizes one and three: clamping repeats the single target
    StochasticGame mix;
    mix.state_names = {"x", "y", "z"};
    mix.a1_names = {"a"};
    mix.a2_names = {"b"};
    mix.initial = 0;
    mix.dists = {{{0, Rat(1, 3)}, {1, Rat(1, 3)}, {2, Rat(1, 3)}},
                 {{1, Rat::one()}},
                 {{2, Rat::one()}}};
    ThreePlayerGame t = support_game(mix);
    CHECK(t.n3() == 3);
    for (int a3 = 0; a3 < 3; ++a3) CHECK(t.step(1, 0, 0, a3) == 1);
}

TEST_CASE("uniform then support_game preserves verdicts") {
    Rng rng(79);
    int done = 0;
    for (int round = 0; round < 500 && done < 40; ++round) {
        GameDoc d = fixtures::random_three(rng, 3);
        if (d.objective.kind != ObjectiveKind::Reach) continue;
        auto cert = horizon_certificate(d.three, d.objective);
        if (!cert || cert->horizon > 3) continue;
        ThreePlayerGame back = support_game(uniform(d.three));
        auto cert2 = horizon_certificate(back, d.objective);
        if (!cert2 || cert2->horizon > 4) continue;
        ++done;
        Verdict a = brute_force_three(d.three, d.obs1, d.obs2, d.objective, cert->horizon);
        Verdict b = brute_force_three(back, d.obs1, d.obs2, d.objective, cert2->horizon);
        CHECK(a.yes() == b.yes());
    }
    CHECK(done == 40);
}

TEST_CASE("gadget on point masses introduces nothing") {
    auto d1 = fixtures::g1();
    StochasticGame sg = uniform(d1.three);
    GadgetResult r = gadget(sg, d1.obs1, d1.obs2, d1.objective);
    CHECK(r.gadget_states == 0);
    CHECK(r.game.num_states() == 3);
    CHECK(r.objective.kind == ObjectiveKind::Reach);
    r.game.validate();
}

TEST_CASE("gadget on the helper fixture") {
    auto d2 = fixtures::g2();
    StochasticGame sg = uniform(d2.three);
    GadgetResult r = gadget(sg, d2.obs1, d2.obs2, d2.objective);
    // flag product doubles the base; one coin costs entry + two passes +
    // delegate, five point masses cost entry + pass each
    CHECK(r.game.num_states() == 2 * 3 + 4 + 5 * 2);
    CHECK(r.gadget_states == 14);
    // demon turns only at genuine coins
    int demon_turns = 0;
    for (int t : r.game.turn) demon_turns += t == 4;
    CHECK(demon_turns == 1);
    CHECK(less_informed(r.obs1, r.obs2));
    // lifted priorities visible for player 2
    for (const auto& cell : r.obs2.cells) CHECK_NOTHROW(lift_priority(r.objective, cell));
    r.game.validate();

    CHECK(r.objective.kind == ObjectiveKind::Parity);
    // almost-sure reach of {t} fails: the demon resolves the coin to b
    Verdict v = brute_force_four(r.game, r.obs1, r.obs2, r.objective, 8);
    CHECK_FALSE(v.yes());
}
