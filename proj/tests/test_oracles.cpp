#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "wag/oracles.hpp"
#include "wag/reductions.hpp"

using namespace wag;

TEST_CASE("horizon certificates on the fixtures") {
    auto d0 = fixtures::g0();
    auto c0 = horizon_certificate(d0.three, d0.objective);
    REQUIRE(c0.has_value());
    CHECK(c0->horizon <= 1);

    auto d1 = fixtures::g1();
    auto c1 = horizon_certificate(d1.three, d1.objective);
    REQUIRE(c1.has_value());
    CHECK(c1->horizon == 1);

    // a ping-pong with an escape keeps the verdict open forever
    GameDoc d;
    d.kind = GameKind::Three;
    ThreePlayerGame& g = d.three;
    g.state_names = {"p", "q", "t"};
    g.a1_names = {"a"};
    g.a2_names = {"a", "b"};
    g.a3_names = {"a"};
    g.initial = 0;
    g.table.assign(3 * 1 * 2 * 1, 0);
    g.at(0, 0, 0, 0) = 1;
    g.at(0, 0, 1, 0) = 1;
    g.at(1, 0, 0, 0) = 0;
    g.at(1, 0, 1, 0) = 2;
    g.at(2, 0, 0, 0) = 2;
    g.at(2, 0, 1, 0) = 2;
    CHECK_FALSE(horizon_certificate(g, Objective::reach({0, 0, 1})).has_value());
}

TEST_CASE("brute force on the fixtures") {
    auto d0 = fixtures::g0();
    CHECK(brute_force_three(d0.three, d0.obs1, d0.obs2, d0.objective, 1).yes());

    auto d1 = fixtures::g1();
    CHECK_FALSE(brute_force_three(d1.three, d1.obs1, d1.obs2, d1.objective, 1).yes());

    auto d2 = fixtures::g2();
    CHECK(brute_force_three(d2.three, d2.obs1, d2.obs2, d2.objective, 1).yes());

    // perfect information for player 2 does not change it: player 3 still
    // resolves last
    CHECK(brute_force_three(d2.three, ObservationPartition::blind(3),
                            ObservationPartition::perfect(3), d2.objective, 1)
              .yes());

    CHECK_THROWS_AS(brute_force_three(d1.three, d1.obs1, d1.obs2, d1.objective, 0), OracleError);
}

TEST_CASE("oracle agrees across horizons h and h+1") {
    Rng rng(23);
    int done = 0;
    for (int round = 0; round < 400 && done < 60; ++round) {
        GameDoc d = fixtures::random_three(rng);
        auto cert = horizon_certificate(d.three, d.objective);
        if (!cert || cert->horizon > 3) continue;
        ++done;
        Verdict a = brute_force_three(d.three, d.obs1, d.obs2, d.objective, cert->horizon);
        Verdict b = brute_force_three(d.three, d.obs1, d.obs2, d.objective, cert->horizon + 1);
        CHECK(a.yes() == b.yes());
    }
    CHECK(done == 60);
}

TEST_CASE("exists_play basics") {
    // already at the target
    auto l = exists_play({1, 0, {{0}}}, Objective::reach({1}));
    REQUIRE(l.has_value());
    CHECK(l->stem.empty());

    OnePlayerGraph odd;
    odd.num_states = 2;
    odd.initial = 0;
    odd.succ = {{1}, {0}};
    CHECK_FALSE(exists_play(odd, Objective::parity({1, 1})).has_value());
    CHECK_FALSE(exists_play(odd, Objective::parity({1, 2})).has_value()); // min on the cycle is 1
    CHECK(exists_play(odd, Objective::parity({0, 1})).has_value());
    CHECK(exists_play(odd, Objective::parity({2, 4})).has_value());
}

TEST_CASE("exists_play witnesses satisfy eval_lasso on random graphs") {
    Rng rng(31);
    for (int round = 0; round < 300; ++round) {
        OnePlayerGraph g;
        g.num_states = rng.range(1, 6);
        g.initial = 0;
        g.succ.resize(g.num_states);
        for (int q = 0; q < g.num_states; ++q) {
            int outs = rng.range(1, 2);
            for (int i = 0; i < outs; ++i) g.succ[q].push_back(rng.range(0, g.num_states - 1));
        }
        Objective obj;
        int kind = rng.range(0, 2);
        if (kind <= 1) {
            std::vector<char> t(g.num_states, 0);
            for (int q = 0; q < g.num_states; ++q) t[q] = (char)rng.below(2);
            obj = kind == 0 ? Objective::reach(t) : Objective::safe(t);
        } else {
            std::vector<int> p(g.num_states);
            for (int& x : p) x = rng.range(0, 3);
            obj = Objective::parity(p);
        }
        auto l = exists_play(g, obj);
        if (l) {
            CHECK(eval_lasso(l->stem, l->cycle, obj));
            std::vector<int> seq = l->stem;
            seq.insert(seq.end(), l->cycle.begin(), l->cycle.end());
            seq.push_back(l->cycle.front());
            CHECK(seq.front() == g.initial);
            for (size_t i = 0; i + 1 < seq.size(); ++i) {
                bool edge = false;
                for (int w : g.succ[seq[i]]) edge |= w == seq[i + 1];
                CHECK(edge);
            }
        }
    }
}

TEST_CASE("exists_play agrees with exhaustive simple-lasso enumeration") {
    Rng rng(37);
    for (int round = 0; round < 150; ++round) {
        OnePlayerGraph g;
        g.num_states = rng.range(1, 6);
        g.initial = 0;
        g.succ.resize(g.num_states);
        for (int q = 0; q < g.num_states; ++q) {
            int outs = rng.range(1, 2);
            for (int i = 0; i < outs; ++i) g.succ[q].push_back(rng.range(0, g.num_states - 1));
        }
        std::vector<int> p(g.num_states);
        for (int& x : p) x = rng.range(0, 3);
        Objective obj = Objective::parity(p);

        bool expected = false;
        std::vector<int> path{g.initial};
        auto rec = [&](auto&& self) -> void {
            if (expected) return;
            int cur = path.back();
            for (size_t i = 0; i + 1 < path.size(); ++i)
                if (path[i] == cur) {
                    std::vector<int> cyc(path.begin() + i, path.end() - 1);
                    std::vector<int> stem(path.begin(), path.begin() + i);
                    if (eval_lasso(stem, cyc, obj)) expected = true;
                }
            if (expected || path.size() > 2 * (size_t)g.num_states + 2) return;
            for (int w : g.succ[cur]) {
                path.push_back(w);
                self(self);
                path.pop_back();
            }
        };
        rec(rec);
        CHECK(exists_play(g, obj).has_value() == expected);
    }
}

TEST_CASE("markov_qualitative basics") {
    MarkovChain mc;
    mc.num_states = 2;
    mc.initial = 0;
    mc.rows = {{{1, Rat(1, 2)}, {0, Rat(1, 2)}}, {{1, Rat::one()}}};
    CHECK(markov_qualitative(mc, {0, 1}) == Qualitative::One);

    MarkovChain mc2;
    mc2.num_states = 3;
    mc2.initial = 0;
    mc2.rows = {{{1, Rat(1, 2)}, {2, Rat(1, 2)}}, {{1, Rat::one()}}, {{2, Rat::one()}}};
    CHECK(markov_qualitative(mc2, {0, 1, 0}) == Qualitative::Positive);

    MarkovChain mc3;
    mc3.num_states = 2;
    mc3.initial = 0;
    mc3.rows = {{{0, Rat::one()}}, {{1, Rat::one()}}};
    CHECK(markov_qualitative(mc3, {0, 1}) == Qualitative::Zero);

    MarkovChain bad = mc3;
    bad.rows[0] = {{0, Rat(1, 2)}};
    CHECK_THROWS_AS(markov_qualitative(bad, {0, 1}), ValidationError);
}

TEST_CASE("markov positive coincides with reach on the support graph") {
    Rng rng(43);
    for (int round = 0; round < 200; ++round) {
        int n = rng.range(1, 5);
        MarkovChain mc;
        mc.num_states = n;
        mc.initial = 0;
        mc.rows.resize(n);
        for (int q = 0; q < n; ++q) {
            if (rng.below(2)) {
                mc.rows[q] = {{rng.range(0, n - 1), Rat::one()}};
            } else {
                int x = rng.range(0, n - 1);
                int y = rng.range(0, n - 1);
                if (x == y) {
                    mc.rows[q] = {{x, Rat::one()}};
                } else {
                    if (x > y) std::swap(x, y);
                    mc.rows[q] = {{x, Rat(1, 2)}, {y, Rat(1, 2)}};
                }
            }
        }
        std::vector<char> target(n, 0);
        for (int q = 0; q < n; ++q) target[q] = (char)rng.below(2);
        OnePlayerGraph g;
        g.num_states = n;
        g.initial = 0;
        g.succ.resize(n);
        for (int q = 0; q < n; ++q)
            for (const auto& [t, p] : mc.rows[q])
                if (p.positive()) g.succ[q].push_back(t);
        bool reach = exists_play(g, Objective::reach(target)).has_value();
        CHECK((markov_qualitative(mc, target) != Qualitative::Zero) == reach);
    }
}

TEST_CASE("uniform-correspondence lemma on the fixtures") {
    auto d1 = fixtures::g1();
    CHECK(check_lemma_uniform(d1.three, d1.obs1, d1.obs2, d1.objective.target, 1));
    auto d2 = fixtures::g2();
    CHECK(check_lemma_uniform(d2.three, d2.obs1, d2.obs2, d2.objective.target, 1));
}

TEST_CASE("uniform-correspondence lemma on random games") {
    Rng rng(41);
    int done = 0;
    for (int round = 0; round < 800 && done < 80; ++round) {
        GameDoc d = fixtures::random_three(rng, 3);
        if (d.objective.kind != ObjectiveKind::Reach) continue;
        auto cert = horizon_certificate(d.three, d.objective);
        if (!cert || cert->horizon > 3) continue;
        ++done;
        CHECK(check_lemma_uniform(d.three, d.obs1, d.obs2, d.objective.target, 3));
    }
    CHECK(done == 80);
}

TEST_CASE("strategy class counts bound the relevant histories") {
    auto d1 = fixtures::g1();
    ClassCounts cc = strategy_class_counts(d1.three, d1.obs1, d1.obs2, d1.objective, 1);
    CHECK(cc.player1 == 1); // only the first move matters
    CHECK(cc.player2 == 1);
}
