#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "wag/parse.hpp"

using namespace wag;

namespace {

const char* kPennies = R"({
  "kind": "three-player",
  "states": ["s", "w", "l"],
  "initial": "s",
  "actions": {"a1": ["h", "t"], "a2": ["h", "t"], "a3": ["a"]},
  "obs1": ["*"],
  "obs2": ["*"],
  "transitions": [
    {"from": "s", "a1": "h", "a2": "h", "a3": "a", "to": "w"},
    {"from": "s", "a1": "t", "a2": "t", "a3": "a", "to": "w"},
    {"from": "s", "a1": "h", "a2": "t", "a3": "a", "to": "l"},
    {"from": "s", "a1": "t", "a2": "h", "a3": "a", "to": "l"},
    {"from": "w", "a1": "*", "a2": "*", "a3": "*", "to": "w"},
    {"from": "l", "a1": "*", "a2": "*", "a3": "*", "to": "l"}
  ],
  "objective": {"type": "reach", "target": ["w"]}
})";

} // namespace

TEST_CASE("the pennies document") {
    GameDoc d = parse_game(kPennies);
    CHECK(d.kind == GameKind::Three);
    CHECK(d.three.num_states() == 3);
    CHECK(d.obs1.is_blind());
    CHECK(d.obs2.is_blind());
    // wildcard expansion fills the total table: 3 * 2 * 2 * 1 entries
    CHECK(d.three.table.size() == 12);
    GameDoc ref = fixtures::g1();
    CHECK(d.three.table == ref.three.table);
    CHECK(d.objective.kind == ObjectiveKind::Reach);
}

TEST_CASE("round trip is the identity on random games") {
    Rng rng(163);
    for (int round = 0; round < 60; ++round) {
        GameDoc d = fixtures::random_three(rng);
        GameDoc back = parse_game(serialize_game(d));
        CHECK(back.three.state_names == d.three.state_names);
        CHECK(back.three.table == d.three.table);
        CHECK(back.obs1.cells == d.obs1.cells);
        CHECK(back.obs2.cells == d.obs2.cells);
        CHECK(back.objective.kind == d.objective.kind);
        CHECK(back.objective.target == d.objective.target);
        // serialization is canonical: a second trip is byte-identical
        CHECK(serialize_game(back) == serialize_game(d));
    }
    for (int round = 0; round < 30; ++round) {
        GameDoc d = fixtures::random_four(rng);
        GameDoc back = parse_game(serialize_game(d));
        CHECK(back.four.table3 == d.four.table3);
        CHECK(back.four.table4 == d.four.table4);
        CHECK(back.four.turn == d.four.turn);
    }
    for (int round = 0; round < 30; ++round) {
        GameDoc d = fixtures::random_stochastic(rng);
        GameDoc back = parse_game(serialize_game(d));
        CHECK(back.stoch.dists == d.stoch.dists);
    }
}

TEST_CASE("partition violations name the offending state") {
    std::string doc = kPennies;
    auto pos = doc.find("\"obs2\": [\"*\"]");
    REQUIRE(pos != std::string::npos);
    doc.replace(pos, 13, "\"obs2\": [[\"s\",\"w\"],[\"w\",\"l\"]]");
    try {
        parse_game(doc);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("'w'") != std::string::npos);
    }
}

TEST_CASE("missing transitions name the tuple") {
    std::string row = "    {\"from\": \"s\", \"a1\": \"t\", \"a2\": \"h\", \"a3\": \"a\", \"to\": \"l\"},\n";
    std::string doc = kPennies;
    auto pos = doc.find(row);
    REQUIRE(pos != std::string::npos);
    doc.erase(pos, row.size());
    try {
        parse_game(doc);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("not total") != std::string::npos);
        CHECK(msg.find("a1=t") != std::string::npos);
    }
}

TEST_CASE("conflicting wildcard expansions are rejected") {
    std::string doc = kPennies;
    auto pos = doc.find("  ],\n  \"objective\"");
    REQUIRE(pos != std::string::npos);
    doc.insert(pos, ",\n    {\"from\": \"w\", \"a1\": \"h\", \"a2\": \"h\", \"a3\": \"a\", \"to\": \"l\"}\n");
    CHECK_THROWS_AS(parse_game(doc), ValidationError);
}

TEST_CASE("syntax errors carry the byte position") {
    try {
        parse_game("{\"kind\": }");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("obs3 is rejected") {
    std::string doc = kPennies;
    auto pos = doc.find("\"obs1\"");
    doc.insert(pos, "\"obs3\": [\"*\"],\n  ");
    CHECK_THROWS_AS(parse_game(doc), ValidationError);
}

TEST_CASE("stochastic distributions must sum to one") {
    const char* doc = R"({
      "kind": "stochastic",
      "states": ["s", "t"],
      "initial": "s",
      "actions": {"a1": ["a"], "a2": ["b"]},
      "transitions": [
        {"from": "s", "a1": "a", "a2": "b", "dist": [{"to": "t", "p": "1/3"}, {"to": "s", "p": "1/3"}]},
        {"from": "t", "a1": "a", "a2": "b", "dist": [{"to": "t", "p": "1"}]}
      ],
      "objective": {"type": "reach", "target": ["t"]}
    })";
    try {
        parse_game(doc);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("sums to") != std::string::npos);
    }
}

TEST_CASE("omitted partitions mean perfect observation") {
    const char* doc = R"({
      "kind": "three-player",
      "states": ["s", "t"],
      "initial": "s",
      "actions": {"a1": ["a"], "a2": ["b"], "a3": ["c"]},
      "transitions": [
        {"from": "s", "a1": "*", "a2": "*", "a3": "*", "to": "t"},
        {"from": "t", "a1": "*", "a2": "*", "a3": "*", "to": "t"}
      ],
      "objective": {"type": "parity", "priorities": {"s": 1, "t": 0}}
    })";
    GameDoc d = parse_game(doc);
    CHECK(d.obs1.is_perfect());
    CHECK(d.obs2.is_perfect());
    CHECK(d.objective.priority == std::vector<int>{1, 0});
}
