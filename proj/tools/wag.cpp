#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wag/counting.hpp"
#include "wag/dot.hpp"
#include "wag/oracles.hpp"
#include "wag/parse.hpp"
#include "wag/report.hpp"
#include "wag/solvers.hpp"
#include "wag/strategy_io.hpp"
#include "wag/tmgen.hpp"

#include <json.hpp>

namespace {

using namespace wag;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << data;
}

long long default_budget() {
    if (const char* env = std::getenv("WAG_BUDGET")) {
        long long b = std::atoll(env);
        if (b > 0) return b;
    }
    return 1'000'000;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

int emit(RunReport& report, const Timer& timer, const std::string& report_path, int code) {
    report.wall_ms = timer.ms();
    std::string text = report.to_json();
    std::cout << text;
    if (!report_path.empty()) spit(report_path, text);
    return code;
}

// observation cells of the partially informed players, for strategy files
std::vector<std::string> p1_cell_names(const GameDoc& doc) {
    return obs_cell_names(doc.obs1, doc.state_names());
}

int run_solve(const std::string& path, const std::string& method, int m1, int m2,
              long long budget, const std::string& witness_path, const std::string& report_path,
              const std::string& tree_path, bool positive) {
    Timer timer;
    std::string text = slurp(path);
    GameDoc doc = parse_game(text);
    RunReport report;
    report.command = "solve";
    report.args = {{"method", method}, {"m1", std::to_string(m1)}, {"m2", std::to_string(m2)},
                   {"budget", std::to_string(budget)}};
    report.inputs = {{path, fnv1a64(text)}};

    SolveOptions opts;
    opts.budget = budget;
    opts.m1 = m1;
    opts.m2 = m2;
    if (method == "auto") opts.method = Method::Auto;
    else if (method == "knowledge") opts.method = Method::Knowledge;
    else if (method == "bounded") opts.method = Method::Bounded;
    else if (method == "counting") opts.method = Method::Counting;
    else throw ValidationError("unknown method '" + method + "'");

    const ThreePlayerGame* witness_game = nullptr;
    ObservationPartition witness_obs1;
    Verdict v;
    switch (doc.kind) {
        case GameKind::Three: {
            if (!tree_path.empty()) {
                if (doc.objective.kind != ObjectiveKind::Safe)
                    throw ValidationError("--tree applies to safety objectives");
                CountingTree tree = unravel(doc.three, doc.obs2, doc.objective.target, budget);
                spit(tree_path, counting_tree_dot(tree, doc.three));
            }
            v = solve_three(doc.three, doc.obs1, doc.obs2, doc.objective, opts);
            witness_game = &doc.three;
            witness_obs1 = doc.obs1;
            break;
        }
        case GameKind::Four: {
            MergedGame merged = four_to_three(doc.four, doc.obs1, doc.obs2, doc.objective, budget);
            v = solve_three(merged.game, merged.obs1, merged.obs2, merged.objective, opts);
            report.sizes["merged_actions24"] = (long long)merged.actions24.size();
            witness_game = nullptr; // witness actions are plain A1, emit as-is
            witness_obs1 = merged.obs1;
            break;
        }
        case GameKind::Stochastic: {
            if (positive) {
                if (doc.objective.kind != ObjectiveKind::Reach)
                    throw ValidationError("positive winning is implemented for reachability");
                ThreePlayerGame tg = support_game(doc.stoch);
                v = solve_three(tg, doc.obs1, doc.obs2, doc.objective, opts);
            } else {
                GadgetResult gr = gadget(doc.stoch, doc.obs1, doc.obs2, doc.objective);
                MergedGame merged =
                    four_to_three(gr.game, gr.obs1, gr.obs2, gr.objective, budget);
                v = solve_three(merged.game, merged.obs1, merged.obs2, merged.objective, opts);
                report.sizes["gadget_states"] = gr.gadget_states;
            }
            witness_obs1 = doc.obs1;
            break;
        }
    }

    report.verdict = v.yes() ? "YES" : (v.complete ? "NO" : "INCOMPLETE");
    report.method = v.method;
    report.complete = v.complete;
    for (const auto& [k, val] : v.diagnostics) report.sizes[k] = val;
    if (v.witness && !witness_path.empty()) {
        std::vector<std::string> actions =
            witness_game ? witness_game->a1_names
                         : (doc.kind == GameKind::Four ? doc.four.a1_names : doc.stoch.a1_names);
        std::vector<std::string> cells = obs_cell_names(witness_obs1, doc.state_names());
        spit(witness_path, write_strategy(*v.witness, cells, actions));
    }
    int code = v.yes() ? 0 : (v.complete ? 1 : 2);
    return emit(report, timer, report_path, code);
}

int run_oracle(const std::string& path, int horizon, long long budget,
               const std::string& against_path, const std::string& report_path) {
    Timer timer;
    std::string text = slurp(path);
    GameDoc doc = parse_game(text);
    RunReport report;
    report.command = "oracle";
    report.args = {{"horizon", std::to_string(horizon)}, {"budget", std::to_string(budget)}};
    report.inputs = {{path, fnv1a64(text)}};

    Verdict v;
    switch (doc.kind) {
        case GameKind::Three:
            v = brute_force_three(doc.three, doc.obs1, doc.obs2, doc.objective, horizon, budget);
            break;
        case GameKind::Four:
            v = brute_force_four(doc.four, doc.obs1, doc.obs2, doc.objective, horizon, budget);
            break;
        case GameKind::Stochastic:
            throw ValidationError("the oracle decides three- and four-player games");
    }
    report.verdict = v.yes() ? "YES" : "NO";
    report.method = v.method;
    for (const auto& [k, val] : v.diagnostics) report.sizes[k] = val;

    int code = v.yes() ? 0 : 1;
    if (!against_path.empty()) {
        nlohmann::json other = nlohmann::json::parse(slurp(against_path));
        std::string theirs = other.value("verdict", "");
        bool agree = theirs == report.verdict;
        report.detail = agree ? "agree" : "disagree: supplied verdict " + theirs;
        code = agree ? 0 : 1;
    }
    return emit(report, timer, report_path, code);
}

int run_reduce(const std::string& path, const std::string& reduction, const std::string& out_path,
               long long budget) {
    Timer timer;
    std::string text = slurp(path);
    GameDoc doc = parse_game(text);
    RunReport report;
    report.command = "reduce";
    report.args = {{"reduction", reduction}};
    report.inputs = {{path, fnv1a64(text)}};

    GameDoc out;
    if (reduction == "visible") {
        if (doc.kind != GameKind::Three) throw ValidationError("visible expects a three-player game");
        VisibleProduct vp = make_visible(doc.three, doc.obs1, doc.obs2, doc.objective);
        out.kind = GameKind::Three;
        out.three = vp.game;
        out.obs1 = vp.obs1;
        out.obs2 = vp.obs2;
        out.objective = vp.parity;
    } else if (reduction == "four-to-three") {
        if (doc.kind != GameKind::Four) throw ValidationError("four-to-three expects a four-player game");
        MergedGame m = four_to_three(doc.four, doc.obs1, doc.obs2, doc.objective, budget);
        out.kind = GameKind::Three;
        out.three = m.game;
        out.obs1 = m.obs1;
        out.obs2 = m.obs2;
        out.objective = m.objective;
    } else if (reduction == "uniform") {
        if (doc.kind != GameKind::Three) throw ValidationError("uniform expects a three-player game");
        out.kind = GameKind::Stochastic;
        out.stoch = uniform(doc.three);
        out.obs1 = doc.obs1;
        out.obs2 = doc.obs2;
        out.objective = doc.objective;
    } else if (reduction == "support") {
        if (doc.kind != GameKind::Stochastic) throw ValidationError("support expects a stochastic game");
        out.kind = GameKind::Three;
        out.three = support_game(doc.stoch);
        out.obs1 = doc.obs1;
        out.obs2 = doc.obs2;
        out.objective = doc.objective;
    } else if (reduction == "gadget") {
        if (doc.kind != GameKind::Stochastic) throw ValidationError("gadget expects a stochastic game");
        GadgetResult g = gadget(doc.stoch, doc.obs1, doc.obs2, doc.objective);
        out.kind = GameKind::Four;
        out.four = g.game;
        out.obs1 = g.obs1;
        out.obs2 = g.obs2;
        out.objective = g.objective;
        report.sizes["gadget_states"] = g.gadget_states;
    } else {
        throw ValidationError("unknown reduction '" + reduction + "'");
    }
    out.validate();

    nlohmann::json j = nlohmann::json::parse(serialize_game(out));
    char hash[17];
    snprintf(hash, sizeof hash, "%016llx", (unsigned long long)fnv1a64(text));
    j["_provenance"] = {{"source", path},
                        {"source_fnv1a64", hash},
                        {"reduction", reduction},
                        {"states", out.num_states()}};
    spit(out_path, j.dump(2) + "\n");

    report.verdict = "OK";
    report.sizes["states"] = out.num_states();
    return emit(report, timer, "", 0);
}

int run_verify(const std::string& path, const std::string& strategy_path, long long budget,
               const std::string& report_path) {
    Timer timer;
    std::string text = slurp(path);
    GameDoc doc = parse_game(text);
    if (doc.kind != GameKind::Three)
        throw ValidationError("verify expects a three-player game");
    std::string stext = slurp(strategy_path);
    MooreStrategy s = read_strategy(stext, p1_cell_names(doc), doc.three.a1_names);
    RunReport report;
    report.command = "verify";
    report.inputs = {{path, fnv1a64(text)}, {strategy_path, fnv1a64(stext)}};
    bool ok = verify_strategy(doc.three, doc.obs1, doc.obs2, doc.objective, s, budget);
    report.verdict = ok ? "YES" : "NO";
    report.method = "verify-strategy";
    return emit(report, timer, report_path, ok ? 0 : 1);
}

int run_gen_tm(const std::string& path, const std::string& word, int space_exp, bool stochastic,
               const std::string& out_path, const std::string& manifest_path, long long budget) {
    Timer timer;
    std::string text = slurp(path);
    AlternatingTM m = parse_tm(text);
    std::vector<int> w = parse_word(m, word);
    RunReport report;
    report.command = "gen-tm";
    report.args = {{"word", word},
                   {"space-exp", std::to_string(space_exp)},
                   {"stochastic", stochastic ? "1" : "0"}};
    report.inputs = {{path, fnv1a64(text)}};

    nlohmann::json manifest;
    manifest["word"] = word;
    manifest["space_exp"] = space_exp;
    if (stochastic) {
        TmStochasticResult r = tm_to_stochastic(m, w, space_exp, budget);
        spit(out_path, serialize_game(r.doc));
        manifest["kind"] = "stochastic";
        manifest["expected"] = r.expected_accepts ? "almost-sure" : "not-almost-sure";
        manifest["states"] = r.doc.num_states();
        report.sizes["states"] = r.doc.num_states();
        report.verdict = "OK";
        report.detail = r.expected_accepts ? "machine accepts" : "machine rejects";
    } else {
        TmGameResult r = tm_to_game(m, w, space_exp, budget);
        spit(out_path, serialize_game(r.doc));
        manifest["kind"] = "three-player";
        manifest["expected"] = r.expected_accepts ? "YES" : "NO";
        manifest["states"] = r.doc.num_states();
        nlohmann::json phases = nlohmann::json::object();
        for (const auto& [k, v] : r.phase_map) phases[k] = v;
        manifest["phase_map"] = phases;
        report.sizes["states"] = r.doc.num_states();
        report.verdict = "OK";
        report.detail = r.expected_accepts ? "machine accepts" : "machine rejects";
    }
    if (!manifest_path.empty()) spit(manifest_path, manifest.dump(2) + "\n");
    return emit(report, timer, "", 0);
}

int run_validate(const std::string& path) {
    Timer timer;
    std::string text = slurp(path);
    GameDoc doc = parse_game(text);
    RunReport report;
    report.command = "validate";
    report.inputs = {{path, fnv1a64(text)}};
    report.verdict = "OK";
    report.sizes["states"] = doc.num_states();
    return emit(report, timer, "", 0);
}

int run_export(const std::string& path, const std::string& out_path,
               const std::string& witness_path) {
    std::string text = slurp(path);
    GameDoc doc = parse_game(text);
    Verdict v;
    Verdict* vp = nullptr;
    if (!witness_path.empty()) {
        if (doc.kind != GameKind::Three)
            throw ValidationError("witness highlighting expects a three-player game");
        v.answer = Answer::Yes;
        v.witness = read_strategy(slurp(witness_path), p1_cell_names(doc), doc.three.a1_names);
        vp = &v;
    }
    std::string dot = export_dot(doc, vp);
    if (out_path.empty()) std::cout << dot;
    else spit(out_path, dot);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solvers for multi-player graph games with partial observation"};
    app.require_subcommand(1);
    long long budget = default_budget();

    std::string game_path, method = "auto", witness_path, report_path, tree_path;
    int m1 = 2, m2 = 2;
    bool positive = false;
    auto* solve = app.add_subcommand("solve", "decide a game");
    solve->add_option("game", game_path, "game file")->required();
    solve->add_option("--method", method, "auto|knowledge|bounded|counting");
    solve->add_option("--m1", m1, "player-1 memory bound (bounded method)");
    solve->add_option("--m2", m2, "player-2 refuter memory bound (bounded method)");
    solve->add_option("--budget", budget, "vertex/search budget");
    solve->add_option("--witness", witness_path, "write the winning strategy here");
    solve->add_option("--report", report_path, "write the run report here");
    solve->add_option("--tree", tree_path, "dump the counting tree (safety only)");
    solve->add_flag("--positive", positive, "stochastic games: positive instead of almost-sure");

    std::string oracle_path, against_path, oracle_report;
    int horizon = 32;
    long long oracle_budget = default_budget();
    auto* oracle = app.add_subcommand("oracle", "exhaustive ground-truth verdict");
    oracle->add_option("game", oracle_path, "game file")->required();
    oracle->add_option("--horizon", horizon, "maximum admissible horizon");
    oracle->add_option("--budget", oracle_budget, "enumeration budget");
    oracle->add_option("--against", against_path, "report file to compare verdicts with");
    oracle->add_option("--report", oracle_report, "write the run report here");

    std::string reduce_path, reduction, reduce_out;
    auto* reduce = app.add_subcommand("reduce", "apply a game-to-game reduction");
    reduce->add_option("game", reduce_path, "game file")->required();
    reduce->add_option("--reduction", reduction, "visible|four-to-three|uniform|support|gadget")
        ->required();
    reduce->add_option("-o,--output", reduce_out, "output game file")->required();

    std::string verify_path, verify_strategy_path, verify_report;
    auto* verify = app.add_subcommand("verify", "check a strategy against all adversaries");
    verify->add_option("game", verify_path, "game file")->required();
    verify->add_option("--strategy", verify_strategy_path, "strategy file")->required();
    verify->add_option("--report", verify_report, "write the run report here");

    std::string tm_path, tm_word, tm_out, tm_manifest;
    int space_exp = 1;
    bool tm_stochastic = false;
    auto* gen = app.add_subcommand("gen-tm", "compile a Turing machine into a game");
    gen->add_option("machine", tm_path, "machine description file")->required();
    gen->add_option("--word", tm_word, "input word")->required();
    gen->add_option("--space-exp", space_exp, "space exponent n (tape of 2^n cells)")->required();
    gen->add_flag("--stochastic", tm_stochastic, "emit the restart-style stochastic form");
    gen->add_option("-o,--output", tm_out, "output game file")->required();
    gen->add_option("--manifest", tm_manifest, "write the generation manifest here");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse and validate a game file");
    validate->add_option("game", validate_path, "game file")->required();

    std::string export_path, export_out, export_witness;
    auto* exp = app.add_subcommand("export", "graph-description export");
    exp->add_option("game", export_path, "game file")->required();
    exp->add_option("-o,--output", export_out, "output file (stdout when absent)");
    exp->add_option("--witness", export_witness, "strategy whose moves to highlight");

    try {
        app.parse(argc, argv);
        if (solve->parsed())
            return run_solve(game_path, method, m1, m2, budget, witness_path, report_path,
                             tree_path, positive);
        if (oracle->parsed())
            return run_oracle(oracle_path, horizon, oracle_budget, against_path, oracle_report);
        if (reduce->parsed()) return run_reduce(reduce_path, reduction, reduce_out, budget);
        if (verify->parsed())
            return run_verify(verify_path, verify_strategy_path, budget, verify_report);
        if (gen->parsed())
            return run_gen_tm(tm_path, tm_word, space_exp, tm_stochastic, tm_out, tm_manifest,
                              budget);
        if (validate->parsed()) return run_validate(validate_path);
        if (exp->parsed()) return run_export(export_path, export_out, export_witness);
        return 3;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    } catch (const BudgetError& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 2;
    } catch (const OracleError& e) {
        std::cerr << "oracle: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
