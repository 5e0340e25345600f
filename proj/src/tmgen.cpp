#include "wag/tmgen.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include <json.hpp>

namespace wag {

using nlohmann::json;

void AlternatingTM::validate() const {
    int nq = (int)state_names.size();
    if (nq == 0) throw ValidationError("machine has no states");
    if ((int)is_and.size() != nq) throw ValidationError("or/and tags not total");
    auto check_state = [&](int q, const char* what) {
        if (q < 0 || q >= nq) throw ValidationError(std::string(what) + " state out of range");
    };
    check_state(initial, "initial");
    check_state(accept, "accept");
    check_state(reject, "reject");
    if (accept == reject) throw ValidationError("accept and reject must differ");
    int ns = num_tape_symbols();
    std::vector<std::vector<char>> has(nq, std::vector<char>(ns, 0));
    for (const auto& t : delta) {
        check_state(t.from, "transition source");
        check_state(t.to, "transition target");
        if (t.read < 0 || t.read >= ns || t.write < 0 || t.write >= ns)
            throw ValidationError("transition symbol out of range");
        if (t.dir != -1 && t.dir != 1) throw ValidationError("transition direction must be -1 or 1");
        if (t.from == accept || t.from == reject)
            throw ValidationError("accepting/rejecting states carry no transitions");
        has[t.from][t.read] = 1;
    }
    for (int q = 0; q < nq; ++q) {
        if (q == accept || q == reject) continue;
        for (int s = 0; s < ns; ++s)
            if (!has[q][s])
                throw ValidationError("state '" + state_names[q] + "' has no transition on symbol " +
                                      std::to_string(s));
    }
}

AlternatingTM parse_tm(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("syntax error at byte ") + std::to_string(e.byte) + ": " +
                              e.what());
    }
    AlternatingTM m;
    std::map<std::string, int> state_idx;
    for (const auto& s : doc.at("states")) {
        std::string name = s.at("name").get<std::string>();
        std::string kind = s.value("kind", "or");
        if (!state_idx.emplace(name, (int)m.state_names.size()).second)
            throw ValidationError("duplicate machine state '" + name + "'");
        m.state_names.push_back(name);
        m.is_and.push_back(kind == "and");
        if (kind != "and" && kind != "or")
            throw ValidationError("state kind must be 'or' or 'and'");
    }
    std::map<std::string, int> sym_idx;
    for (const auto& s : doc.at("input_alphabet")) {
        std::string name = s.get<std::string>();
        if (name == "#") throw ValidationError("'#' is the blank symbol");
        if (!sym_idx.emplace(name, (int)m.input_alphabet.size()).second)
            throw ValidationError("duplicate input symbol '" + name + "'");
        m.input_alphabet.push_back(name);
    }
    sym_idx["#"] = m.blank();
    auto state_of = [&](const std::string& s) {
        auto it = state_idx.find(s);
        if (it == state_idx.end()) throw ValidationError("unknown machine state '" + s + "'");
        return it->second;
    };
    auto sym_of = [&](const std::string& s) {
        auto it = sym_idx.find(s);
        if (it == sym_idx.end()) throw ValidationError("unknown tape symbol '" + s + "'");
        return it->second;
    };
    m.initial = state_of(doc.at("initial").get<std::string>());
    m.accept = state_of(doc.at("accept").get<std::string>());
    m.reject = state_of(doc.at("reject").get<std::string>());
    for (const auto& t : doc.at("delta")) {
        TmTransition tr;
        tr.from = state_of(t.at("from").get<std::string>());
        tr.read = sym_of(t.at("read").get<std::string>());
        tr.to = state_of(t.at("to").get<std::string>());
        tr.write = sym_of(t.at("write").get<std::string>());
        tr.dir = t.at("move").get<int>();
        m.delta.push_back(tr);
    }
    m.validate();
    return m;
}

std::vector<int> parse_word(const AlternatingTM& m, const std::string& word) {
    std::vector<int> out;
    for (char c : word) {
        int found = -1;
        for (size_t i = 0; i < m.input_alphabet.size(); ++i)
            if (m.input_alphabet[i] == std::string(1, c)) found = (int)i;
        if (found == -1) throw ValidationError(std::string("word symbol '") + c + "' not in alphabet");
        out.push_back(found);
    }
    if (out.empty()) throw ValidationError("empty input word");
    return out;
}

namespace {

struct Config {
    int state, head;
    std::vector<int> tape;
    bool operator<(const Config& o) const {
        return std::tie(state, head, tape) < std::tie(o.state, o.head, o.tape);
    }
};

} // namespace

bool tm_accepts(const AlternatingTM& m, const std::vector<int>& word, int n, long long budget,
                TmRun* run) {
    m.validate();
    int cells = 1 << n;
    if ((int)word.size() > cells)
        throw PreconditionError("input word longer than the promised tape");
    Config c0;
    c0.state = m.initial;
    c0.head = 0;
    c0.tape.assign(cells, m.blank());
    for (size_t i = 0; i < word.size(); ++i) c0.tape[i] = word[i];

    // materialize the reachable configuration graph
    std::map<Config, int> index;
    std::vector<Config> configs{c0};
    std::vector<std::vector<std::pair<int, int>>> succ; // (transition, config)
    index[c0] = 0;
    for (size_t i = 0; i < configs.size(); ++i) {
        if ((long long)configs.size() > budget)
            throw BudgetError("configuration graph exceeded the budget");
        Config c = configs[i];
        succ.emplace_back();
        if (c.state == m.accept || c.state == m.reject) continue;
        for (size_t t = 0; t < m.delta.size(); ++t) {
            const auto& tr = m.delta[t];
            if (tr.from != c.state || tr.read != c.tape[c.head]) continue;
            Config c2 = c;
            c2.tape[c.head] = tr.write;
            c2.state = tr.to;
            c2.head = c.head + tr.dir;
            if (c2.head < 0 || c2.head >= cells)
                throw PreconditionError("machine leaves the promised tape space");
            auto [it, inserted] = index.try_emplace(c2, (int)configs.size());
            if (inserted) configs.push_back(c2);
            succ[i].push_back({(int)t, it->second});
        }
    }

    // least fixpoint: acceptance needs a well-founded derivation, so a plain
    // monotone iteration from the accepting configurations is exact
    std::vector<char> acc(configs.size(), 0);
    for (size_t i = 0; i < configs.size(); ++i) acc[i] = configs[i].state == m.accept;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < configs.size(); ++i) {
            if (acc[i] || configs[i].state == m.accept || configs[i].state == m.reject) continue;
            bool conj = m.is_and[configs[i].state];
            bool v = conj;
            for (const auto& [t, j] : succ[i])
                if (conj) v = v && acc[j];
                else v = v || acc[j];
            if (v && !acc[i]) {
                acc[i] = 1;
                changed = true;
            }
        }
    }

    if (acc[0] && run && m.nondeterministic()) {
        // ranks give a cycle-free accepting path
        std::vector<int> rank(configs.size(), -1);
        for (size_t i = 0; i < configs.size(); ++i)
            if (configs[i].state == m.accept) rank[i] = 0;
        changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < configs.size(); ++i) {
                if (!acc[i] || rank[i] != -1) continue;
                for (const auto& [t, j] : succ[i])
                    if (rank[j] != -1) {
                        rank[i] = rank[j] + 1;
                        changed = true;
                        break;
                    }
            }
        }
        run->steps.clear();
        int cur = 0;
        while (true) {
            const Config& c = configs[cur];
            TmRun::Step step{c.state, c.head, c.tape, -1};
            if (c.state == m.accept) {
                run->steps.push_back(step);
                break;
            }
            int pick = -1, pick_t = -1;
            for (const auto& [t, j] : succ[cur])
                if (rank[j] != -1 && rank[j] < rank[cur] && pick == -1) {
                    pick = j;
                    pick_t = t;
                }
            assert(pick != -1);
            step.transition = pick_t;
            run->steps.push_back(step);
            cur = pick;
        }
    }
    return acc[0];
}

// ---------------------------------------------------------------------------
// Game construction. The stream alternates one announce step with n bit
// steps (transition announcements carry no bit block). Player 1 announces
// configurations symbol by symbol; player 2 may anchor one content check,
// counts positions by announcing a bit block per symbol (most significant
// bit first), and answers the transition requests at and-heads; player 3
// may audit one bit of the count. Phase tags are embedded in state names.
// ---------------------------------------------------------------------------

namespace {

struct TmBuild {
    const AlternatingTM& m;
    std::vector<int> word;
    int n;
    long long budget;

    int tape_syms;  // |Gamma|
    int num_syms;   // tape symbols + head symbols
    int boundary;   // pseudo-symbol: previous announce was a transition
    int unset;      // pseudo-symbol: window slot not captured yet

    static constexpr int a2_pass = 0, a2_check = 1, a2_lcheck = 2, a2_b0 = 3, a2_b1 = 4,
                         a2_delta0 = 5;

    TmBuild(const AlternatingTM& mm, std::vector<int> w, int nn, long long b)
        : m(mm), word(std::move(w)), n(nn), budget(b) {
        tape_syms = m.num_tape_symbols();
        num_syms = tape_syms + (int)m.state_names.size() * tape_syms;
        boundary = num_syms;
        unset = num_syms + 1;
    }

    int head_sym(int q, int g) const { return tape_syms + q * tape_syms + g; }
    bool is_head(int s) const { return s >= tape_syms && s < num_syms; }
    int head_state(int s) const { return (s - tape_syms) / tape_syms; }
    int head_read(int s) const { return (s - tape_syms) % tape_syms; }

    // window slots are tracked only as far as the expected-symbol computation
    // needs them: the left neighbour contributes its headness, the right
    // neighbour one of three kinds, and once the transition is captured the
    // whole window collapses into the expected symbol itself
    enum PrevKind { PrevBoundary = 0, PrevPlain = 1, PrevHead = 2 };
    enum Z3Kind { Z3Pending = 0, Z3Plain = 1, Z3Head = 2 };
    enum ChStage { ChNone = 0, ChPreT = 1, ChPostT = 2, ChLen = 3 };

    struct St {
        int rhythm = 0;   // 0 announce; 1..n bit step index
        int phase = 0;    // 0..L-1 forced; L blanks; L+1 run
        int prev = PrevBoundary;
        int head = -1;    // head symbol of the current configuration
        int expect = -1;  // machine state forced on the next head
        bool frozen = false; // accept/reject announced: tape replays unchanged
        bool acc = false;    // the frozen stream is an acceptance claim
        int ch = ChNone;
        int z2 = 0;          // checked symbol (pre-transition stage)
        bool z1_head = false;
        int z3 = Z3Pending;
        int expected = 0;    // post-transition stage
        bool zeros = false;
        bool ones = true;
        bool armed = false;
        int au = 0; // 0 none, 1 watching suffix, 2 waiting for the next block
        int au_p = 0;
        int au_b = 0;
        bool suf = true;
        int mark = -1; // and-transition just taken (the observation)

        auto key() const {
            return std::tie(rhythm, phase, prev, head, expect, frozen, acc, ch, z2, z1_head, z3,
                            expected, zeros, ones, armed, au, au_p, au_b, suf, mark);
        }
        bool operator<(const St& o) const { return key() < o.key(); }
    };

    std::map<St, int> index;
    std::vector<St> states;
    static constexpr int sink_id = 0, target_id = 1;

    int intern(St s) {
        auto [it, inserted] = index.try_emplace(s, (int)states.size() + 2);
        if (inserted) {
            if ((long long)states.size() + 2 >= budget)
                throw BudgetError("turing-machine game exceeded the state budget");
            states.push_back(s);
        }
        return it->second;
    }

    int forced_symbol(int pos) const {
        if (pos == 0) return head_sym(m.initial, word[0]);
        return word[pos < (int)word.size() ? pos : 0];
    }

    int comparison_value(const St& s) const {
        // a check that saw no transition compares against frozen content
        return s.ch == ChPostT ? s.expected : s.z2;
    }

    int apply_transition(St s, int t, int mark) {
        if (s.frozen) return sink_id; // no transitions after accept/reject claims
        if (s.ch == ChLen)
            return s.armed ? target_id : sink_id; // boundary on time or early
        if (s.ch == ChPostT) return sink_id; // configuration cut short
        if (s.ch == ChPreT) {
            const auto& tr = m.delta[t];
            if (s.z3 == Z3Pending) s.z3 = Z3Plain; // boundary neighbour
            if (is_head(s.z2)) s.expected = tr.write;
            else if (s.z1_head && tr.dir == 1) s.expected = head_sym(tr.to, s.z2);
            else if (s.z3 == Z3Head && tr.dir == -1) s.expected = head_sym(tr.to, s.z2);
            else s.expected = s.z2;
            s.ch = ChPostT;
            s.z2 = 0;
            s.z1_head = false;
            s.z3 = Z3Pending;
        }
        s.expect = m.delta[t].to;
        s.head = -1;
        s.prev = PrevBoundary;
        s.mark = mark;
        return intern(s);
    }

    int announce(St s, int alpha, int beta) {
        s.mark = -1;
        if (s.ch == ChLen && s.armed) return sink_id; // overlong configuration
        // an armed content check compares this very announcement
        if (s.ch != ChNone && s.armed) {
            if (s.ch == ChPreT && !s.frozen) return sink_id; // no boundary in the window
            return alpha == comparison_value(s) ? target_id : sink_id;
        }

        if (s.phase < (int)word.size()) { // forced prefix of the initial configuration
            if (alpha != forced_symbol(s.phase)) return sink_id;
            if (s.phase == 0) s.head = alpha;
            ++s.phase;
        } else if (s.phase == (int)word.size()) { // blank tail until the first transition
            if (alpha != m.blank()) return sink_id;
        } else if (is_head(alpha)) {
            if (s.frozen) {
                if (alpha != s.head) return sink_id; // replay must repeat the claim
            } else {
                if (s.head != -1) return sink_id; // second head this configuration
                int q = head_state(alpha);
                if (s.expect != -1 && q != s.expect) return sink_id;
                if (q == m.reject) {
                    if (s.ch == ChNone) return sink_id;
                    if (s.ch == ChLen) return target_id; // halting forfeits the length claim
                    s.frozen = true;
                } else if (q == m.accept) {
                    if (s.ch == ChNone) return target_id;
                    if (s.ch == ChLen) return target_id;
                    s.frozen = true;
                    s.acc = true;
                }
                s.head = alpha;
                s.expect = -1;
            }
        }

        if (s.ch == ChPreT && s.z3 == Z3Pending) s.z3 = is_head(alpha) ? Z3Head : Z3Plain;
        if (s.ch == ChNone && beta == a2_check) {
            s.ch = ChPreT;
            s.z1_head = s.prev == PrevHead;
            s.z2 = alpha;
            s.z3 = Z3Pending;
            s.zeros = true;
            s.armed = false;
        } else if (s.ch == ChNone && beta == a2_lcheck && s.prev == PrevBoundary && !s.frozen) {
            s.ch = ChLen;
            s.z2 = 0;
            s.z1_head = false;
            s.z3 = Z3Pending;
            s.zeros = true;
            s.armed = false;
        }
        s.prev = is_head(alpha) ? PrevHead : PrevPlain;
        s.ones = true;
        s.rhythm = 1;
        return intern(s);
    }

    int bit_step(St s, int beta, bool mark_action) {
        s.mark = -1;
        if (beta != a2_b0 && beta != a2_b1) return target_id; // rhythm violation
        int b = beta == a2_b1 ? 1 : 0;
        int idx = s.rhythm - 1;
        if (s.ch != ChNone) {
            if (s.au == 2 && idx == s.au_p) return b == s.au_b ? sink_id : target_id;
            if (s.zeros && b != 0) return target_id; // the anchor block starts at zero
            if (s.au == 1 && idx > s.au_p) s.suf = s.suf && b == 1;
            if (s.au == 0 && mark_action) {
                s.au = 1;
                s.au_p = idx;
                s.au_b = b;
                s.suf = true;
            }
            s.ones = s.ones && b == 1;
            if (s.rhythm == n) {
                if (s.au == 1) {
                    s.au_b ^= s.suf ? 1 : 0; // empty suffix flips unconditionally
                    s.au = 2;
                }
                s.armed = s.ones && !s.zeros;
                s.zeros = false;
                s.ones = true;
            }
        }
        s.rhythm = s.rhythm == n ? 0 : s.rhythm + 1;
        return intern(s);
    }

    int step(const St& s, int a1, int a2, int a3) {
        if (s.rhythm != 0) return bit_step(s, a2, a3 == 1);
        if (a1 >= num_syms) { // transition declaration
            int t_req = a1 - num_syms;
            if (s.phase < (int)word.size()) return sink_id;
            if (s.head == -1) return sink_id;
            St next = s;
            if (next.phase == (int)word.size()) next.phase = (int)word.size() + 1;
            int q = head_state(s.head);
            int gsym = head_read(s.head);
            if (!m.is_and[q]) {
                const auto& tr = m.delta[t_req];
                if (tr.from != q || tr.read != gsym) return sink_id;
                return apply_transition(next, t_req, -1);
            }
            if (a2 < a2_delta0) return target_id; // player 2 must answer
            int t2 = a2 - a2_delta0;
            const auto& tr = m.delta[t2];
            if (tr.from != q || tr.read != gsym) return target_id;
            return apply_transition(next, t2, t2);
        }
        return announce(s, a1, a2);
    }
};

} // namespace

TmGameResult tm_to_game(const AlternatingTM& m, const std::vector<int>& word, int n,
                        long long budget) {
    m.validate();
    if (n < 1) throw PreconditionError("space exponent must be at least 1");
    if (word.empty()) throw PreconditionError("empty input word");
    if ((int)word.size() > (1 << n))
        throw PreconditionError("input word longer than the promised tape");

    TmBuild b(m, word, n, budget);
    bool alternating = !m.nondeterministic();

    int num_a1 = b.num_syms + (int)m.delta.size();
    int num_a2 = 5 + (alternating ? (int)m.delta.size() : 0);
    int num_a3 = 2;

    TmBuild::St init;
    b.intern(init);

    std::vector<std::vector<int>> rows(2); // sink, target filled below
    for (size_t i = 0; i < b.states.size(); ++i) {
        rows.emplace_back();
        auto& row = rows.back();
        row.resize((size_t)num_a1 * num_a2 * num_a3);
        for (int a1 = 0; a1 < num_a1; ++a1)
            for (int a2 = 0; a2 < num_a2; ++a2)
                for (int a3 = 0; a3 < num_a3; ++a3)
                    row[((size_t)a1 * num_a2 + a2) * num_a3 + a3] = b.step(b.states[i], a1, a2, a3);
    }
    rows[0].assign((size_t)num_a1 * num_a2 * num_a3, 0);
    rows[1].assign((size_t)num_a1 * num_a2 * num_a3, 1);

    TmGameResult r;
    ThreePlayerGame& g = r.doc.three;
    r.doc.kind = GameKind::Three;
    int total = (int)b.states.size() + 2;

    auto sym_name = [&](int s) -> std::string {
        if (s == b.boundary) return "|";
        if (s == b.unset) return "?";
        if (s < b.tape_syms) return s == m.blank() ? "#" : m.input_alphabet[s];
        return "(" + m.state_names[b.head_state(s)] + "," +
               (b.head_read(s) == m.blank() ? "#" : m.input_alphabet[b.head_read(s)]) + ")";
    };

    g.state_names.push_back("sink");
    g.state_names.push_back("target");
    for (const auto& s : b.states) {
        std::ostringstream name;
        if (s.phase < (int)word.size()) name << "init" << s.phase;
        else if (s.phase == (int)word.size()) name << "blanks";
        else name << "run";
        name << "/r" << s.rhythm << "/p" << s.prev
             << "/h=" << (s.head == -1 ? std::string("-") : sym_name(s.head))
             << "/x=" << (s.expect == -1 ? std::string("-") : m.state_names[s.expect]);
        if (s.frozen) name << (s.acc ? "/acc" : "/rej");
        if (s.ch == TmBuild::ChPreT)
            name << "/ch[" << (s.z1_head ? "H," : ".,") << sym_name(s.z2) << "," << s.z3
                 << (s.zeros ? ",z" : "") << (s.ones ? ",o" : "") << (s.armed ? ",A" : "") << "]";
        if (s.ch == TmBuild::ChLen)
            name << "/lc[" << (s.zeros ? "z" : "") << (s.ones ? "o" : "") << (s.armed ? "A" : "")
                 << "]";
        if (s.ch == TmBuild::ChPostT)
            name << "/ch[=" << sym_name(s.expected) << (s.zeros ? ",z" : "") << (s.ones ? ",o" : "")
                 << (s.armed ? ",A" : "") << "]";
        if (s.au) name << "/au" << s.au << "[" << s.au_p << "," << s.au_b << (s.suf ? ",s" : "") << "]";
        if (s.mark != -1) name << "/m" << s.mark;
        g.state_names.push_back(name.str());
    }
    for (int sidx = 0; sidx < b.num_syms; ++sidx) {
        g.a1_names.push_back("s:" + sym_name(sidx));
        r.symbol_action.push_back(sidx);
    }
    for (size_t t = 0; t < m.delta.size(); ++t) {
        g.a1_names.push_back("t" + std::to_string(t));
        r.transition_action.push_back(b.num_syms + (int)t);
    }
    g.a2_names = {"pass", "check", "lcheck", "b0", "b1"};
    if (alternating)
        for (size_t t = 0; t < m.delta.size(); ++t) g.a2_names.push_back("t" + std::to_string(t));
    g.a3_names = {"pass", "mark"};
    g.initial = 2;
    g.table.resize((long long)total * num_a1 * num_a2 * num_a3);
    for (int q = 0; q < total; ++q)
        std::copy(rows[q].begin(), rows[q].end(), g.table.begin() + (long long)q * rows[q].size());
    g.validate();

    // observations: the and-transition just taken is the only information;
    // everything else is one cell
    std::vector<std::vector<StateId>> cells(1 + m.delta.size());
    cells[0].push_back(0);
    cells[0].push_back(1);
    for (size_t i = 0; i < b.states.size(); ++i) {
        int mark = b.states[i].mark;
        cells[mark == -1 ? 0 : 1 + mark].push_back((int)i + 2);
    }
    std::vector<std::vector<StateId>> nonempty;
    for (auto& c : cells)
        if (!c.empty()) nonempty.push_back(std::move(c));
    r.doc.obs1 = ObservationPartition::from_cells(total, nonempty);
    r.doc.obs2 = r.doc.obs1;

    std::vector<char> target(total, 0);
    target[1] = 1;
    r.doc.objective = Objective::reach(std::move(target));
    r.doc.validate();

    r.sink_state = 0;
    r.target_state = 1;
    r.bits_per_round = n;
    r.expected_accepts = tm_accepts(m, word, n, budget);
    for (size_t i = 0; i < b.states.size(); ++i) {
        const auto& s = b.states[i];
        std::string tag = s.phase <= (int)word.size() ? "init" : "run";
        if (s.ch) tag += "+check";
        if (s.au) tag += "+audit";
        ++r.phase_map[tag];
    }
    r.phase_map["sink"] = 1;
    r.phase_map["target"] = 1;
    return r;
}

TmStochasticResult tm_to_stochastic(const AlternatingTM& m, const std::vector<int>& word, int n,
                                    long long budget) {
    TmGameResult base = tm_to_game(m, word, n, budget);
    const ThreePlayerGame& g = base.doc.three;

    TmStochasticResult r;
    r.expected_accepts = base.expected_accepts;
    r.doc.kind = GameKind::Stochastic;
    StochasticGame& sg = r.doc.stoch;
    sg.state_names = g.state_names;
    sg.a1_names = g.a1_names;
    sg.a2_names = g.a2_names;
    sg.initial = g.initial;
    sg.dists.resize((long long)g.num_states() * g.n1() * g.n2());
    for (int q = 0; q < g.num_states(); ++q)
        for (int a1 = 0; a1 < g.n1(); ++a1)
            for (int a2 = 0; a2 < g.n2(); ++a2) {
                std::map<StateId, int> counts;
                for (int a3 = 0; a3 < g.n3(); ++a3) {
                    StateId to = g.step(q, a1, a2, a3);
                    if (to == base.sink_state) to = g.initial; // the game restarts
                    ++counts[to];
                }
                auto& d = sg.dists[(q * g.n1() + a1) * g.n2() + a2];
                for (const auto& [t, c] : counts) d.emplace_back(t, Rat(c, g.n3()));
            }
    r.doc.obs1 = base.doc.obs1;
    r.doc.obs2 = base.doc.obs2;
    r.doc.objective = base.doc.objective;
    r.doc.validate();
    return r;
}

MooreStrategy step_script(int owner, int num_obs_cells, const std::vector<ActionId>& prefix,
                          const std::vector<ActionId>& loop) {
    if (loop.empty()) throw PreconditionError("script loop must be non-empty");
    MooreStrategy s;
    s.owner = owner;
    s.num_obs_cells = num_obs_cells;
    s.memory_count = (int)(prefix.size() + loop.size()) + 1; // memory 0 = before start
    s.initial_memory = 0;
    s.update.assign(s.memory_count * num_obs_cells, 0);
    s.output.assign(s.memory_count, 0);
    for (int mem = 0; mem < s.memory_count; ++mem) {
        int next = mem + 1 < s.memory_count ? mem + 1 : (int)prefix.size() + 1;
        for (int c = 0; c < num_obs_cells; ++c) s.update[mem * num_obs_cells + c] = next;
        if (mem >= 1) {
            size_t idx = (size_t)mem - 1;
            s.output[mem] = idx < prefix.size() ? prefix[idx] : loop[idx - prefix.size()];
        }
    }
    return s;
}

MooreStrategy honest_script(const TmGameResult& game, const AlternatingTM& m,
                            const std::vector<int>& word, int n) {
    if (!m.nondeterministic())
        throw PreconditionError("honest scripts are built for nondeterministic machines only");
    TmRun run;
    if (!tm_accepts(m, word, n, 1'000'000, &run))
        throw PreconditionError("honest script requires an accepting machine");

    int cells = 1 << n;
    auto head_action = [&](int q, int g) {
        return game.symbol_action[m.num_tape_symbols() + q * m.num_tape_symbols() + g];
    };
    // per announce item; transitions carry no bit block
    std::vector<std::pair<ActionId, bool>> items; // (action, is_transition)
    for (const auto& st : run.steps) {
        for (int pos = 0; pos < cells; ++pos)
            items.push_back({pos == st.head ? head_action(st.state, st.tape[pos])
                                            : game.symbol_action[st.tape[pos]],
                             false});
        if (st.transition != -1) items.push_back({game.transition_action[st.transition], true});
    }
    std::vector<ActionId> steps, loop;
    size_t loop_from = items.size() - cells; // repeat the accepting configuration
    for (size_t k = 0; k < items.size(); ++k) {
        auto& out = k >= loop_from ? loop : steps;
        out.push_back(items[k].first);
        if (!items[k].second)
            for (int i = 0; i < n; ++i) out.push_back(items[k].first);
    }
    return step_script(1, game.doc.obs1.num_cells(), steps, loop);
}

} // namespace wag
