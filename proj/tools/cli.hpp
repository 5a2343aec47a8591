#pragma once

// Command-line front end. `run` parses argv, dispatches one verb and returns
// the process exit code: 0 success, 1 input error, 2 failed verdict check.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "starfree/basechange.hpp"
#include "starfree/logic.hpp"
#include "starfree/padic.hpp"
#include "starfree/serialize.hpp"
#include "starfree/setspec.hpp"

namespace starfree::cli {

inline constexpr const char* version = "0.1.0";
inline constexpr const char* out_dir_env = "STARFREE_OUT_DIR";

struct Options {
    // shared
    std::string system = "base:2";
    std::string spec;
    std::string dfa;
    std::string formula;
    std::vector<std::string> emit;
    std::string out_dir;
    bool json_stdout = false;
    std::size_t monoid_cap = default_monoid_cap;
    unsigned seed = 1;
    std::size_t random = 0;

    // verb specific
    std::string n;
    std::string value;
    std::vector<std::string> expect;
    std::vector<int> probes = default_probe_bases();
    std::uint64_t horizon = 10'000;
    int expect_tag = 0;
    int k = 2;
    int p = 2;
    std::size_t samples = 10'000;
    std::string word;
    int alphabet = 0;
    std::string to = "num";
    std::optional<std::size_t> slack;
    bool inject = false;
};

class Session {
public:
    Session(const Options& o, std::vector<std::string> argv, std::ostream& out)
        : opt_(o), argv_(std::move(argv)), out_(out) {
        out_dir_ = o.out_dir;
        if (out_dir_.empty()) {
            const char* env = std::getenv(out_dir_env);
            out_dir_ = env && *env ? env : ".";
        }
        for (const auto& e : o.emit) {
            std::stringstream ss(e);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item != "json" && item != "dot")
                    throw Error(ErrorKind::invalid_argument, "--emit accepts json and dot, not '" + item + "'");
                formats_.insert(item);
            }
        }
    }

    std::ostream& out() { return out_; }
    const Options& opt() const { return opt_; }

    /// Prints unless the JSON report goes to stdout.
    template <class... T>
    void say(const T&... parts) {
        if (opt_.json_stdout) return;
        (out_ << ... << parts);
        out_ << '\n';
    }

    void artifact(const std::string& name, const Dfa& d) {
        if (formats_.empty()) return;
        std::filesystem::create_directories(out_dir_);
        if (formats_.count("json")) write(name + ".json", dfa_to_json(d).dump(2) + "\n");
        if (formats_.count("dot")) write(name + ".dot", dfa_to_dot(d, name));
    }

    void finish(const std::string& verb, json result) {
        json report;
        report["tool"] = "starfree";
        report["version"] = version;
        report["command"] = argv_;
        report["result"] = std::move(result);
        report["artifacts"] = artifacts_;
        report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        if (formats_.count("json")) {
            std::filesystem::create_directories(out_dir_);
            write(verb + "-report.json", report.dump(2) + "\n");
            report["artifacts"] = artifacts_;
        }
        if (opt_.json_stdout) out_ << report.dump(2) << '\n';
    }

private:
    void write(const std::string& file, const std::string& text) {
        const auto path = out_dir_ / file;
        std::ofstream f(path);
        if (!f) throw Error(ErrorKind::invalid_argument, "cannot write " + path.string());
        f << text;
        artifacts_.push_back(path.string());
    }

    const Options& opt_;
    std::vector<std::string> argv_;
    std::ostream& out_;
    std::filesystem::path out_dir_;
    std::set<std::string> formats_;
    json artifacts_ = json::array();
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------
// Input helpers

inline Dfa load_dfa(const std::string& source) {
    if (source.empty()) throw Error(ErrorKind::invalid_argument, "an automaton is required (--dfa FILE or inline JSON)");
    try {
        if (source.front() == '{') return dfa_from_json(json::parse(source));
        return dfa_from_json(json::parse(read_text_file(source)));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::syntax_error, source + ": " + e.what());
    }
}

inline Natural parse_natural(const std::string& text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw Error(ErrorKind::syntax_error, "expected a natural number, got '" + text + "'");
    return Natural(text);
}

inline const char* yes(bool b) { return b ? "true" : "false"; }

inline std::string word_text(const std::vector<int>& digits) { return digits.empty() ? "ε" : format_digits(digits); }

inline json verdict_json(const AperiodicityReport& a, const DefinitenessReport& d) {
    return {{"aperiodicity", aperiodicity_to_json(a)}, {"definiteness", definiteness_to_json(d)}};
}

inline std::string witness_text(const AperiodicityReport& a) {
    if (!a.witness) return "";
    std::string cyc;
    for (auto q : a.witness->cycle) cyc += (cyc.empty() ? "" : " ") + std::to_string(q);
    return " witness=" + format_word(a.minimal.alphabet(), a.witness->word) + " cycle=(" + cyc + ")";
}

/// Re-checks that the serialized witness reproduces its permutation.
inline void revalidate(const Dfa& d, const AperiodicityReport& a) {
    if (!revalidate_witness(d, aperiodicity_to_json(a)))
        throw Error(ErrorKind::verdict_mismatch, "reported witness does not re-validate");
}

inline SetSpec random_up_spec(std::mt19937& rng) {
    std::uniform_int_distribution<std::uint64_t> period(1, 12), residue(0, 11), small(0, 20);
    UltimatelyPeriodic up;
    up.period = period(rng);
    for (std::uint64_t i = 0, m = 1 + rng() % up.period; i < m; ++i) up.residues.insert(residue(rng) % up.period);
    up.threshold = small(rng);
    for (std::uint64_t n = 0; n < up.threshold; ++n)
        if (rng() % 4 == 0) (rng() % 2 ? up.include : up.exclude).insert(n);
    return up;
}

// ---------------------------------------------------------------------------
// Verbs

inline void cmd_repr(Session& s) {
    const auto& o = s.opt();
    const NumerationSystem u = parse_system(o.system);
    json r{{"system", u.describe()}};
    if (!o.value.empty()) {
        const auto digits = parse_digit_string(o.value);
        const Natural v = value(u, digits);
        r["word"] = format_digits(digits);
        r["value"] = v.str();
        s.say(v.str());
    }
    if (!o.n.empty()) {
        const Natural n = parse_natural(o.n);
        const Representation rep = u.is_greedy() ? greedy_repr(u, n) : bijective_repr(u.radix(), n);
        r["n"] = n.str();
        r["representation"] = rep.to_string();
        s.say(word_text(rep.digits));
    }
    if (o.value.empty() && o.n.empty()) throw Error(ErrorKind::invalid_argument, "repr needs --n or --value");
    s.finish("repr", std::move(r));
}

inline void cmd_build(Session& s) {
    const auto& o = s.opt();
    const SetSpec spec = parse_spec(o.spec);
    const NumerationSystem u = parse_system(o.system);
    const Dfa d = recognizer(spec, u);
    s.artifact("recognizer", d);
    s.say("system: ", u.describe());
    s.say("states: ", d.size());
    s.finish("build", {{"system", u.describe()}, {"states", d.size()}, {"automaton", dfa_to_json(d)}});
}

inline void check_expectations(const std::vector<std::string>& expect, bool aperiodic, bool definite) {
    for (const auto& e : expect) {
        bool want = e.rfind("not-", 0) != 0;
        std::string what = want ? e : e.substr(4);
        bool got;
        if (what == "aperiodic") got = aperiodic;
        else if (what == "definite") got = definite;
        else throw Error(ErrorKind::invalid_argument, "unknown expectation '" + e + "'");
        if (got != want) throw Error(ErrorKind::verdict_mismatch, "expected " + e);
    }
}

inline void cmd_analyze(Session& s) {
    const auto& o = s.opt();
    Dfa d;
    if (!o.dfa.empty()) d = load_dfa(o.dfa);
    else if (!o.spec.empty()) d = recognizer(parse_spec(o.spec), parse_system(o.system));
    else throw Error(ErrorKind::invalid_argument, "analyze needs --dfa or --spec");
    const auto a = is_aperiodic(d, o.monoid_cap);
    const auto def = is_definite(d);
    revalidate(d, a);
    s.artifact("analyzed", a.minimal);
    s.say("states: ", a.minimal.size());
    s.say("aperiodic: ", a.aperiodic ? "true" : "false", witness_text(a));
    if (a.index) s.say("index: ", *a.index);
    s.say("monoid: ", a.monoid_size);
    s.say("definite: ", def.definite ? "true" : "false");
    if (def.horizon) s.say("horizon: ", *def.horizon);
    s.finish("analyze", verdict_json(a, def));
    check_expectations(o.expect, a.aperiodic, def.definite);
}

inline void cmd_classify(Session& s) {
    const auto& o = s.opt();
    const SetSpec spec = parse_spec(o.spec);
    const Category c = classify(spec, o.probes, o.horizon);
    json r{{"category", c.tag}, {"exhaustive", c.exhaustive}, {"inferred", c.inferred}};
    s.say("category: ", c.tag);
    if (c.rad) {
        r["P"] = c.rad->p;
        r["alpha"] = c.rad->alpha;
        s.say("P: ", c.rad->p, " alpha: ", c.rad->alpha);
    }
    if (c.normalized) {
        const auto& up = *c.normalized;
        r["period"] = up.period;
        r["residues"] = up.residues;
        r["include"] = up.include;
        r["exclude"] = up.exclude;
        r["threshold"] = up.threshold;
    }
    json ev = json::array();
    for (const auto& e : c.evidence) {
        const std::string name = e.base ? "base " + std::to_string(e.base) : e.system;
        const AperiodicityReport a = is_aperiodic(e.recognizer, o.monoid_cap);
        s.say(name, ": aperiodic=", e.aperiodic ? "true" : "false", " definite=", e.definite ? "true" : "false",
              e.missing_prime ? " missing-prime" : "", witness_text(a));
        s.artifact("classify-" + (e.base ? std::to_string(e.base) : std::string("native")), e.recognizer);
        ev.push_back({{"system", e.system},
                      {"aperiodic", e.aperiodic},
                      {"definite", e.definite},
                      {"missing_prime", e.missing_prime},
                      {"aperiodicity", aperiodicity_to_json(a)}});
    }
    r["evidence"] = std::move(ev);
    r["skipped_bases"] = c.skipped_bases;
    r["notes"] = c.notes;
    if (!c.skipped_bases.empty()) {
        std::string sk;
        for (int b : c.skipped_bases) sk += (sk.empty() ? "" : ",") + std::to_string(b);
        s.say("skipped: ", sk);
    }
    for (const auto& n : c.notes) s.say("note: ", n);
    if (!c.exhaustive) s.say("note: evidence covers the probed bases only");
    s.finish("classify", std::move(r));
    if (o.expect_tag && o.expect_tag != c.tag)
        throw Error(ErrorKind::verdict_mismatch, "expected category " + std::to_string(o.expect_tag));
}

inline json grouping_json(const GroupingReport& g) {
    return {{"p", g.p},
            {"k", g.k},
            {"states_before_minimization", g.grouped_states_before_minimization},
            {"source", aperiodicity_to_json(is_aperiodic(g.source))},
            {"grouped", aperiodicity_to_json(is_aperiodic(g.grouped))},
            {"samples", g.samples},
            {"agreement", g.agreement},
            {"first_disagreement", g.first_disagreement ? json(g.first_disagreement->str()) : json(nullptr)}};
}

inline void cmd_group(Session& s) {
    const auto& o = s.opt();
    if (o.random) {
        std::mt19937 rng(o.seed);
        json runs = json::array();
        std::size_t failures = 0;
        for (std::size_t i = 0; i < o.random; ++i) {
            const SetSpec spec = random_up_spec(rng);
            const Dfa src = recognizer(spec, NumerationSystem::positional(o.p));
            const auto g = grouping_preservation_check(src, o.k, o.samples);
            failures += g.agreement != g.samples;
            s.say("#", i, ": source=", yes(g.source_aperiodic), " grouped=", yes(g.grouped_aperiodic), " agreement=", g.agreement,
                  "/", g.samples);
            runs.push_back(grouping_json(g));
        }
        s.finish("group", {{"seed", o.seed}, {"runs", std::move(runs)}});
        if (failures) throw Error(ErrorKind::verdict_mismatch, "membership disagreement in the grouping battery");
        return;
    }
    const auto g = grouping_preservation_check(load_dfa(o.dfa), o.k, o.samples);
    s.artifact("grouped", g.grouped);
    s.say("source aperiodic: ", g.source_aperiodic ? "true" : "false");
    s.say("grouped aperiodic: ", g.grouped_aperiodic ? "true" : "false");
    s.say("grouped states: ", g.grouped.size(), " (", g.grouped_states_before_minimization, " before minimization)");
    s.say("agreement: ", g.agreement, "/", g.samples);
    json r = grouping_json(g);
    r["automaton"] = dfa_to_json(g.grouped);
    s.finish("group", std::move(r));
    if (g.agreement != g.samples) throw Error(ErrorKind::verdict_mismatch, "membership disagreement after grouping");
}

inline void cmd_expand(Session& s) {
    const auto& o = s.opt();
    const Dfa src = load_dfa(o.dfa);
    const Dfa x = expand_dfa(src, o.p);
    const auto a_src = is_aperiodic(src, o.monoid_cap);
    const auto a_x = is_aperiodic(x, o.monoid_cap);
    revalidate(x, a_x);
    const bool discrepancy = a_src.aperiodic && !a_x.aperiodic;
    s.artifact("expanded", x);
    s.say("source aperiodic: ", a_src.aperiodic ? "true" : "false");
    s.say("expanded aperiodic: ", a_x.aperiodic ? "true" : "false", witness_text(a_x));
    if (discrepancy)
        s.say("discrepancy: aperiodic in base ", src.letters(), " but not in base ", o.p,
              "; the p^k => p direction does not hold for this language");
    json r{{"p", o.p},
           {"source", aperiodicity_to_json(a_src)},
           {"expanded", aperiodicity_to_json(a_x)},
           {"discrepancy", discrepancy},
           {"automaton", dfa_to_json(x)}};
    s.finish("expand", std::move(r));
}

inline void cmd_logic_eval(Session& s) {
    const auto& o = s.opt();
    bool result;
    json r{{"formula", o.formula}};
    if (!o.n.empty()) {
        const auto psi = logic::parse_num(o.formula);
        const NumerationSystem u = parse_system(o.system);
        const Natural n = parse_natural(o.n);
        result = logic::eval_num(psi, n, u, o.slack);
        r["n"] = n.str();
        r["system"] = u.describe();
    } else {
        const auto phi = logic::parse_sf(o.formula);
        const auto digits = parse_digit_string(o.word);
        result = logic::eval_sf(phi, logic::word_model(digits));
        r["word"] = o.word;
    }
    r["value"] = result;
    s.say(result ? "true" : "false");
    s.finish("logic-eval", std::move(r));
}

inline Alphabet logic_alphabet(const Options& o) {
    if (o.alphabet) return Alphabet::digits(0, o.alphabet - 1);
    return parse_system(o.system).digit_alphabet();
}

inline void cmd_logic_compile(Session& s) {
    const auto& o = s.opt();
    const auto phi = logic::parse_sf(o.formula);
    const Dfa d = logic::compile_sf(phi, logic_alphabet(o));
    const auto a = is_aperiodic(d, o.monoid_cap);
    s.artifact("compiled", d);
    s.say("states: ", d.size());
    s.say("aperiodic: ", a.aperiodic ? "true" : "false");
    if (auto w = shortest_accepted(d)) s.say("shortest: ", word_text(digits_from_word(d.alphabet(), *w)));
    s.finish("logic-compile", {{"formula", logic::print(phi)}, {"aperiodicity", aperiodicity_to_json(a)},
                               {"automaton", dfa_to_json(d)}});
}

inline void cmd_logic_translate(Session& s) {
    const auto& o = s.opt();
    logic::FormulaPtr out;
    if (o.to == "num") out = logic::sf_to_num(logic::parse_sf(o.formula), parse_system(o.system));
    else if (o.to == "sf") out = logic::num_to_sf(logic::parse_num(o.formula));
    else throw Error(ErrorKind::invalid_argument, "--to must be num or sf");
    s.say(logic::print(out));
    s.finish("logic-translate", {{"input", o.formula}, {"to", o.to}, {"output", logic::print(out)}});
}

inline void cmd_logic_define_set(Session& s) {
    const auto& o = s.opt();
    const NumerationSystem u = parse_system(o.system);
    auto psi = logic::parse_num(o.formula);
    if (o.inject) psi = logic::inject_canonical(psi, u);
    const auto members = logic::define_set(psi, u, o.horizon, o.slack);
    json arr = json::array();
    std::string line;
    for (const auto& m : members) {
        arr.push_back(m.str());
        line += (line.empty() ? "" : " ") + m.str();
    }
    s.say(line);
    s.finish("logic-define-set",
             {{"formula", logic::print(psi)}, {"system", u.describe()}, {"horizon", o.horizon}, {"members", arr}});
}

inline void cmd_padic_convert(Session& s, bool to_ary_direction) {
    const auto& o = s.opt();
    const Dfa m = load_dfa(o.dfa);
    const Dfa out = to_ary_direction ? to_ary(m, o.p) : to_adic(m, o.p);
    const auto a_in = is_aperiodic(m, o.monoid_cap), a_out = is_aperiodic(out, o.monoid_cap);
    s.artifact(to_ary_direction ? "ary" : "adic", out);
    s.say("states: ", out.size());
    s.say("input aperiodic: ", a_in.aperiodic ? "true" : "false");
    s.say("output aperiodic: ", a_out.aperiodic ? "true" : "false", witness_text(a_out));
    if (auto w = shortest_accepted(out)) s.say("shortest: ", word_text(digits_from_word(out.alphabet(), *w)));
    s.finish(to_ary_direction ? "padic-to-ary" : "padic-to-adic",
             {{"p", o.p}, {"input", aperiodicity_to_json(a_in)}, {"output", aperiodicity_to_json(a_out)},
              {"automaton", dfa_to_json(out)}});
}

inline json transfer_json(const TransferReport& t) {
    return {{"p", t.p},
            {"ary", aperiodicity_to_json(t.ary_verdict)},
            {"adic", aperiodicity_to_json(t.adic_verdict)},
            {"round_trip", t.round_trip}};
}

inline void cmd_padic_check(Session& s) {
    const auto& o = s.opt();
    if (o.random) {
        std::mt19937 rng(o.seed);
        json runs = json::array();
        for (std::size_t i = 0; i < o.random; ++i) {
            const auto t = transfer_check(random_up_spec(rng), o.p);
            s.say("#", i, ": ary=", yes(t.ary_verdict.aperiodic), " adic=", yes(t.adic_verdict.aperiodic));
            runs.push_back(transfer_json(t));
        }
        s.finish("padic-check", {{"seed", o.seed}, {"runs", std::move(runs)}});
        return;
    }
    const auto t = transfer_check(parse_spec(o.spec), o.p);
    s.artifact("ary", t.ary);
    s.artifact("adic", t.adic);
    s.say("p-ary aperiodic: ", t.ary_verdict.aperiodic ? "true" : "false");
    s.say("p-adic aperiodic: ", t.adic_verdict.aperiodic ? "true" : "false");
    s.say("round trip: ", t.round_trip ? "ok" : "failed");
    s.finish("padic-check", transfer_json(t));
}

// ---------------------------------------------------------------------------

inline int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::verdict_mismatch:
    case ErrorKind::preservation_violated:
    case ErrorKind::translation_mismatch:
    case ErrorKind::not_aperiodic: return 2;
    default: return 1;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"Star-free sets of integers: automata, numeration systems, logic and base change"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--emit", o.emit, "Artifact formats to write: json,dot");
    app.add_option("--out", o.out_dir, std::string("Output directory (default $") + out_dir_env + " or .)");
    app.add_flag("--json", o.json_stdout, "Print the JSON report on stdout instead of text");
    app.add_option("--monoid-cap", o.monoid_cap, "Transition monoid size limit");

    auto system_opt = [&](CLI::App* c) { c->add_option("--system", o.system, "Numeration system (base:K, fib, ...)"); };

    auto* repr = app.add_subcommand("repr", "Greedy or bijective representation of n, or the value of a word");
    system_opt(repr);
    repr->add_option("--n", o.n, "Integer to represent");
    repr->add_option("--value", o.value, "Digit word to evaluate");

    auto* build = app.add_subcommand("build", "Compile a set spec to 0*rho_U(X)");
    build->add_option("--spec", o.spec, "Spec: up:sN+r, up:finite:a,b, JSON text or file")->required();
    system_opt(build);

    auto* analyze = app.add_subcommand("analyze", "Aperiodicity and definiteness with witnesses");
    analyze->add_option("--dfa", o.dfa, "Automaton JSON file or inline JSON");
    analyze->add_option("--spec", o.spec, "Set spec instead of an automaton");
    system_opt(analyze);
    analyze->add_option("--expect", o.expect, "Assert verdicts: aperiodic, not-aperiodic, definite, not-definite");

    auto* cls = app.add_subcommand("classify", "Four-way classification of a set");
    cls->add_option("--spec", o.spec, "Set spec")->required();
    cls->add_option("--probes", o.probes, "Probe bases")->delimiter(',');
    cls->add_option("--horizon", o.horizon, "Sampling horizon for non-periodic specs")->check(CLI::PositiveNumber);
    cls->add_option("--expect-tag", o.expect_tag, "Assert the category");

    auto* grp = app.add_subcommand("group", "Group k base-p digits into one base-p^k letter");
    grp->add_option("--dfa", o.dfa, "Automaton over {0..p-1}");
    grp->add_option("--k", o.k, "Block length")->check(CLI::PositiveNumber);
    grp->add_option("--samples", o.samples, "Membership comparison points");
    grp->add_option("--random", o.random, "Run a battery of this many random ultimately periodic sets");
    grp->add_option("--p", o.p, "Base for the random battery");
    grp->add_option("--seed", o.seed, "Seed for the random battery");

    auto* exp = app.add_subcommand("expand", "Replace base-p^k letters by base-p blocks");
    exp->add_option("--dfa", o.dfa, "Automaton over {0..p^k-1}")->required();
    exp->add_option("--p", o.p, "Target base")->required();

    auto* logic_cmd = app.add_subcommand("logic", "Formulas on words and on integers");
    logic_cmd->require_subcommand(1);
    auto* leval = logic_cmd->add_subcommand("eval", "Evaluate on a word (--word) or an integer (--n)");
    leval->add_option("--formula", o.formula)->required();
    leval->add_option("--word", o.word, "Digits, most significant first");
    leval->add_option("--n", o.n, "Integer for an integer formula");
    leval->add_option("--slack", o.slack, "Extra window for the bound b");
    system_opt(leval);
    auto* lcomp = logic_cmd->add_subcommand("compile", "Compile a sentence to a minimal automaton");
    lcomp->add_option("--formula", o.formula)->required();
    lcomp->add_option("--alphabet", o.alphabet, "Alphabet size (digits 0..K-1); default from --system");
    system_opt(lcomp);
    auto* ltr = logic_cmd->add_subcommand("translate", "Translate between word and integer formulas");
    ltr->add_option("--formula", o.formula)->required();
    ltr->add_option("--to", o.to, "num or sf");
    system_opt(ltr);
    auto* ldef = logic_cmd->add_subcommand("define-set", "Members up to a horizon");
    ldef->add_option("--formula", o.formula)->required();
    ldef->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
    ldef->add_option("--slack", o.slack);
    ldef->add_flag("--inject-canonical", o.inject, "Conjoin the canonical-representation sentence");
    system_opt(ldef);

    auto* padic_cmd = app.add_subcommand("padic", "Bijective versus p-ary representations");
    padic_cmd->require_subcommand(1);
    auto* pary = padic_cmd->add_subcommand("to-ary", "Bijective words to 0*rho_p");
    pary->add_option("--dfa", o.dfa)->required();
    pary->add_option("--p", o.p);
    auto* padic_to = padic_cmd->add_subcommand("to-adic", "0*rho_p words to bijective words");
    padic_to->add_option("--dfa", o.dfa)->required();
    padic_to->add_option("--p", o.p);
    auto* pcheck = padic_cmd->add_subcommand("check", "Compare star-freeness of both languages of a set");
    pcheck->add_option("--spec", o.spec);
    pcheck->add_option("--p", o.p);
    pcheck->add_option("--random", o.random, "Run a battery of this many random ultimately periodic sets");
    pcheck->add_option("--seed", o.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        Session s(o, args, out);
        if (*repr) cmd_repr(s);
        else if (*build) cmd_build(s);
        else if (*analyze) cmd_analyze(s);
        else if (*cls) cmd_classify(s);
        else if (*grp) cmd_group(s);
        else if (*exp) cmd_expand(s);
        else if (*leval) cmd_logic_eval(s);
        else if (*lcomp) cmd_logic_compile(s);
        else if (*ltr) cmd_logic_translate(s);
        else if (*ldef) cmd_logic_define_set(s);
        else if (*pary) cmd_padic_convert(s, true);
        else if (*padic_to) cmd_padic_convert(s, false);
        else if (*pcheck) {
            if (o.spec.empty() && !o.random) throw Error(ErrorKind::invalid_argument, "padic check needs --spec or --random");
            cmd_padic_check(s);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace starfree::cli
