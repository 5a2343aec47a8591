#pragma once

// Descriptions of sets of integers, their recognizers in a numeration
// system, star-freeness verdicts and the four-way classification.

#include <cstdint>
#include <filesystem>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "starfree/aperiodic.hpp"
#include "starfree/basechange.hpp"
#include "starfree/dfa.hpp"
#include "starfree/logic.hpp"
#include "starfree/numeration.hpp"
#include "starfree/serialize.hpp"

namespace starfree {

// ---------------------------------------------------------------------------
// Spec types

/// X = ({n : n mod period ∈ residues} ∪ include) \ exclude, exceptions below
/// the threshold.
struct UltimatelyPeriodic {
    std::set<std::uint64_t> include;
    std::set<std::uint64_t> exclude;
    std::uint64_t threshold = 0;
    std::uint64_t period = 1;
    std::set<std::uint64_t> residues;

    void validate() const {
        if (period < 1) throw Error(ErrorKind::invalid_argument, "period must be at least 1");
        for (auto r : residues)
            if (r >= period) throw Error(ErrorKind::invalid_argument, "residue " + std::to_string(r) + " >= period");
        for (const auto* s : {&include, &exclude})
            for (auto n : *s)
                if (n >= threshold)
                    throw Error(ErrorKind::invalid_argument,
                                "exception " + std::to_string(n) + " is not below the threshold " +
                                    std::to_string(threshold));
        for (auto n : include)
            if (exclude.count(n)) throw Error(ErrorKind::invalid_argument, "exception listed as both included and excluded");
    }

    bool contains(std::uint64_t n) const {
        if (include.count(n)) return true;
        if (exclude.count(n)) return false;
        return residues.count(n % period) > 0;
    }

    bool is_finite() const { return residues.empty(); }
    bool is_cofinite() const { return residues.size() == period; }

    /// Same set with the least period and without redundant exceptions.
    UltimatelyPeriodic normalized() const {
        validate();
        UltimatelyPeriodic out;
        out.period = period;
        for (std::uint64_t d = 1; d <= period; ++d) {
            if (period % d) continue;
            bool ok = true;
            for (std::uint64_t r = 0; r < period && ok; ++r) ok = residues.count(r) == residues.count(r % d);
            if (ok) {
                out.period = d;
                break;
            }
        }
        for (auto r : residues) out.residues.insert(r % out.period);
        for (auto n : include)
            if (!out.residues.count(n % out.period)) out.include.insert(n);
        for (auto n : exclude)
            if (out.residues.count(n % out.period)) out.exclude.insert(n);
        out.threshold = 0;
        for (const auto* s : {&out.include, &out.exclude})
            if (!s->empty()) out.threshold = std::max(out.threshold, *s->rbegin() + 1);
        return out;
    }

    /// r + sℕ
    static UltimatelyPeriodic progression(std::uint64_t r, std::uint64_t s) {
        if (s < 1) throw Error(ErrorKind::invalid_argument, "period must be at least 1");
        UltimatelyPeriodic up;
        up.period = s;
        up.residues = {r % s};
        for (std::uint64_t n = r % s; n < r; n += s) up.exclude.insert(n);
        up.threshold = up.exclude.empty() ? 0 : r;
        return up;
    }

    static UltimatelyPeriodic finite(std::set<std::uint64_t> members) {
        UltimatelyPeriodic up;
        up.include = std::move(members);
        up.threshold = up.include.empty() ? 0 : *up.include.rbegin() + 1;
        return up;
    }
};

struct ExprNode {
    enum class Kind { words, union_, intersection, complement, concat };
    Kind kind = Kind::words;
    std::vector<std::vector<int>> words; // leaf: finite set of digit words
    std::vector<ExprNode> children;
};

struct ExprSpec {
    Alphabet alphabet;
    ExprNode tree;
    NumerationSystem system;
};

/// An automaton recognizing representations of X (leading zeros optional).
struct ExplicitDfa {
    NumerationSystem system;
    Dfa dfa;
};

struct FormulaSpec {
    logic::FormulaPtr psi;
    NumerationSystem system;
    std::optional<std::size_t> slack;
};

using SetSpec = std::variant<UltimatelyPeriodic, ExplicitDfa, ExprSpec, FormulaSpec>;

// ---------------------------------------------------------------------------
// Recognizers

/// 0*ρ_U(n)
inline Dfa padded_representation(const NumerationSystem& u, const Natural& n) {
    const Alphabet sigma = u.digit_alphabet();
    return minimal(leading_zero_closure(finite_language(sigma, {greedy_repr(u, n).word(sigma)})));
}

/// Automaton for 0*ρ_U(X).
inline Dfa up_to_dfa(const UltimatelyPeriodic& spec, const NumerationSystem& u) {
    require_greedy(u);
    spec.validate();
    const Alphabet sigma = u.digit_alphabet();
    Dfa out = empty_language(sigma);
    if (spec.is_cofinite()) {
        out = canonical_dfa(u);
    } else {
        for (auto r : spec.residues)
            out = unite(out, residue_dfa(u, static_cast<long long>(spec.period), static_cast<long long>(r)));
    }
    for (auto n : spec.include)
        if (!spec.residues.count(n % spec.period)) out = unite(out, padded_representation(u, n));
    for (auto n : spec.exclude)
        if (spec.residues.count(n % spec.period)) out = subtract(out, padded_representation(u, n));
    return minimal(out);
}

inline Dfa expr_node_to_dfa(const ExprNode& e, const Alphabet& sigma) {
    switch (e.kind) {
    case ExprNode::Kind::words: {
        std::vector<Word> ws;
        for (const auto& w : e.words) ws.push_back(word_from_digits(sigma, w));
        return finite_language(sigma, ws);
    }
    case ExprNode::Kind::complement: return complement(expr_node_to_dfa(e.children.at(0), sigma));
    default: break;
    }
    if (e.children.empty()) throw Error(ErrorKind::invalid_argument, "operator node without operands");
    Dfa acc = expr_node_to_dfa(e.children[0], sigma);
    for (std::size_t i = 1; i < e.children.size(); ++i) {
        Dfa next = expr_node_to_dfa(e.children[i], sigma);
        switch (e.kind) {
        case ExprNode::Kind::union_: acc = unite(acc, next); break;
        case ExprNode::Kind::intersection: acc = intersect(acc, next); break;
        default: acc = minimal(concat(acc, next));
        }
    }
    return acc;
}

/// Structural compilation; the result is checked to be aperiodic.
inline Dfa expr_to_dfa(const ExprNode& e, const Alphabet& sigma) {
    Dfa d = minimal(expr_node_to_dfa(e, sigma));
    if (!is_aperiodic(d).aperiodic)
        throw Error(ErrorKind::not_aperiodic, "star-free expression compiled to a non-aperiodic automaton");
    return d;
}

inline Dfa expr_to_dfa(const ExprSpec& e) { return expr_to_dfa(e.tree, e.alphabet); }

struct Radical {
    std::uint64_t p = 1;     // product of the distinct primes of s
    std::uint64_t alpha = 0; // largest exponent
};

inline Radical radical(std::uint64_t s) {
    if (s < 2) throw Error(ErrorKind::invalid_argument, "radical needs s >= 2");
    Radical r;
    for (std::uint64_t q = 2; q * q <= s; ++q) {
        if (s % q) continue;
        std::uint64_t e = 0;
        while (s % q == 0) {
            s /= q;
            ++e;
        }
        r.p *= q;
        r.alpha = std::max(r.alpha, e);
    }
    if (s > 1) {
        r.p *= s;
        r.alpha = std::max<std::uint64_t>(r.alpha, 1);
    }
    return r;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t s) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= s; ++q)
        if (s % q == 0) {
            out.push_back(q);
            while (s % q == 0) s /= q;
        }
    if (s > 1) out.push_back(s);
    return out;
}

namespace detail {

inline std::optional<int> exponent_of(int base, int power) {
    if (base < 2) return std::nullopt;
    int k = 0;
    long long x = 1;
    while (x < power) {
        x *= base;
        ++k;
    }
    if (x == power) return k;
    return std::nullopt;
}

/// Moves an automaton for 0*ρ_from(X) to 0*ρ_to(X) when one base is a power
/// of the other.
inline Dfa convert_base(const Dfa& m, const NumerationSystem& from, const NumerationSystem& to) {
    auto a = from.integer_base(), b = to.integer_base();
    if (a && b) {
        if (*a == *b) return m;
        if (auto k = exponent_of(*a, *b)) return group_dfa(m, *k);
        if (auto k = exponent_of(*b, *a)) return expand_dfa(m, *b);
    }
    throw Error(ErrorKind::invalid_argument,
                "cannot move a recognizer from " + from.describe() + " to " + to.describe() +
                    " (only between powers of one base)");
}

/// Normalises an arbitrary recognizer of representations to 0*ρ_U(X).
inline Dfa normalize_recognizer(const Dfa& d, const NumerationSystem& u) {
    require_greedy(u);
    if (!(d.alphabet() == u.digit_alphabet()))
        throw Error(ErrorKind::alphabet_mismatch, "recognizer alphabet does not match the digits of " + u.describe());
    return minimal(intersect(zero_normalize(d), canonical_dfa(u)));
}

} // namespace detail

inline const NumerationSystem* native_system(const SetSpec& spec) {
    if (auto* e = std::get_if<ExplicitDfa>(&spec)) return &e->system;
    if (auto* e = std::get_if<ExprSpec>(&spec)) return &e->system;
    if (auto* f = std::get_if<FormulaSpec>(&spec)) return &f->system;
    return nullptr;
}

/// The spec's recognizer in its own system (UP specs have none).
inline Dfa native_recognizer(const SetSpec& spec) {
    if (auto* e = std::get_if<ExplicitDfa>(&spec)) return detail::normalize_recognizer(e->dfa, e->system);
    if (auto* e = std::get_if<ExprSpec>(&spec)) return detail::normalize_recognizer(expr_to_dfa(*e), e->system);
    if (auto* f = std::get_if<FormulaSpec>(&spec)) {
        Dfa words = logic::compile_sf(logic::num_to_sf(f->psi), f->system.digit_alphabet());
        return detail::normalize_recognizer(words, f->system);
    }
    throw Error(ErrorKind::invalid_argument, "ultimately periodic specs have no native system");
}

/// 0*ρ_U(X)
inline Dfa recognizer(const SetSpec& spec, const NumerationSystem& u) {
    if (auto* up = std::get_if<UltimatelyPeriodic>(&spec)) return up_to_dfa(*up, u);
    const NumerationSystem& native = *native_system(spec);
    Dfa d = native_recognizer(spec);
    if (native.describe() == u.describe()) return d;
    return detail::convert_base(d, native, u);
}

struct BaseReport {
    std::string system;
    Dfa recognizer;
    AperiodicityReport aperiodicity;
    DefinitenessReport definiteness;
};

inline BaseReport star_free_in_base(const SetSpec& spec, const NumerationSystem& u,
                                    std::size_t monoid_cap = default_monoid_cap) {
    BaseReport r{u.describe(), recognizer(spec, u), {}, {}};
    r.aperiodicity = is_aperiodic(r.recognizer, monoid_cap);
    r.definiteness = is_definite(r.recognizer);
    return r;
}

/// Membership through the spec's own semantics (no automaton for UP specs).
inline bool spec_contains(const SetSpec& spec, std::uint64_t n) {
    if (auto* up = std::get_if<UltimatelyPeriodic>(&spec)) return up->contains(n);
    const NumerationSystem& u = *native_system(spec);
    if (auto* f = std::get_if<FormulaSpec>(&spec)) return logic::eval_num(f->psi, n, u, f->slack);
    Dfa d = native_recognizer(spec);
    return d.accepts(greedy_repr(u, n).word(d.alphabet()));
}

// ---------------------------------------------------------------------------
// Classification

struct Evidence {
    std::string system;
    int base = 0;
    bool aperiodic = false;
    bool definite = false;
    std::optional<PermutationWitness> witness;
    bool missing_prime = false; // some prime of the period does not divide the base
    Dfa recognizer;
};

struct Category {
    int tag = 0; // 1 finite/cofinite, 2 UP with period > 1, 3 star-free not UP, 4 never star-free
    std::optional<UltimatelyPeriodic> normalized;
    bool inferred = false; // UP parameters guessed from membership up to `horizon`
    std::optional<Radical> rad;
    std::vector<Evidence> evidence;
    std::vector<int> skipped_bases;
    bool exhaustive = false;
    std::uint64_t horizon = 0;
    std::vector<std::string> notes;
};

inline std::vector<int> default_probe_bases() { return {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}; }

/// Looks for the least period s <= max_period such that the sequence is
/// s-periodic from some point within the first quarter of the horizon.
inline std::optional<UltimatelyPeriodic> infer_up(const std::vector<bool>& bits, std::uint64_t max_period = 256) {
    const std::uint64_t n = bits.size();
    for (std::uint64_t s = 1; s <= max_period && 4 * s < n; ++s) {
        std::uint64_t start = n - s;
        while (start > 0 && bits[start - 1] == bits[start - 1 + s]) --start;
        if (start > n / 4) continue;
        UltimatelyPeriodic up;
        up.period = s;
        for (std::uint64_t i = start; i < start + s; ++i)
            if (bits[i]) up.residues.insert(i % s);
        for (std::uint64_t i = 0; i < start; ++i)
            if (bits[i] != (up.residues.count(i % s) > 0)) (bits[i] ? up.include : up.exclude).insert(i);
        up.threshold = start;
        return up.normalized();
    }
    return std::nullopt;
}

inline Evidence probe(const SetSpec& spec, int base, const std::vector<std::uint64_t>& primes) {
    const auto u = NumerationSystem::positional(base);
    BaseReport r = star_free_in_base(spec, u);
    Evidence e{u.describe(), base, r.aperiodicity.aperiodic, r.definiteness.definite, r.aperiodicity.witness, false,
               r.recognizer};
    for (auto q : primes)
        if (base % q) e.missing_prime = true;
    return e;
}

inline Category classify(const SetSpec& spec, std::vector<int> probes = default_probe_bases(),
                         std::uint64_t horizon = 10'000) {
    for (int b : probes)
        if (b < 2) throw Error(ErrorKind::invalid_argument, "probe bases must be at least 2");
    Category c;
    c.horizon = horizon;

    auto classify_up = [&](const UltimatelyPeriodic& up, const SetSpec& source, bool assert_prop) {
        c.normalized = up;
        std::vector<std::uint64_t> primes;
        std::vector<int> bases = probes;
        if (up.is_finite() || up.is_cofinite()) {
            c.tag = 1;
        } else {
            c.tag = 2;
            c.rad = radical(up.period);
            primes = prime_factors(up.period);
            for (std::uint64_t i : {1, 2})
                if (c.rad->p * i <= 1 << 12) bases.push_back(static_cast<int>(c.rad->p * i));
        }
        std::sort(bases.begin(), bases.end());
        bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
        for (int b : bases) {
            if (!std::holds_alternative<UltimatelyPeriodic>(source)) {
                // recognizers of non-UP specs only move between powers of their base
                auto nb = native_system(source)->integer_base();
                if (!nb || !(detail::exponent_of(*nb, b) || detail::exponent_of(b, *nb))) {
                    c.skipped_bases.push_back(b);
                    continue;
                }
            }
            c.evidence.push_back(probe(source, b, primes));
        }
        if (c.tag == 2 && assert_prop) {
            // the periodic core is definite in base iP; finite exceptions
            // keep aperiodicity but not definiteness (0^j prefixes)
            UltimatelyPeriodic core;
            core.period = up.period;
            core.residues = up.residues;
            for (std::uint64_t i : {1, 2}) {
                const int b = static_cast<int>(c.rad->p * i);
                if (!is_definite(up_to_dfa(core, NumerationSystem::positional(b))).definite)
                    throw Error(ErrorKind::verdict_mismatch,
                                "periodic part not definite in base " + std::to_string(b));
                auto it = std::find_if(c.evidence.begin(), c.evidence.end(), [&](const Evidence& e) { return e.base == b; });
                if (it != c.evidence.end() && !it->aperiodic)
                    throw Error(ErrorKind::verdict_mismatch, "recognizer not aperiodic in base " + std::to_string(b));
            }
        }
    };

    if (auto* up = std::get_if<UltimatelyPeriodic>(&spec)) {
        c.exhaustive = true;
        classify_up(up->normalized(), spec, true);
        return c;
    }

    const NumerationSystem& native = *native_system(spec);
    require_greedy(native);
    const Dfa d = native_recognizer(spec);
    std::vector<bool> bits;
    for (std::uint64_t n = 0; n <= horizon; ++n) bits.push_back(d.accepts(greedy_repr(native, n).word(d.alphabet())));
    if (auto up = infer_up(bits)) {
        c.inferred = true;
        c.notes.push_back("membership up to " + std::to_string(horizon) + " is ultimately periodic; parameters inferred");
        classify_up(*up, spec, false);
        return c;
    }

    c.notes.push_back("not ultimately periodic up to " + std::to_string(horizon));
    if (!native.integer_base()) {
        BaseReport r = star_free_in_base(spec, native);
        c.evidence.push_back(
            {native.describe(), 0, r.aperiodicity.aperiodic, r.definiteness.definite, r.aperiodicity.witness, false, r.recognizer});
    }
    classify_up(UltimatelyPeriodic{}, spec, false); // probe powers of the native base only
    c.normalized.reset();
    const bool any = std::any_of(c.evidence.begin(), c.evidence.end(), [](const Evidence& e) { return e.aperiodic; });
    c.tag = any ? 3 : 4;
    c.notes.push_back(any ? "star-free in a probed base" : "not star-free in any probed base");
    return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline std::vector<int> word_digits_from_json(const json& j) {
    if (j.is_string()) return parse_digit_string(j.get<std::string>());
    return j.get<std::vector<int>>();
}

inline ExprNode expr_from_json(const json& j) {
    if (!j.is_object() || j.size() != 1) throw Error(ErrorKind::syntax_error, "expression node must have one key");
    const auto& [key, value] = *j.items().begin();
    ExprNode n;
    if (key == "words") {
        for (const auto& w : value) n.words.push_back(word_digits_from_json(w));
        return n;
    }
    if (key == "star") throw Error(ErrorKind::syntax_error, "star is not an operation of star-free expressions");
    if (key == "complement") {
        n.kind = ExprNode::Kind::complement;
        n.children.push_back(expr_from_json(value));
        return n;
    }
    if (key == "union") n.kind = ExprNode::Kind::union_;
    else if (key == "intersection") n.kind = ExprNode::Kind::intersection;
    else if (key == "concat") n.kind = ExprNode::Kind::concat;
    else throw Error(ErrorKind::syntax_error, "unknown expression node '" + key + "'");
    for (const auto& c : value) n.children.push_back(expr_from_json(c));
    if (n.children.empty()) throw Error(ErrorKind::syntax_error, "'" + key + "' needs operands");
    return n;
}

inline std::set<std::uint64_t> u64_set(const json& j, const char* key) {
    if (!j.contains(key)) return {};
    return j.at(key).get<std::set<std::uint64_t>>();
}

inline NumerationSystem system_field(const json& j, const NumerationSystem& fallback) {
    if (!j.contains("system")) return fallback;
    const auto& s = j.at("system");
    return s.is_string() ? parse_system(s.get<std::string>()) : system_from_json(s);
}

} // namespace detail

/// Spec JSON: {"type":"up",...} | {"type":"dfa","system","path"|"dfa"} |
/// {"type":"expr","alphabet","tree"} | {"type":"formula","text"}.
/// Relative paths resolve against `base_dir`.
inline SetSpec spec_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "up") {
            UltimatelyPeriodic up;
            if (j.contains("exceptions")) {
                up.include = detail::u64_set(j.at("exceptions"), "include");
                up.exclude = detail::u64_set(j.at("exceptions"), "exclude");
            }
            up.period = j.value("period", std::uint64_t{1});
            up.residues = j.at("residues").get<std::set<std::uint64_t>>();
            std::uint64_t top = 0;
            for (const auto* s : {&up.include, &up.exclude})
                if (!s->empty()) top = std::max(top, *s->rbegin() + 1);
            up.threshold = j.value("threshold", top);
            up.validate();
            return up;
        }
        if (type == "dfa") {
            NumerationSystem u = detail::system_field(j, NumerationSystem::positional(2));
            json automaton;
            if (j.contains("dfa")) automaton = j.at("dfa");
            else automaton = json::parse(read_text_file((base_dir / j.at("path").get<std::string>()).string()));
            return ExplicitDfa{u, dfa_from_json(automaton)};
        }
        if (type == "expr") {
            Alphabet sigma = alphabet_from_json(j.at("alphabet"));
            NumerationSystem fallback = NumerationSystem::positional(std::max<int>(2, static_cast<int>(sigma.size())));
            return ExprSpec{sigma, detail::expr_from_json(j.at("tree")), detail::system_field(j, fallback)};
        }
        if (type == "formula") {
            std::optional<std::size_t> slack;
            if (j.contains("slack")) slack = j.at("slack").get<std::size_t>();
            return FormulaSpec{logic::parse_num(j.at("text").get<std::string>()),
                               detail::system_field(j, NumerationSystem::positional(2)), slack};
        }
        throw Error(ErrorKind::syntax_error, "unknown spec type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::syntax_error, std::string("spec JSON: ") + e.what());
    }
}

/// Shorthand "up:6N", "up:4N+1", "up:1+4N", "up:finite:3,5"; otherwise
/// inline JSON or a path to a JSON file.
inline SetSpec parse_spec(const std::string& text) {
    if (text.rfind("up:", 0) == 0) {
        std::string body = text.substr(3);
        try {
            if (body.rfind("finite:", 0) == 0) {
                std::set<std::uint64_t> members;
                for (long long v : detail::parse_int_list(body.substr(7))) {
                    if (v < 0) throw std::invalid_argument("negative");
                    members.insert(static_cast<std::uint64_t>(v));
                }
                return UltimatelyPeriodic::finite(members);
            }
            std::uint64_t r = 0, s = 0;
            auto plus = body.find('+');
            std::string a = body.substr(0, plus), b = plus == std::string::npos ? "" : body.substr(plus + 1);
            auto period_of = [](const std::string& t) -> std::optional<std::uint64_t> {
                if (t.size() < 2 || t.back() != 'N') return std::nullopt;
                return std::stoull(t.substr(0, t.size() - 1));
            };
            if (auto p = period_of(a)) {
                s = *p;
                if (!b.empty()) r = std::stoull(b);
            } else if (auto p2 = period_of(b)) {
                s = *p2;
                r = std::stoull(a);
            } else {
                throw std::invalid_argument("shape");
            }
            return UltimatelyPeriodic::progression(r, s);
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::syntax_error, "cannot parse '" + text + "' (expected up:sN, up:sN+r or up:finite:a,b)");
        }
    }
    try {
        if (!text.empty() && text.front() == '{') return spec_from_json(json::parse(text));
        std::filesystem::path path(text);
        return spec_from_json(json::parse(read_text_file(text)), path.parent_path());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::syntax_error, std::string("spec JSON: ") + e.what());
    }
}

} // namespace starfree
