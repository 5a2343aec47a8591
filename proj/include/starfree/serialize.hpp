#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "starfree/aperiodic.hpp"
#include "starfree/dfa.hpp"

namespace starfree {

using json = nlohmann::ordered_json;

inline json symbol_to_json(const Symbol& s) {
    if (s.is_digit()) return s.value();
    json arr = json::array();
    for (int p : s.parts) arr.push_back(p);
    return arr;
}

inline Symbol symbol_from_json(const json& j) {
    if (j.is_number_integer()) return Symbol::digit(j.get<int>());
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::syntax_error, "symbol must be an int or an array of ints");
    Symbol s;
    for (const auto& p : j) s.parts.push_back(p.get<int>());
    return s;
}

inline json alphabet_to_json(const Alphabet& a) {
    json arr = json::array();
    for (const auto& s : a.symbols()) arr.push_back(symbol_to_json(s));
    return arr;
}

inline Alphabet alphabet_from_json(const json& j) {
    std::vector<Symbol> symbols;
    for (const auto& s : j) symbols.push_back(symbol_from_json(s));
    return Alphabet(std::move(symbols));
}

/// {"alphabet":[..], "states":N, "initial":i, "accepting":[..],
///  "transitions":[[from,symbolIndex,to],..]}; the automaton is written in
/// canonical numbering so equal inputs give identical bytes.
inline json dfa_to_json(const Dfa& input) {
    const Dfa dfa = canonical(input);
    json j;
    j["alphabet"] = alphabet_to_json(dfa.alphabet());
    j["states"] = dfa.size();
    j["initial"] = dfa.initial();
    j["accepting"] = dfa.accepting_states();
    json tr = json::array();
    for (State q = 0; q < dfa.size(); ++q)
        for (Letter a = 0; a < dfa.letters(); ++a) tr.push_back(json::array({q, a, dfa.next(q, a)}));
    j["transitions"] = std::move(tr);
    return j;
}

/// Missing transitions are completed with a fresh sink.
inline Dfa dfa_from_json(const json& j) {
    try {
        Alphabet alphabet = alphabet_from_json(j.at("alphabet"));
        const std::size_t n = j.at("states").get<std::size_t>();
        const std::size_t k = alphabet.size();
        const State sink = static_cast<State>(n);
        std::vector<State> table((n + 1) * k, sink);
        std::vector<bool> accepting(n + 1, false);
        for (const auto& q : j.at("accepting")) {
            auto s = q.get<std::size_t>();
            if (s >= n) throw Error(ErrorKind::invalid_argument, "accepting state out of range");
            accepting[s] = true;
        }
        for (const auto& t : j.at("transitions")) {
            auto from = t.at(0).get<std::size_t>(), sym = t.at(1).get<std::size_t>(), to = t.at(2).get<std::size_t>();
            if (from >= n || to >= n || sym >= k)
                throw Error(ErrorKind::invalid_argument, "transition out of range");
            table[from * k + sym] = static_cast<State>(to);
        }
        auto initial = j.at("initial").get<std::size_t>();
        if (initial >= n) throw Error(ErrorKind::invalid_argument, "initial state out of range");
        return canonical(Dfa(std::move(alphabet), n + 1, static_cast<State>(initial), std::move(accepting),
                             std::move(table)));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::syntax_error, std::string("automaton JSON: ") + e.what());
    }
}

inline std::string dfa_to_dot(const Dfa& input, const std::string& name = "dfa") {
    const Dfa dfa = canonical(input);
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (State q = 0; q < dfa.size(); ++q)
        out << "  " << q << " [shape=" << (dfa.is_accepting(q) ? "doublecircle" : "circle") << "];\n";
    out << "  __start -> " << dfa.initial() << ";\n";
    for (State q = 0; q < dfa.size(); ++q) {
        // group parallel edges into one label
        std::vector<std::string> labels(dfa.size());
        for (Letter a = 0; a < dfa.letters(); ++a) {
            auto& l = labels[dfa.next(q, a)];
            if (!l.empty()) l += ",";
            l += dfa.alphabet()[a].to_string();
        }
        for (State r = 0; r < dfa.size(); ++r)
            if (!labels[r].empty()) out << "  " << q << " -> " << r << " [label=\"" << labels[r] << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

inline json word_to_json(const Alphabet& alphabet, const Word& w) {
    json arr = json::array();
    for (Letter l : w) arr.push_back(symbol_to_json(alphabet[l]));
    return arr;
}

inline Word word_from_json(const Alphabet& alphabet, const json& j) {
    Word w;
    for (const auto& s : j) w.push_back(alphabet.index_of(symbol_from_json(s)));
    return w;
}

inline json aperiodicity_to_json(const AperiodicityReport& r) {
    json j;
    j["aperiodic"] = r.aperiodic;
    j["index"] = r.index ? json(*r.index) : json(nullptr);
    if (r.witness) {
        j["witness"] = {{"word", word_to_json(r.minimal.alphabet(), r.witness->word)},
                        {"word_text", format_word(r.minimal.alphabet(), r.witness->word)},
                        {"cycle", r.witness->cycle}};
    } else {
        j["witness"] = nullptr;
    }
    j["monoid_size"] = r.monoid_size;
    j["minimal_states"] = r.minimal.size();
    return j;
}

inline json definiteness_to_json(const DefinitenessReport& r) {
    json j;
    j["definite"] = r.definite;
    j["horizon"] = r.horizon ? json(*r.horizon) : json(nullptr);
    if (r.witness) {
        json cyc = json::array();
        for (const auto& s : *r.witness)
            cyc.push_back({{"pair", {s.first, s.second}}, {"letter", symbol_to_json(r.minimal.alphabet()[s.letter])}});
        j["witness"] = std::move(cyc);
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

/// Re-checks a serialized permutation witness against the automaton it was
/// reported for.
inline bool revalidate_witness(const Dfa& automaton, const json& aperiodicity) {
    if (aperiodicity.at("aperiodic").get<bool>()) return aperiodicity.at("witness").is_null();
    const Dfa m = minimal(automaton);
    PermutationWitness w;
    w.word = word_from_json(m.alphabet(), aperiodicity.at("witness").at("word"));
    w.cycle = aperiodicity.at("witness").at("cycle").get<std::vector<State>>();
    return witness_holds(m, w);
}

} // namespace starfree
