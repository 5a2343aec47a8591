#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "starfree/error.hpp"

namespace starfree {

/// A letter label. Plain digits carry one component; product alphabets
/// (pairs, logic tracks) carry several. Ordering is lexicographic.
struct Symbol {
    std::vector<int> parts;

    static Symbol digit(int d) { return Symbol{{d}}; }
    static Symbol pair(int a, int b) { return Symbol{{a, b}}; }

    bool is_digit() const { return parts.size() == 1; }
    int value() const { return parts.front(); }
    int left() const { return parts.at(0); }
    int right() const { return parts.at(1); }

    auto operator<=>(const Symbol&) const = default;
    bool operator==(const Symbol&) const = default;

    std::string to_string() const {
        if (is_digit()) return std::to_string(parts.front());
        std::ostringstream out;
        out << '(';
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out << ',';
            out << parts[i];
        }
        out << ')';
        return out.str();
    }
};

/// Letters are indices into an Alphabet; words are read most-significant
/// digit first unless a function says otherwise.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw Error(ErrorKind::invalid_argument, "alphabet must be non-empty");
        if (!std::is_sorted(symbols_.begin(), symbols_.end()))
            throw Error(ErrorKind::invalid_argument, "alphabet symbols must be in increasing order");
        if (std::adjacent_find(symbols_.begin(), symbols_.end()) != symbols_.end())
            throw Error(ErrorKind::invalid_argument, "alphabet symbols must be distinct");
    }

    /// {lo, lo+1, ..., hi}
    static Alphabet digits(int lo, int hi) {
        std::vector<Symbol> s;
        for (int d = lo; d <= hi; ++d) s.push_back(Symbol::digit(d));
        return Alphabet(std::move(s));
    }

    /// Lexicographic product; pair (a,b) sits at index ia * |rhs| + ib.
    static Alphabet product(const Alphabet& lhs, const Alphabet& rhs) {
        std::vector<Symbol> s;
        s.reserve(lhs.size() * rhs.size());
        for (const auto& a : lhs.symbols_)
            for (const auto& b : rhs.symbols_) {
                Symbol p;
                p.parts = a.parts;
                p.parts.insert(p.parts.end(), b.parts.begin(), b.parts.end());
                s.push_back(std::move(p));
            }
        return Alphabet(std::move(s));
    }

    std::size_t size() const { return symbols_.size(); }
    const Symbol& operator[](Letter i) const { return symbols_[i]; }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    std::optional<Letter> find(const Symbol& s) const {
        auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s);
        if (it == symbols_.end() || *it != s) return std::nullopt;
        return static_cast<Letter>(it - symbols_.begin());
    }

    Letter index_of(const Symbol& s) const {
        auto i = find(s);
        if (!i) throw Error(ErrorKind::invalid_argument, "symbol " + s.to_string() + " not in alphabet");
        return *i;
    }

    Letter index_of_digit(int d) const { return index_of(Symbol::digit(d)); }
    bool contains(const Symbol& s) const { return find(s).has_value(); }

    bool is_pair_alphabet() const { return symbols_.front().parts.size() == 2; }

    /// Distinct first (side 0) or second (side 1) components of a pair alphabet.
    Alphabet component(int side) const {
        std::vector<Symbol> s;
        for (const auto& sym : symbols_) s.push_back(Symbol::digit(sym.parts.at(side)));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return Alphabet(std::move(s));
    }

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<Symbol> symbols_;
};

/// Digit sequence (most-significant first) to a word over `alphabet`.
inline Word word_from_digits(const Alphabet& alphabet, const std::vector<int>& digits) {
    Word w;
    w.reserve(digits.size());
    for (int d : digits) w.push_back(alphabet.index_of_digit(d));
    return w;
}

inline std::vector<int> digits_from_word(const Alphabet& alphabet, const Word& w) {
    std::vector<int> d;
    d.reserve(w.size());
    for (Letter l : w) d.push_back(alphabet[l].value());
    return d;
}

/// Parses "1001" (one char per digit) or "1.10.3" (dot separated) into digits.
inline std::vector<int> parse_digit_string(const std::string& text) {
    std::vector<int> out;
    if (text.find('.') != std::string::npos) {
        std::istringstream in(text);
        std::string part;
        while (std::getline(in, part, '.')) {
            if (part.empty()) throw Error(ErrorKind::syntax_error, "empty digit in '" + text + "'");
            out.push_back(std::stoi(part));
        }
        return out;
    }
    for (char c : text) {
        if (c < '0' || c > '9') throw Error(ErrorKind::syntax_error, "bad digit in '" + text + "'");
        out.push_back(c - '0');
    }
    return out;
}

/// Bare digit string; digits >= 10 switch the whole word to dot-separated form.
inline std::string format_digits(const std::vector<int>& digits) {
    bool dotted = std::any_of(digits.begin(), digits.end(), [](int d) { return d >= 10; });
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (dotted && i) out += '.';
        out += std::to_string(digits[i]);
    }
    return out;
}

inline std::string format_word(const Alphabet& alphabet, const Word& w) {
    bool digits_only = std::all_of(alphabet.symbols().begin(), alphabet.symbols().end(),
                                   [](const Symbol& s) { return s.is_digit(); });
    if (digits_only) return format_digits(digits_from_word(alphabet, w));
    std::string out;
    for (Letter l : w) out += alphabet[l].to_string();
    return out;
}

} // namespace starfree
