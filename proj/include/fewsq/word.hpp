#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fewsq/error.hpp"

namespace fewsq {

/// Letters are dense nonnegative integers 0..alphabet_size-1.
using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using Index = std::uint64_t;

/// Random access into an (in principle infinite) sequence. Accessors backed by a
/// finite buffer throw std::out_of_range past the end.
using SequenceAccessor = std::function<Symbol(Index)>;

/// Roots ordered by length first, then lexicographically: 0 < 1 < 01 < 10 < 11.
struct ShortLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};
using RootSet = std::set<Word, ShortLex>;

inline Symbol max_symbol(const Word& w) {
    return w.empty() ? 0 : *std::max_element(w.begin(), w.end());
}

inline bool fits_alphabet(const Word& w, std::size_t alphabet_size) {
    return std::all_of(w.begin(), w.end(), [&](Symbol s) { return s < alphabet_size; });
}

/// Renders a word as decimal symbols. Contiguous digits when every symbol
/// fits one digit, otherwise comma-separated.
inline std::string format_word(const Word& w, std::size_t alphabet_size = 0) {
    bool wide = alphabet_size > 10 || max_symbol(w) >= 10;
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (wide && i) out += ',';
        out += std::to_string(w[i]);
    }
    return out;
}

/// Inverse of format_word. Accepts contiguous digits ("0110"), or comma/space
/// separated decimals ("12,7,3"). Empty input gives the empty word.
inline Word parse_word(std::string_view text) {
    Word w;
    bool separated = text.find_first_of(", ") != std::string_view::npos;
    if (!separated) {
        for (std::size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (c < '0' || c > '9') throw ParseError(1, i + 1, std::string("unexpected character '") + c + "'");
            w.push_back(static_cast<Symbol>(c - '0'));
        }
        return w;
    }
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ',' || text[i] == ' ')) ++i;
        if (i == text.size()) break;
        std::size_t start = i;
        Symbol value = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            value = value * 10 + static_cast<Symbol>(text[i] - '0');
            ++i;
        }
        if (i == start || (i < text.size() && text[i] != ',' && text[i] != ' '))
            throw ParseError(1, i + 1, "expected a decimal symbol");
        w.push_back(value);
    }
    return w;
}

inline Word reversed(Word w) {
    std::reverse(w.begin(), w.end());
    return w;
}

/// Accessor over a finite buffer; the buffer is shared, not copied per call.
inline SequenceAccessor word_accessor(Word w) {
    auto data = std::make_shared<const Word>(std::move(w));
    return [data](Index n) -> Symbol { return data->at(static_cast<std::size_t>(n)); };
}

inline Word take(const SequenceAccessor& x, std::size_t n) {
    Word w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = x(i);
    return w;
}

} // namespace fewsq
