#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fewsq/error.hpp"
#include "fewsq/word.hpp"

namespace fewsq {

/// A substitution on letters, extended to words by concatenation.
/// Domain is {0..domain_size-1}; every image is a word over {0..codomain_size-1}.
class Morphism {
public:
    Morphism() = default;

    Morphism(std::size_t codomain_size, std::vector<Word> images)
        : codomain_size_(codomain_size), images_(std::move(images)) {
        if (images_.empty()) throw DomainError("morphism needs at least one domain symbol");
        if (codomain_size_ == 0) throw DomainError("codomain alphabet must be nonempty");
        for (std::size_t a = 0; a < images_.size(); ++a) {
            if (!fits_alphabet(images_[a], codomain_size_))
                throw DomainError("image of " + std::to_string(a) + " leaves the codomain alphabet");
        }
    }

    /// Builds a morphism from digit strings, e.g. {"1100", "0111", "1010"}.
    /// The codomain is the smallest alphabet covering all images unless given.
    static Morphism from_strings(const std::vector<std::string>& images, std::size_t codomain_size = 0) {
        std::vector<Word> words;
        Symbol top = 0;
        for (const auto& s : images) {
            words.push_back(parse_word(s));
            if (!words.back().empty()) top = std::max(top, max_symbol(words.back()));
        }
        if (codomain_size == 0) codomain_size = static_cast<std::size_t>(top) + 1;
        return Morphism(codomain_size, std::move(words));
    }

    std::size_t domain_size() const noexcept { return images_.size(); }
    std::size_t codomain_size() const noexcept { return codomain_size_; }
    const Word& image(Symbol a) const { return images_.at(a); }
    const std::vector<Word>& images() const noexcept { return images_; }

    bool endomorphic() const noexcept { return codomain_size_ <= images_.size(); }

    friend bool operator==(const Morphism&, const Morphism&) = default;

private:
    std::size_t codomain_size_ = 0;
    std::vector<Word> images_;
};

/// A 1-uniform morphism, stored as a lookup table.
class Coding {
public:
    Coding() = default;

    Coding(std::size_t codomain_size, Word table) : codomain_size_(codomain_size), table_(std::move(table)) {
        if (table_.empty()) throw DomainError("coding needs at least one domain symbol");
        if (!fits_alphabet(table_, codomain_size_)) throw DomainError("coding output leaves the codomain alphabet");
    }

    static Coding identity(std::size_t n) {
        Word t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<Symbol>(i);
        return Coding(n, std::move(t));
    }

    static Coding from_morphism(const Morphism& m) {
        Word t;
        for (std::size_t a = 0; a < m.domain_size(); ++a) {
            if (m.image(static_cast<Symbol>(a)).size() != 1)
                throw DomainError("not a coding: image of " + std::to_string(a) + " does not have length 1");
            t.push_back(m.image(static_cast<Symbol>(a))[0]);
        }
        return Coding(m.codomain_size(), std::move(t));
    }

    Morphism as_morphism() const {
        std::vector<Word> images;
        for (Symbol s : table_) images.push_back(Word{s});
        return Morphism(codomain_size_, std::move(images));
    }

    std::size_t domain_size() const noexcept { return table_.size(); }
    std::size_t codomain_size() const noexcept { return codomain_size_; }
    Symbol operator()(Symbol a) const { return table_.at(a); }
    const Word& table() const noexcept { return table_; }

    friend bool operator==(const Coding&, const Coding&) = default;

private:
    std::size_t codomain_size_ = 0;
    Word table_;
};

/// Concatenation of the images of the letters of w.
inline Word apply(const Morphism& m, const Word& w) {
    Word out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= m.domain_size())
            throw DomainError("symbol " + std::to_string(w[i]) + " at position " + std::to_string(i) +
                              " is outside the morphism domain");
        const Word& img = m.image(w[i]);
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

inline Word apply(const Coding& c, const Word& w) {
    Word out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= c.domain_size())
            throw DomainError("symbol " + std::to_string(w[i]) + " at position " + std::to_string(i) +
                              " is outside the coding domain");
        out[i] = c(w[i]);
    }
    return out;
}

/// k if every image has length k.
inline std::optional<std::size_t> is_uniform(const Morphism& m) {
    std::size_t k = m.image(0).size();
    for (const Word& img : m.images())
        if (img.size() != k) return std::nullopt;
    return k;
}

/// Sum of the image lengths.
inline std::size_t weight(const Morphism& m) {
    std::size_t total = 0;
    for (const Word& img : m.images()) total += img.size();
    return total;
}

/// Symbols b with m^i(b) empty for some i (least fixpoint of "every letter of m(b) is mortal").
inline std::vector<bool> mortal_symbols(const Morphism& m) {
    std::vector<bool> mortal(m.domain_size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t b = 0; b < m.domain_size(); ++b) {
            if (mortal[b]) continue;
            const Word& img = m.image(static_cast<Symbol>(b));
            if (std::all_of(img.begin(), img.end(), [&](Symbol s) { return mortal[s]; })) {
                mortal[b] = true;
                changed = true;
            }
        }
    }
    return mortal;
}

/// True iff m(a) = a x with x nonempty and m^i(x) never empty.
inline bool is_prolongable(const Morphism& m, Symbol a) {
    if (!m.endomorphic()) throw DomainError("morphism is not endomorphic; it cannot be iterated");
    if (a >= m.domain_size()) throw DomainError("symbol " + std::to_string(a) + " is outside the morphism domain");
    const Word& img = m.image(a);
    if (img.size() < 2 || img[0] != a) return false;
    auto mortal = mortal_symbols(m);
    return std::any_of(img.begin() + 1, img.end(), [&](Symbol s) { return !mortal[s]; });
}

/// First n letters of m^omega(a). The buffer is extended by reading it: the
/// letter under the cursor contributes its image (the seed contributes its tail).
inline Word fixed_point_prefix(const Morphism& m, Symbol a, std::size_t n) {
    if (!is_prolongable(m, a))
        throw DomainError("morphism is not prolongable on symbol " + std::to_string(a));
    Word w{a};
    w.reserve(n + m.image(a).size());
    const Word& seed = m.image(a);
    w.insert(w.end(), seed.begin() + 1, seed.end());
    for (std::size_t cursor = 1; w.size() < n; ++cursor) {
        if (cursor >= w.size()) throw DomainError("fixed point stalled before reaching the requested length");
        const Word& img = m.image(w[cursor]);
        w.insert(w.end(), img.begin(), img.end());
    }
    w.resize(n);
    return w;
}

inline Word morphic_word_prefix(const Morphism& m, const Coding& c, Symbol a, std::size_t n) {
    if (c.domain_size() < m.domain_size()) throw DomainError("coding does not cover the morphism alphabet");
    return fewsq::apply(c, fixed_point_prefix(m, a, n));
}

// ---------------------------------------------------------------------------
// Text format:
//
//   morphism <domain_size> <codomain_size>
//   0 -> 0 1
//   1 -> 2 3
//
// Blank lines and lines starting with '#' are skipped on input.

inline void write_morphism(std::ostream& os, const Morphism& m) {
    os << "morphism " << m.domain_size() << ' ' << m.codomain_size() << '\n';
    for (std::size_t a = 0; a < m.domain_size(); ++a) {
        os << a << " ->";
        for (Symbol s : m.image(static_cast<Symbol>(a))) os << ' ' << s;
        os << '\n';
    }
}

inline std::string to_text(const Morphism& m) {
    std::ostringstream os;
    write_morphism(os, m);
    return os.str();
}

namespace detail {

/// Line-oriented tokenizer shared by the text parsers; tracks 1-based positions.
class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}

    /// Advances to the next non-blank, non-comment line.
    bool next() {
        std::string line;
        while (std::getline(is_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            line_ = std::move(line);
            pos_ = 0;
            return true;
        }
        return false;
    }

    const std::string& line() const { return line_; }
    std::size_t line_no() const { return line_no_; }

    void skip_spaces() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }
    bool at_end() {
        skip_spaces();
        return pos_ >= line_.size();
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_no_, pos_ + 1, what); }

    std::string token() {
        skip_spaces();
        std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') ++pos_;
        if (start == pos_) fail("unexpected end of line");
        return line_.substr(start, pos_ - start);
    }

    void expect(const std::string& literal) {
        skip_spaces();
        if (line_.compare(pos_, literal.size(), literal) != 0) fail("expected '" + literal + "'");
        pos_ += literal.size();
    }

    std::size_t number() {
        skip_spaces();
        std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < line_.size() && line_[pos_] >= '0' && line_[pos_] <= '9') {
            value = value * 10 + static_cast<std::size_t>(line_[pos_] - '0');
            ++pos_;
        }
        if (start == pos_) fail("expected a nonnegative integer");
        return value;
    }

    /// Column of the next token.
    std::size_t column() {
        skip_spaces();
        return pos_ + 1;
    }

private:
    std::istream& is_;
    std::string line_;
    std::size_t line_no_ = 0;
    std::size_t pos_ = 0;
};

inline Morphism read_morphism_body(LineReader& in) {
    in.expect("morphism");
    std::size_t domain = in.number();
    std::size_t codomain = in.number();
    if (!in.at_end()) in.fail("trailing characters after header");
    if (domain == 0 || codomain == 0) in.fail("alphabet sizes must be positive");
    std::vector<Word> images(domain);
    for (std::size_t a = 0; a < domain; ++a) {
        if (!in.next()) throw ParseError(in.line_no() + 1, 1, "missing image line for symbol " + std::to_string(a));
        std::size_t sym = in.number();
        if (sym != a) in.fail("expected image line for symbol " + std::to_string(a));
        in.expect("->");
        while (!in.at_end()) {
            std::size_t col = in.column();
            std::size_t s = in.number();
            if (s >= codomain) throw ParseError(in.line_no(), col, "symbol " + std::to_string(s) + " exceeds codomain");
            images[a].push_back(static_cast<Symbol>(s));
        }
    }
    return Morphism(codomain, std::move(images));
}

} // namespace detail

inline Morphism read_morphism(std::istream& is) {
    detail::LineReader in(is);
    if (!in.next()) throw ParseError(1, 1, "empty input");
    return detail::read_morphism_body(in);
}

inline Morphism parse_morphism(const std::string& text) {
    std::istringstream is(text);
    return read_morphism(is);
}

/// A morphic system file: a morphism block, optionally followed by a second
/// block holding the coding. Without one, the coding is the identity.
struct MorphicSystem {
    Morphism morphism;
    Coding coding;
};

inline MorphicSystem read_morphic_system(std::istream& is) {
    detail::LineReader in(is);
    if (!in.next()) throw ParseError(1, 1, "empty input");
    Morphism m = detail::read_morphism_body(in);
    if (!in.next()) return {m, Coding::identity(m.domain_size())};
    std::size_t header_line = in.line_no();
    Morphism c = detail::read_morphism_body(in);
    if (c.domain_size() < m.domain_size()) throw ParseError(header_line, 1, "coding does not cover the morphism alphabet");
    try {
        return {m, Coding::from_morphism(c)};
    } catch (const DomainError& e) {
        throw ParseError(header_line, 1, e.what());
    }
}

inline void write_morphic_system(std::ostream& os, const MorphicSystem& sys) {
    write_morphism(os, sys.morphism);
    write_morphism(os, sys.coding.as_morphism());
}

} // namespace fewsq
