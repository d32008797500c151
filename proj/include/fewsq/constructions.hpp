#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "fewsq/arithprog.hpp"
#include "fewsq/dfao.hpp"
#include "fewsq/error.hpp"
#include "fewsq/kernel.hpp"
#include "fewsq/morphism.hpp"
#include "fewsq/squares.hpp"
#include "fewsq/word.hpp"

namespace fewsq {

// ---------------------------------------------------------------------------
// Image tables, as printed in the literature.

namespace tables {

/// Entringer-Jackson-Schatz.
inline Morphism ejs() { return Morphism::from_strings({"1100", "0111", "1010"}); }

inline Morphism vtm_g() { return Morphism::from_strings({"01", "20", "23", "02"}); }
inline Coding vtm_tau() { return Coding(3, Word{2, 1, 0, 1}); }

/// 2 -> 210, 1 -> 20, 0 -> 1, fixed point from 2.
inline Morphism thue() { return Morphism::from_strings({"1", "20", "210"}); }

inline Morphism six_f() { return Morphism::from_strings({"01", "23", "45", "02", "05", "25"}); }
inline Coding six_rho() { return Coding(2, Word{0, 0, 0, 0, 1, 1}); }

inline Morphism fs_alpha() {
    return Morphism::from_strings({"011000111001", "011100011001", "011001110001", "01100010111001", "01110010110001"});
}

inline Morphism rampersad_p() {
    return Morphism::from_strings({"012321012340121012321234", "012101234323401234321234", "012101232123401232101234",
                                   "012321234323401232101234", "012321234012101234321234"});
}
inline Morphism rampersad_beta() { return Morphism::from_strings({"011100", "101100", "111000", "110010", "110001"}); }

inline Morphism ochem_sigma() {
    return Morphism::from_strings({"00011001011000111001011001110001011100101100010111",
                                   "00011001011000101110010110011100010110001110010111",
                                   "00011001011000101110010110001110010111000101100111"});
}

inline Morphism harju_nowotka_zeta() {
    return Morphism::from_strings(
        {"111000110010110001110010", "111000101100011100101100010", "111000110010110001011100101100"});
}

inline Morphism badkobeh_xi() { return Morphism::from_strings({"000111", "0011", "01001110001101"}); }
inline Morphism kappa() { return Morphism::from_strings({"110100111000110100", "1100", "01"}); }
inline Morphism eta() { return Morphism::from_strings({"00011101", "001110001101", "0011000111001101"}); }

inline Morphism q22() {
    return Morphism(22, {{0, 1},   {2, 3},   {4, 5},   {6, 7},   {8, 9},   {10, 11}, {12, 7},  {8, 9},
                         {13, 14}, {15, 1},  {2, 16},  {7, 17},  {6, 4},   {2, 16},  {18, 19}, {0, 1},
                         {6, 7},   {10, 11}, {20, 9},  {10, 21}, {13, 14}, {18, 19}});
}
inline Coding q22_gamma() {
    return Coding(2, Word{1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 1, 0, 1, 1, 0});
}

/// Renaming of vtm used before the Fraenkel-Simpson rewriting: swap 1 and 2.
/// The first of the two alphabet permutations (in lexicographic order) whose
/// image of vtm avoids 020 and 121; see find_fs_renaming.
inline Word fs_renaming() { return Word{0, 2, 1}; }

} // namespace tables

// ---------------------------------------------------------------------------
// Generators.

/// c(m^omega(seed)).
struct MorphicGenerator {
    Morphism morphism;
    Coding coding;
    Symbol seed = 0;
};

/// image(base word).
struct MorphicImageGenerator {
    MorphicGenerator base;
    Morphism image;
};

struct DfaoGenerator {
    Dfao dfao;
};

/// Fraenkel-Simpson: rename vtm, rewrite 12 -> 132 then 21 -> 241, apply alpha.
struct PipelineGenerator {};

using Generator = std::variant<MorphicGenerator, MorphicImageGenerator, DfaoGenerator, PipelineGenerator>;

struct ConstructionRecord {
    std::string name;
    std::string description;
    Generator generator;
    unsigned base = 2;
    std::optional<RootSet> expected_roots;
    /// Minimal automaton size in `base`.
    std::optional<std::size_t> expected_states;
    /// Weight of the word: base * states.
    std::optional<std::size_t> expected_weight;
    /// Weight of the morphism applied to the base word, where one is stated.
    std::optional<std::size_t> image_weight;
};

inline RootSet roots_of(std::initializer_list<const char*> roots) {
    RootSet out;
    for (const char* r : roots) out.insert(parse_word(r));
    return out;
}

inline MorphicGenerator vtm_generator() { return {tables::vtm_g(), tables::vtm_tau(), 0}; }

inline const std::vector<ConstructionRecord>& catalog() {
    static const std::vector<ConstructionRecord> records = [] {
        std::vector<ConstructionRecord> r;
        r.push_back({"ejs-vtm", "Entringer-Jackson-Schatz morphism h applied to vtm; no squares of order >= 3.",
                     MorphicImageGenerator{vtm_generator(), tables::ejs()}, 2, roots_of({"0", "1", "01", "10", "11"}), 10,
                     std::nullopt, 12});
        r.push_back({"six-state",
                     "rho(f^omega(0)): 6-state 2-automatic word, no squares of order >= 3 and 5 distinct squares. "
                     "The root set is computed ground truth.",
                     MorphicGenerator{tables::six_f(), tables::six_rho(), 0}, 2, roots_of({"0", "1", "00", "01", "10"}), 6,
                     std::nullopt, std::nullopt});
        r.push_back({"vtm", "tau(g^omega(0)), the ternary squarefree word.", vtm_generator(), 2, RootSet{}, std::nullopt,
                     std::nullopt, std::nullopt});
        r.push_back({"thue-fp", "Fixed point of 2 -> 210, 1 -> 20, 0 -> 1; equal to vtm.",
                     MorphicGenerator{tables::thue(), Coding::identity(3), 2}, 2, RootSet{}, std::nullopt, std::nullopt,
                     std::nullopt});
        r.push_back({"fraenkel-simpson",
                     "vtm with 1 and 2 swapped, then 12 -> 132, then 21 -> 241, then alpha. The literature describes "
                     "the squares both as 0^2, 1^2, (10)^2 and as 0^2, 1^2, (01)^2; computation gives (01)^2.",
                     PipelineGenerator{}, 2, roots_of({"0", "1", "01"}), std::nullopt, std::nullopt, std::nullopt});
        r.push_back({"rampersad", "beta(p^omega(0)) with 24-uniform p; 18 states in base 24, weight 24 * 18 = 432.",
                     MorphicImageGenerator{MorphicGenerator{tables::rampersad_p(), Coding::identity(5), 0},
                                           tables::rampersad_beta()},
                     24, roots_of({"0", "1", "01"}), 18, 432, std::nullopt});
        r.push_back({"ochem-vtm", "Ochem's 50-uniform sigma applied to vtm; 109 states, weight 218.",
                     MorphicImageGenerator{vtm_generator(), tables::ochem_sigma()}, 2, roots_of({"0", "1", "01"}), 109, 218,
                     std::nullopt});
        r.push_back({"harju-nowotka", "zeta(vtm); image lengths 24, 27, 30 form an arithmetic progression; 88 states.",
                     MorphicImageGenerator{vtm_generator(), tables::harju_nowotka_zeta()}, 2, roots_of({"0", "1", "01"}), 88,
                     176, 81});
        r.push_back({"badkobeh",
                     "xi(vtm), Badkobeh-Crochemore. Described in the literature as squarefree, which no infinite "
                     "binary word is; the recorded roots are computed.",
                     MorphicImageGenerator{vtm_generator(), tables::badkobeh_xi()}, 2, roots_of({"0", "1", "10"}),
                     std::nullopt, std::nullopt, 24});
        r.push_back({"kappa", "kappa(vtm), same weight as xi; roots computed.",
                     MorphicImageGenerator{vtm_generator(), tables::kappa()}, 2, roots_of({"0", "1", "10"}), std::nullopt,
                     std::nullopt, 24});
        r.push_back({"eta", "eta(vtm), least-weight arithmetic-progression morphism; 27 states, weight 54.",
                     MorphicImageGenerator{vtm_generator(), tables::eta()}, 2, roots_of({"0", "1", "10"}), 27, 54, 36});
        r.push_back({"q22", "gamma(q^omega(0)), the 22-state 2-automatic word of weight 44.",
                     MorphicGenerator{tables::q22(), tables::q22_gamma(), 0}, 2, roots_of({"0", "1", "10"}), 22, 44, 44});
        return r;
    }();
    return records;
}

inline const ConstructionRecord& find_construction(const std::string& name) {
    for (const auto& r : catalog())
        if (r.name == name) return r;
    throw LookupError("unknown construction '" + name + "'");
}

inline bool has_construction(const std::string& name) {
    const auto& c = catalog();
    return std::any_of(c.begin(), c.end(), [&](const ConstructionRecord& r) { return r.name == name; });
}

// ---------------------------------------------------------------------------
// Fraenkel-Simpson rewriting.

inline Word rename_letters(const Word& w, const Word& perm) {
    std::vector<bool> hit(perm.size(), false);
    for (Symbol s : perm) {
        if (s >= perm.size() || hit[s]) throw DomainError("renaming is not a bijection on its alphabet");
        hit[s] = true;
    }
    Word out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= perm.size()) throw DomainError("symbol at position " + std::to_string(i) + " is outside the renaming");
        out[i] = perm[w[i]];
    }
    return out;
}

/// Rewrites every occurrence of `from` (two letters) to `to`, scanning left to right.
inline Word rewrite_pairs(const Word& w, Symbol first, Symbol second, const Word& to) {
    Word out;
    out.reserve(w.size() + w.size() / 2);
    for (std::size_t i = 0; i < w.size();) {
        if (i + 1 < w.size() && w[i] == first && w[i + 1] == second) {
            out.insert(out.end(), to.begin(), to.end());
            i += 2;
        } else {
            out.push_back(w[i++]);
        }
    }
    return out;
}

/// Pass 1: 12 -> 132. Pass 2, on the result: 21 -> 241.
inline Word fs_transform(const Word& w) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] >= 3) throw DomainError("symbol at position " + std::to_string(i) + " is not in {0,1,2}");
    return rewrite_pairs(rewrite_pairs(w, 1, 2, {1, 3, 2}), 2, 1, {2, 4, 1});
}

/// Permutations of {0,1,2} whose image of the vtm prefix avoids 020 and 121.
inline std::vector<Word> find_fs_renaming(std::size_t prefix_length) {
    Word v = morphic_word_prefix(tables::vtm_g(), tables::vtm_tau(), 0, prefix_length);
    std::vector<Word> hits;
    Word perm{0, 1, 2};
    do {
        Word r = rename_letters(v, perm);
        if (!has_factor(r, {0, 2, 0}) && !has_factor(r, {1, 2, 1})) hits.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return hits;
}

inline Word fs_word_prefix(std::size_t n) {
    if (n == 0) return {};
    // Each vtm letter yields at least 12 output symbols; the last few letters
    // of a finite prefix may be rewritten differently once more input follows.
    std::size_t letters = n / 12 + 8;
    Word v = rename_letters(morphic_word_prefix(tables::vtm_g(), tables::vtm_tau(), 0, letters), tables::fs_renaming());
    Word t = fs_transform(v);
    t.resize(t.size() - 4);
    Word out = fewsq::apply(tables::fs_alpha(), t);
    out.resize(n);
    return out;
}

// ---------------------------------------------------------------------------
// Word access.

inline Word generator_prefix(const MorphicGenerator& g, std::size_t n) {
    return morphic_word_prefix(g.morphism, g.coding, g.seed, n);
}

/// Enough base letters for n image symbols, from the shortest image length.
inline Word image_prefix(const MorphicImageGenerator& g, std::size_t n) {
    std::size_t shortest = n;
    for (const Word& img : g.image.images()) shortest = std::min(shortest, img.size());
    if (shortest == 0) throw DomainError("image morphism has an empty image");
    Word out = fewsq::apply(g.image, generator_prefix(g.base, n / shortest + 1));
    out.resize(n);
    return out;
}

/// True when the record's word is h(vtm) for an arithmetic-progression h.
inline std::optional<ApParams> ap_params(const ConstructionRecord& r) {
    const auto* g = std::get_if<MorphicImageGenerator>(&r.generator);
    if (!g || g->base.morphism != tables::vtm_g() || g->base.coding != tables::vtm_tau()) return std::nullopt;
    try {
        return ApParams(g->image);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

/// First n symbols of the named word. `direct` selects constant-time access
/// for arithmetic-progression images of vtm.
inline Word word_prefix(const std::string& name, std::size_t n, bool direct = false) {
    const ConstructionRecord& r = find_construction(name);
    if (n == 0) return {};
    if (direct) {
        auto ap = ap_params(r);
        if (!ap) throw DomainError("construction '" + name + "' has no direct-access form");
        return take(ap_sequence_accessor(*ap), n);
    }
    return std::visit(
        [&](const auto& g) -> Word {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, MorphicGenerator>) return generator_prefix(g, n);
            else if constexpr (std::is_same_v<G, MorphicImageGenerator>) return image_prefix(g, n);
            else if constexpr (std::is_same_v<G, DfaoGenerator>) return generate_prefix(g.dfao, n);
            else return fs_word_prefix(n);
        },
        r.generator);
}

/// Accessor over the named word. Direct-access words are unbounded; others
/// are materialized to `length` symbols.
inline SequenceAccessor word_accessor(const std::string& name, std::size_t length) {
    if (auto ap = ap_params(find_construction(name))) return ap_sequence_accessor(*ap);
    return word_accessor(word_prefix(name, length));
}

/// Minimal automaton for the record when it is k-automatic by construction
/// (uniform morphic, or uniform image of a uniform morphic word).
inline std::optional<Dfao> construction_automaton(const ConstructionRecord& r) {
    if (const auto* g = std::get_if<MorphicGenerator>(&r.generator)) {
        if (g->seed != 0 || !is_uniform(g->morphism) || *is_uniform(g->morphism) < 2) return std::nullopt;
        return minimize(from_morphic(g->morphism, g->coding));
    }
    if (const auto* g = std::get_if<MorphicImageGenerator>(&r.generator)) {
        if (g->base.seed != 0 || !is_uniform(g->base.morphism) || !is_uniform(g->image)) return std::nullopt;
        return minimize(uniform_image(from_morphic(g->base.morphism, g->base.coding), g->image));
    }
    if (const auto* g = std::get_if<DfaoGenerator>(&r.generator)) return minimize(g->dfao);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Verification.

struct VerifyOptions {
    /// Residual comparison length when the automaton has to be learned.
    std::size_t comparison_length = 4096;
    std::size_t max_learned_states = 512;
};

struct VerifyReport {
    std::string name;
    bool has_expectations = false;
    SquareCheck squares;
    std::optional<std::size_t> states;
    std::optional<std::size_t> weight;
    std::optional<std::size_t> expected_states;
    std::string note;
    bool pass = false;
};

inline VerifyReport verify_construction(const std::string& name, std::size_t window, const VerifyOptions& opts = {}) {
    const ConstructionRecord& r = find_construction(name);
    VerifyReport rep;
    rep.name = name;
    rep.expected_states = r.expected_states;
    if (!r.expected_roots) {
        rep.note = "no expectations";
        return rep;
    }
    rep.has_expectations = true;
    auto ap = ap_params(r);
    Word w = ap ? take(ap_sequence_accessor(*ap), window) : word_prefix(name, window);
    rep.squares = compare_roots(distinct_squares(w), window, *r.expected_roots);
    rep.pass = rep.squares.pass;

    if (r.expected_states) {
        try {
            std::optional<Dfao> d = construction_automaton(r);
            if (!d && ap)
                d = learn_from_prefix(ap_sequence_accessor(*ap), r.base, opts.comparison_length, opts.max_learned_states, window);
            if (d) {
                rep.states = d->state_count();
                rep.weight = d->base() * d->state_count();
                if (*rep.states != *r.expected_states) rep.pass = false;
            } else {
                rep.note = "no automaton available for this construction";
                rep.pass = false;
            }
        } catch (const Error& e) {
            rep.note = e.what();
            rep.pass = false;
        }
    }
    return rep;
}

inline void write_verify_report(std::ostream& os, const VerifyReport& rep) {
    if (!rep.has_expectations) {
        os << "verdict: no expectations\n";
        return;
    }
    write_report(os, rep.squares.report);
    if (!rep.squares.missing.empty()) os << "missing: " << format_roots(rep.squares.missing) << '\n';
    if (!rep.squares.extra.empty()) os << "extra: " << format_roots(rep.squares.extra) << '\n';
    if (rep.states) os << "states: " << *rep.states << '\n';
    if (rep.weight) os << "weight: " << *rep.weight << '\n';
    if (rep.expected_states && rep.states != rep.expected_states) os << "expected_states: " << *rep.expected_states << '\n';
    if (!rep.note.empty()) os << "note: " << rep.note << '\n';
    os << "verdict: " << (rep.pass ? "pass" : "fail") << '\n';
}

/// Bounded-window truth values of three first-order queries:
///   q1: a square of order >= 3 lies inside x[0 .. N);
///   q2: four equal consecutive letters;
///   q3: the factor 0101.
struct WalnutChecks {
    bool q1 = false;
    bool q2 = false;
    bool q3 = false;
};

inline WalnutChecks bounded_walnut_checks(const SequenceAccessor& x, std::size_t window) {
    if (window < 8) throw DomainError("window must be at least 8");
    Word w = take(x, window);
    WalnutChecks c;
    c.q1 = has_square_of_order_at_least(w, 3);
    for (std::size_t i = 0; i + 4 <= window; ++i) {
        if (w[i] == w[i + 1] && w[i] == w[i + 2] && w[i] == w[i + 3]) c.q2 = true;
        if (w[i] == 0 && w[i + 1] == 1 && w[i + 2] == 0 && w[i + 3] == 1) c.q3 = true;
    }
    return c;
}

} // namespace fewsq
