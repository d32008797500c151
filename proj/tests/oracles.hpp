#pragma once

// Naive reference implementations used to check the library.

#include <fewsq/fewsq.hpp>

#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using fewsq::Symbol;
using fewsq::Word;

inline Word w(const std::string& digits) { return fewsq::parse_word(digits); }

inline Word random_word(std::mt19937_64& rng, std::size_t len, Symbol alphabet) {
    std::uniform_int_distribution<Symbol> d(0, alphabet - 1);
    Word out(len);
    for (auto& s : out) s = d(rng);
    return out;
}

/// Every x with xx a factor, by comparing all pairs of adjacent blocks.
inline fewsq::RootSet naive_roots(const Word& v) {
    fewsq::RootSet roots;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t p = 1; i + 2 * p <= v.size(); ++p)
            if (std::equal(v.begin() + i, v.begin() + i + p, v.begin() + i + p))
                roots.insert(Word(v.begin() + i, v.begin() + i + p));
    return roots;
}

inline std::size_t naive_max_order(const Word& v) {
    std::size_t best = 0;
    for (const auto& r : naive_roots(v)) best = std::max(best, r.size());
    return best;
}

/// Iterates m on the seed until the word is long enough.
inline Word iterate_fixed_point(const fewsq::Morphism& m, Symbol seed, std::size_t n) {
    Word cur{seed};
    while (cur.size() < n) {
        Word next = fewsq::apply(m, cur);
        if (next.size() <= cur.size()) break;
        cur = std::move(next);
    }
    cur.resize(std::min(cur.size(), n));
    return cur;
}

/// Concatenation of images of the first letters of the base word.
inline Word image_by_concatenation(const fewsq::Morphism& h, std::size_t n) {
    Word out;
    for (fewsq::Index i = 0; out.size() < n; ++i) {
        const Word& img = h.image(fewsq::vtm_symbol(i));
        out.insert(out.end(), img.begin(), img.end());
    }
    out.resize(n);
    return out;
}

/// Evaluates a DFAO by reading the digits of n directly, LSD to MSD reversed.
inline Symbol eval_naive(const fewsq::Dfao& d, fewsq::Index n) {
    std::vector<unsigned> digits;
    do {
        digits.insert(digits.begin(), static_cast<unsigned>(n % d.base()));
        n /= d.base();
    } while (n > 0);
    fewsq::StateId p = d.initial();
    for (unsigned c : digits) p = d.next(p, c);
    return d.output(p);
}

inline fewsq::Dfao random_dfao(std::mt19937_64& rng, unsigned base, std::size_t states, Symbol alphabet, bool normalized) {
    std::uniform_int_distribution<fewsq::StateId> st(0, static_cast<fewsq::StateId>(states - 1));
    std::uniform_int_distribution<Symbol> out(0, alphabet - 1);
    std::vector<fewsq::StateId> trans(states * base);
    for (auto& t : trans) t = st(rng);
    if (normalized) trans[0] = 0;
    Word outputs(states);
    for (auto& o : outputs) o = out(rng);
    return fewsq::Dfao(base, 0, std::move(trans), std::move(outputs));
}

/// Number of distinct behaviours among reachable states, where a behaviour is
/// the output after every digit string of length <= state count. With s states
/// strings of length s - 1 already separate all inequivalent pairs.
inline std::size_t behaviour_count(const fewsq::Dfao& d) {
    std::set<fewsq::StateId> reach{d.initial()};
    std::vector<fewsq::StateId> stack{d.initial()};
    while (!stack.empty()) {
        auto p = stack.back();
        stack.pop_back();
        for (unsigned c = 0; c < d.base(); ++c)
            if (reach.insert(d.next(p, c)).second) stack.push_back(d.next(p, c));
    }
    std::set<Word> behaviours;
    for (auto p : reach) {
        Word sig;
        std::vector<fewsq::StateId> level{p};
        for (std::size_t len = 0; len < d.state_count(); ++len) {
            std::vector<fewsq::StateId> next;
            for (auto q : level) {
                sig.push_back(d.output(q));
                for (unsigned c = 0; c < d.base(); ++c) next.push_back(d.next(q, c));
            }
            level = std::move(next);
        }
        behaviours.insert(sig);
    }
    return behaviours.size();
}

/// Largest set of pairwise-distinguishable residuals m < min(k^depth, |v|),
/// by exhaustive search over subsets. Residual m is read on complete levels L
/// with (m + 1) k^L <= |v|.
inline std::size_t brute_lower_bound(const Word& v, unsigned k, unsigned depth) {
    std::size_t cand = 1;
    for (unsigned e = 0; e < depth && cand < v.size(); ++e) cand *= k;
    cand = std::min(cand, v.size());
    std::vector<std::vector<Word>> levels(cand);
    for (std::size_t m = 0; m < cand; ++m) {
        std::size_t width = 1;
        while ((m + 1) * width <= v.size()) {
            levels[m].emplace_back(v.begin() + m * width, v.begin() + (m + 1) * width);
            width *= k;
        }
    }
    auto distinct = [&](std::size_t a, std::size_t b) {
        std::size_t L = std::min(levels[a].size(), levels[b].size());
        for (std::size_t i = 0; i < L; ++i)
            if (levels[a][i] != levels[b][i]) return true;
        return false;
    };
    std::size_t best = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << cand); ++mask) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < cand; ++i)
            if (mask >> i & 1) members.push_back(i);
        if (members.size() <= best) continue;
        bool ok = true;
        for (std::size_t i = 0; ok && i < members.size(); ++i)
            for (std::size_t j = i + 1; ok && j < members.size(); ++j) ok = distinct(members[i], members[j]);
        if (ok) best = members.size();
    }
    return best;
}

} // namespace oracle
