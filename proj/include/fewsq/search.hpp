#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "fewsq/arithprog.hpp"
#include "fewsq/dfao.hpp"
#include "fewsq/error.hpp"
#include "fewsq/kernel.hpp"
#include "fewsq/morphism.hpp"
#include "fewsq/squares.hpp"
#include "fewsq/word.hpp"

namespace fewsq {

/// Limits on the squares of a binary word. A prefix violates the constraint
/// as soon as no extension can satisfy it; required roots only count against
/// the distinct-square budget until they appear.
struct SearchConstraint {
    std::optional<std::size_t> max_square_order;
    std::optional<std::size_t> max_distinct_squares;
    std::optional<RootSet> required_roots;
    /// Length of the generated prefix a witness is finally checked on.
    std::size_t check_window = std::size_t{1} << 14;

    void validate() const {
        if (!max_square_order && !max_distinct_squares && !required_roots)
            throw DomainError("search constraint is empty");
    }

    bool violated_by(const RootSet& roots, std::size_t max_order) const {
        if (max_square_order && max_order > *max_square_order) return true;
        if (max_distinct_squares) {
            if (roots.size() > *max_distinct_squares) return true;
            if (required_roots) {
                std::size_t pending = 0;
                for (const Word& r : *required_roots) pending += roots.count(r) ? 0 : 1;
                if (roots.size() + pending > *max_distinct_squares) return true;
            }
        }
        return false;
    }

    bool satisfied_by(const RootSet& roots, std::size_t max_order) const {
        if (violated_by(roots, max_order)) return false;
        if (required_roots)
            for (const Word& r : *required_roots)
                if (!roots.count(r)) return false;
        return true;
    }

    /// Exactly the given roots.
    static SearchConstraint exact_roots(RootSet roots) {
        SearchConstraint c;
        c.max_distinct_squares = roots.size();
        c.required_roots = std::move(roots);
        return c;
    }
};

enum class SearchStatus { found, exhausted, budget_exceeded };

inline const char* to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted: return "exhausted";
    default: return "budget-exceeded";
    }
}

struct SearchStats {
    std::size_t nodes_expanded = 0;
    std::size_t max_depth = 0;
    std::map<std::string, std::size_t> prunes;

    friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::exhausted;
    std::optional<Word> witness_prefix;
    std::optional<Dfao> dfao;
    std::optional<Morphism> morphism;
    SearchStats stats;
    std::string note;
};

// ---------------------------------------------------------------------------
// Lexicographically least automatic word.

struct LexleastOptions {
    Symbol alphabet = 2;
    /// Receives `node <prefix-length> <prune-reason|expand>` lines.
    std::ostream* trace = nullptr;
};

/// Residual-bound depth for a prefix of length n: floor(log_k n) - 1, at least 4.
inline unsigned pruning_depth(std::size_t n, unsigned k) {
    unsigned log = 0;
    for (std::size_t v = n; v >= k; v /= k) ++log;
    return std::max(4u, log > 0 ? log - 1 : 0u);
}

/// Tries to extract an automaton of at most max_states states from w, using
/// the shortest residual comparison that regenerates all of w.
inline std::optional<Dfao> extract_automaton(const Word& w, unsigned k, std::size_t max_states) {
    auto x = word_accessor(w);
    std::size_t comparison = 1;
    std::size_t width = 1;
    for (unsigned level = 1; level < 64; ++level) {
        width *= k;
        comparison += width;
        if (comparison > w.size()) break;
        try {
            return learn_from_prefix(x, k, comparison, max_states, w.size());
        } catch (const InconsistencyError&) {
            continue;
        } catch (const BudgetError&) {
            break;
        }
    }
    return std::nullopt;
}

/// Depth-first search over prefixes in lexicographic order. A prefix is
/// pruned when it violates the constraint or when more than max_states
/// residuals are pairwise distinguishable in it. The first prefix reaching
/// depth_limit is turned into an automaton and rechecked on
/// constraint.check_window generated symbols before it is reported.
inline SearchOutcome lexleast_search(unsigned k, std::size_t max_states, const SearchConstraint& c, std::size_t depth_limit,
                                     const LexleastOptions& opts = {}) {
    if (k < 2) throw DomainError("base must be at least 2");
    if (max_states < 1) throw DomainError("state bound must be at least 1");
    if (depth_limit < 1) throw DomainError("depth limit must be positive");
    c.validate();

    SearchOutcome outcome;
    SearchStats& stats = outcome.stats;
    SquareTracker tr;
    auto trace = [&](std::size_t n, const char* what) {
        if (opts.trace) *opts.trace << "node " << n << ' ' << what << '\n';
    };
    auto prune = [&](const char* reason) {
        ++stats.prunes[reason];
        trace(tr.word().size(), reason);
    };

    Symbol a = 0;
    for (;;) {
        if (a >= opts.alphabet) {
            if (tr.word().empty()) {
                outcome.status = SearchStatus::exhausted;
                return outcome;
            }
            a = tr.word().back() + 1;
            tr.pop();
            continue;
        }
        tr.push(a);
        ++stats.nodes_expanded;
        const std::size_t n = tr.word().size();
        stats.max_depth = std::max(stats.max_depth, n);
        if (c.violated_by(tr.roots(), tr.max_order())) {
            prune("constraint");
            tr.pop();
            ++a;
            continue;
        }
        if (kernel_lower_bound(tr.word(), k, pruning_depth(n, k)) > max_states) {
            prune("kernel");
            tr.pop();
            ++a;
            continue;
        }
        trace(n, "expand");
        if (n < depth_limit) {
            a = 0;
            continue;
        }

        outcome.witness_prefix = tr.word();
        auto d = extract_automaton(tr.word(), k, max_states);
        if (!d) {
            outcome.status = SearchStatus::budget_exceeded;
            outcome.note = "surviving prefix does not determine an automaton within the state bound";
            return outcome;
        }
        Word check = generate_prefix(*d, std::max(c.check_window, depth_limit));
        auto report = distinct_squares(check);
        if (!c.satisfied_by(report.roots, report.max_order)) {
            outcome.status = SearchStatus::budget_exceeded;
            outcome.note = "extracted automaton violates the constraint on the check window";
            return outcome;
        }
        outcome.status = SearchStatus::found;
        outcome.dfao = minimize(*d);
        return outcome;
    }
}

// ---------------------------------------------------------------------------
// Least-weight morphism with image lengths in arithmetic progression.

struct MorphismSearchOptions {
    /// Base word the candidate is applied to; vtm by default.
    SequenceAccessor base = vtm_symbol;
    /// Base letters imaged during the cheap screen.
    std::size_t screen_letters = 8;
    std::ostream* trace = nullptr;
};

namespace detail {

/// Binary words of length `len` that do not violate c, in lexicographic order.
inline std::vector<Word> admissible_words(const SearchConstraint& c, std::size_t len) {
    std::vector<Word> out;
    if (len == 0) return out;
    SquareTracker tr;
    Symbol a = 0;
    for (;;) {
        if (a >= 2) {
            if (tr.word().empty()) return out;
            a = tr.word().back() + 1;
            tr.pop();
            continue;
        }
        tr.push(a);
        if (c.violated_by(tr.roots(), tr.max_order())) {
            tr.pop();
            ++a;
            continue;
        }
        if (tr.word().size() == len) {
            out.push_back(tr.word());
            tr.pop();
            ++a;
            continue;
        }
        a = 0;
    }
}

/// Pushes w onto tr, stopping at the first violation. Returns the number
/// pushed and whether all of w went in cleanly.
inline bool push_clean(SquareTracker& tr, const Word& w, const SearchConstraint& c, std::size_t& pushed) {
    pushed = 0;
    for (Symbol s : w) {
        tr.push(s);
        ++pushed;
        if (c.violated_by(tr.roots(), tr.max_order())) return false;
    }
    return true;
}

inline void pop_n(SquareTracker& tr, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) tr.pop();
}

inline bool clean_concat(const Word& u, const Word& v, const SearchConstraint& c) {
    SquareTracker tr;
    std::size_t pushed = 0;
    return push_clean(tr, u, c, pushed) && push_clean(tr, v, c, pushed);
}

inline Word apply_to_base(const std::vector<Word>& images, const SequenceAccessor& base, std::size_t letters) {
    Word out;
    for (std::size_t i = 0; i < letters; ++i) {
        const Word& img = images[base(i)];
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

} // namespace detail

/// Enumerates binary images (h(0), h(1), h(2)) with lengths (l, l+d, l+2d),
/// all positive, by increasing weight and then lexicographically. Candidates
/// are screened on the images of two-letter factors of the base word and of
/// its first screen_letters letters; the least survivor whose image passes
/// the constraint on check_window symbols is returned.
inline SearchOutcome morphism_weight_search(const SearchConstraint& c, std::size_t max_weight,
                                            const MorphismSearchOptions& opts = {}) {
    c.validate();
    SearchOutcome outcome;
    SearchStats& stats = outcome.stats;
    if (max_weight < 3) {
        outcome.status = SearchStatus::exhausted;
        return outcome;
    }
    auto trace = [&](const char* what, std::size_t weight) {
        if (opts.trace) *opts.trace << "weight " << weight << ' ' << what << '\n';
    };

    // Two-letter factors of the base word.
    bool pair[3][3] = {};
    for (std::size_t i = 0; i + 1 < 4096; ++i) pair[opts.base(i)][opts.base(i + 1)] = true;

    const std::size_t max_len = 2 * (max_weight / 3);
    std::vector<std::vector<Word>> words(max_len + 1);
    for (std::size_t len = 1; len <= max_len; ++len) words[len] = detail::admissible_words(c, len);

    for (std::size_t mid = 1; 3 * mid <= max_weight; ++mid) {
        const std::size_t weight = 3 * mid;
        std::vector<std::array<Word, 3>> survivors;
        for (std::ptrdiff_t d = -static_cast<std::ptrdiff_t>(mid) + 1; d < static_cast<std::ptrdiff_t>(mid); ++d) {
            const auto& first = words[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(mid) - d)];
            const auto& middle = words[mid];
            const auto& last = words[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(mid) + d)];
            for (const Word& u0 : first) {
                for (const Word& u1 : middle) {
                    ++stats.nodes_expanded;
                    if ((pair[0][1] && !detail::clean_concat(u0, u1, c)) || (pair[1][0] && !detail::clean_concat(u1, u0, c)) ||
                        (pair[0][0] && !detail::clean_concat(u0, u0, c)) || (pair[1][1] && !detail::clean_concat(u1, u1, c))) {
                        ++stats.prunes["pair"];
                        continue;
                    }
                    SquareTracker after0, after1;
                    std::size_t pushed = 0;
                    detail::push_clean(after0, u0, c, pushed);
                    detail::push_clean(after1, u1, c, pushed);
                    for (const Word& u2 : last) {
                        ++stats.nodes_expanded;
                        bool ok = true;
                        if (pair[0][2]) {
                            ok = detail::push_clean(after0, u2, c, pushed);
                            detail::pop_n(after0, pushed);
                        }
                        if (ok && pair[1][2]) {
                            ok = detail::push_clean(after1, u2, c, pushed);
                            detail::pop_n(after1, pushed);
                        }
                        if (ok && pair[2][0]) ok = detail::clean_concat(u2, u0, c);
                        if (ok && pair[2][1]) ok = detail::clean_concat(u2, u1, c);
                        if (ok && pair[2][2]) ok = detail::clean_concat(u2, u2, c);
                        if (!ok) {
                            ++stats.prunes["pair"];
                            continue;
                        }
                        std::vector<Word> images{u0, u1, u2};
                        Word screen = detail::apply_to_base(images, opts.base, opts.screen_letters);
                        SquareTracker tr;
                        if (!detail::push_clean(tr, screen, c, pushed)) {
                            ++stats.prunes["prefix"];
                            continue;
                        }
                        survivors.push_back({u0, u1, u2});
                    }
                }
            }
        }
        std::sort(survivors.begin(), survivors.end());
        trace(survivors.empty() ? "none" : "screened", weight);
        for (const auto& cand : survivors) {
            std::vector<Word> images(cand.begin(), cand.end());
            std::size_t shortest = std::min({cand[0].size(), cand[1].size(), cand[2].size()});
            Word w = detail::apply_to_base(images, opts.base, c.check_window / shortest + 1);
            w.resize(c.check_window);
            auto report = distinct_squares(w);
            stats.max_depth = std::max(stats.max_depth, w.size());
            if (!c.satisfied_by(report.roots, report.max_order)) {
                ++stats.prunes["window"];
                continue;
            }
            trace("found", weight);
            outcome.status = SearchStatus::found;
            outcome.morphism = Morphism(2, images);
            outcome.witness_prefix = std::move(w);
            return outcome;
        }
    }
    outcome.status = SearchStatus::exhausted;
    return outcome;
}

// ---------------------------------------------------------------------------
// Sweep over (base, states).

struct SweepEntry {
    unsigned base = 0;
    std::size_t states = 0;
    SearchOutcome outcome;
};

/// lexleast_search for every k >= 3 and s >= 1 with k s <= max_product,
/// ordered by (k, s). Work is spread over `threads` workers; the result
/// does not depend on the thread count.
inline std::vector<SweepEntry> ks_sweep(std::size_t max_product, const SearchConstraint& c, std::size_t depth_limit,
                                        unsigned threads = 1) {
    if (max_product < 6) throw DomainError("max product must be at least 6");
    c.validate();
    std::vector<SweepEntry> entries;
    for (unsigned k = 3; k <= max_product; ++k)
        for (std::size_t s = 1; k * s <= max_product; ++s) entries.push_back({k, s, {}});

    threads = std::max(1u, threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < entries.size(); i += threads)
                entries[i].outcome = lexleast_search(entries[i].base, entries[i].states, c, depth_limit);
        });
    }
    for (auto& th : pool) th.join();
    return entries;
}

// ---------------------------------------------------------------------------
// Outcome text.

inline void write_outcome(std::ostream& os, const SearchOutcome& o) {
    os << "status: " << to_string(o.status) << '\n';
    os << "nodes: " << o.stats.nodes_expanded << '\n';
    os << "max_depth: " << o.stats.max_depth << '\n';
    for (const auto& [reason, count] : o.stats.prunes) os << "pruned_" << reason << ": " << count << '\n';
    if (!o.note.empty()) os << "note: " << o.note << '\n';
    if (o.witness_prefix) {
        Word head(o.witness_prefix->begin(), o.witness_prefix->begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(64, o.witness_prefix->size())));
        os << "prefix: " << format_word(head) << '\n';
    }
    if (o.status == SearchStatus::found && o.dfao) write_dfao(os, *o.dfao);
    if (o.status == SearchStatus::found && o.morphism) write_morphism(os, *o.morphism);
}

} // namespace fewsq
