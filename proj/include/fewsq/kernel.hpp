#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fewsq/dfao.hpp"
#include "fewsq/error.hpp"
#include "fewsq/word.hpp"

// Residual sequences of a sequence x in base k.
//
// Reading the digits of m (MSD first) leaves an automaton in a state whose
// future behaviour is the residual of m: reading a further digit string v of
// length L yields x[m k^L + [v]]. We flatten it level by level:
//
//   x[m], x[mk], ..., x[mk + k - 1], x[mk^2], ..., x[mk^2 + k^2 - 1], ...
//
// Two digit strings lead to the same state of the minimal automaton iff their
// residuals coincide. A pair (e, r) with r < k^e denotes the residual after
// reading r written with e digits; leading zeros do not change it.

namespace fewsq {

namespace detail {

inline Index checked_mul(Index a, Index b) {
    if (b != 0 && a > std::numeric_limits<Index>::max() / b) throw DomainError("index arithmetic overflows 64 bits");
    return a * b;
}

inline Index ipow(Index k, unsigned e) {
    Index r = 1;
    for (unsigned i = 0; i < e; ++i) r = checked_mul(r, k);
    return r;
}

} // namespace detail

/// First `length` terms of the flattened residual of m.
inline Word residual_signature(const SequenceAccessor& x, unsigned k, Index m, std::size_t length) {
    Word sig;
    sig.reserve(length);
    Index width = 1;
    Index base = m;
    while (sig.size() < length) {
        for (Index j = 0; j < width && sig.size() < length; ++j) sig.push_back(x(base + j));
        width = detail::checked_mul(width, k);
        base = detail::checked_mul(base, k);
    }
    return sig;
}

/// Equivalence classes of residuals (e, r), 0 <= e <= depth, 0 <= r < k^e,
/// under agreement on the first `comparison_length` flattened terms.
struct KernelProfile {
    unsigned depth = 0;
    std::size_t comparison_length = 0;
    std::size_t class_count = 0;
    /// Classes numbered by first appearance in (e, r) lexicographic order.
    std::vector<std::vector<std::pair<unsigned, Index>>> classes;
};

inline KernelProfile kernel_profile(const SequenceAccessor& x, unsigned k, unsigned depth, std::size_t comparison_length) {
    KernelProfile prof;
    prof.depth = depth;
    prof.comparison_length = comparison_length;
    std::map<Word, std::size_t> ids;
    for (unsigned e = 0; e <= depth; ++e) {
        Index count = detail::ipow(k, e);
        for (Index r = 0; r < count; ++r) {
            auto [it, fresh] = ids.emplace(residual_signature(x, k, r, comparison_length), ids.size());
            if (fresh) prof.classes.emplace_back();
            prof.classes[it->second].emplace_back(e, r);
        }
    }
    prof.class_count = prof.classes.size();
    return prof;
}

/// Builds the automaton whose states are residual classes, discovered
/// breadth-first from m = 0 (state m on digit c goes to m k + c), then checks
/// that it regenerates x[0 .. verify_length). Residuals are compared on
/// `comparison_length` flattened terms, so this is a semi-decision: a wrong
/// merge shows up as a regeneration mismatch.
inline Dfao learn_from_prefix(const SequenceAccessor& x, unsigned k, std::size_t comparison_length,
                              std::size_t max_states, std::size_t verify_length = std::size_t{1} << 16) {
    if (k < 2) throw DomainError("base must be at least 2");
    if (comparison_length < 2) throw DomainError("comparison length must be at least 2");

    std::map<Word, StateId> ids;
    std::vector<Index> reps;
    std::vector<StateId> trans;
    Word out;
    try {
        auto intern = [&](Index m) {
            auto [it, fresh] = ids.emplace(residual_signature(x, k, m, comparison_length), static_cast<StateId>(reps.size()));
            if (fresh) {
                if (reps.size() >= max_states)
                    throw BudgetError("more than " + std::to_string(max_states) + " residual classes");
                reps.push_back(m);
            }
            return it->second;
        };
        intern(0);
        for (std::size_t head = 0; head < reps.size(); ++head) {
            out.push_back(x(reps[head]));
            for (unsigned c = 0; c < k; ++c) trans.push_back(intern(detail::checked_mul(reps[head], k) + c));
        }
    } catch (const std::out_of_range&) {
        throw InconsistencyError("residual comparison reads past the available prefix; lower the comparison length");
    }

    Dfao d(k, 0, std::move(trans), std::move(out));
    Word regenerated = generate_prefix(d, verify_length);
    for (std::size_t i = 0; i < verify_length; ++i) {
        Symbol expected;
        try {
            expected = x(i);
        } catch (const std::out_of_range&) {
            break;
        }
        if (regenerated[i] != expected)
            throw InconsistencyError("learned automaton disagrees with the sequence at index " + std::to_string(i) +
                                     "; comparison length too small");
    }
    return d;
}

namespace detail {

// Members of `group` agree on all levels below `level`. Returns the largest
// number of pairwise-distinguishable residuals among them.
inline std::size_t max_antichain(std::span<const Symbol> w, unsigned k, std::vector<Index>& group,
                                 const std::vector<unsigned>& full_levels, unsigned level, Index width) {
    bool ends_here = level > 0 && std::any_of(group.begin(), group.end(), [&](Index m) { return full_levels[m] + 1 == level; });
    std::vector<Index> cont;
    for (Index m : group)
        if (full_levels[m] >= level) cont.push_back(m);
    if (cont.empty()) return ends_here ? 1 : 0;

    auto block = [&](Index m) { return w.subspan(static_cast<std::size_t>(m * width), static_cast<std::size_t>(width)); };
    std::sort(cont.begin(), cont.end(), [&](Index a, Index b) {
        auto x = block(a), y = block(b);
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    });
    std::size_t total = 0;
    for (std::size_t i = 0; i < cont.size();) {
        std::size_t j = i + 1;
        auto bi = block(cont[i]);
        while (j < cont.size() && std::ranges::equal(bi, block(cont[j]))) ++j;
        std::vector<Index> child(cont.begin() + static_cast<std::ptrdiff_t>(i), cont.begin() + static_cast<std::ptrdiff_t>(j));
        total += max_antichain(w, k, child, full_levels, level + 1, width * k);
        i = j;
    }
    return std::max<std::size_t>(ends_here ? 1 : 0, total);
}

} // namespace detail

/// Number of pairwise-distinguishable residuals of m < k^depth visible in w.
/// Residual m is observed on every complete level L with (m + 1) k^L <= |w|;
/// two residuals are distinguishable when they differ on a level both
/// observe. Such residuals need distinct states in any leading-zero-invariant
/// automaton generating an extension of w, so the result never exceeds the
/// minimal state count. The maximum is exact: observations of one residual
/// are prefixes of the flattened layout, so this is a maximum antichain in a
/// trie, solved bottom-up.
inline std::size_t kernel_lower_bound(std::span<const Symbol> w, unsigned k, unsigned depth) {
    if (k < 2) throw DomainError("base must be at least 2");
    const Index n = w.size();
    if (n == 0) return 0;
    Index candidates = 1;
    for (unsigned e = 0; e < depth && candidates < n; ++e) candidates *= k;
    candidates = std::min(candidates, n);

    std::vector<unsigned> full_levels(static_cast<std::size_t>(candidates));
    for (Index m = 0; m < candidates; ++m) {
        unsigned L = 0;
        Index span = m + 1;
        while (span * k <= n) {
            span *= k;
            ++L;
        }
        full_levels[static_cast<std::size_t>(m)] = L;
    }
    std::vector<Index> all(static_cast<std::size_t>(candidates));
    for (Index m = 0; m < candidates; ++m) all[static_cast<std::size_t>(m)] = m;
    return detail::max_antichain(w, k, all, full_levels, 0, 1);
}

inline std::size_t kernel_lower_bound(const Word& w, unsigned k, unsigned depth) {
    return kernel_lower_bound(std::span<const Symbol>(w), k, depth);
}

} // namespace fewsq
