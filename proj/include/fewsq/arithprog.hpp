#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>

#include "fewsq/error.hpp"
#include "fewsq/morphism.hpp"
#include "fewsq/word.hpp"

// Direct access into h(vtm) when |h(0)|, |h(1)|, |h(2)| = a, a+b, a+2b.
//
// vtm is the first difference of the Thue-Morse word t shifted up by one,
// vtm[i] = 1 + t[i+1] - t[i], so the first n blocks of h(vtm) have total
// length (a+b) n + b t[n]. Block i therefore starts at (a+b) i + b t[i] and
// the block holding position n is found from n div (a+b).

namespace fewsq {

inline unsigned thue_morse(Index n) { return static_cast<unsigned>(std::popcount(n) & 1); }

inline Symbol vtm_symbol(Index i) {
    return static_cast<Symbol>(1 + static_cast<int>(thue_morse(i + 1)) - static_cast<int>(thue_morse(i)));
}

/// A morphism on {0,1,2} whose image lengths form an arithmetic progression.
class ApParams {
public:
    /// Recomputes a and b from the image lengths; rejects anything that is not an AP.
    explicit ApParams(Morphism h) : h_(std::move(h)) {
        if (h_.domain_size() != 3) throw DomainError("arithmetic-progression morphisms act on {0,1,2}");
        auto len = [&](Symbol s) { return static_cast<std::int64_t>(h_.image(s).size()); };
        a_ = len(0);
        b_ = len(1) - len(0);
        if (len(2) != a_ + 2 * b_)
            throw DomainError("image lengths " + std::to_string(len(0)) + ", " + std::to_string(len(1)) + ", " +
                              std::to_string(len(2)) + " are not in arithmetic progression");
        if (a_ < 1 || a_ + 2 * b_ < 1) throw DomainError("every image must be nonempty");
    }

    std::int64_t a() const noexcept { return a_; }
    std::int64_t b() const noexcept { return b_; }
    const Morphism& morphism() const noexcept { return h_; }

private:
    Morphism h_;
    std::int64_t a_ = 0;
    std::int64_t b_ = 0;
};

/// |h(vtm[0 .. n))| = (a+b) n + b t[n].
inline std::int64_t image_length(const ApParams& p, Index n) {
    return (p.a() + p.b()) * static_cast<std::int64_t>(n) + p.b() * thue_morse(n);
}

/// Which branch of the block-location rule serves index n (1..5), for b >= 0:
///   1: t[n'] = 0                      -> h(c(n'))[m]
///   2: t[n'] = 1, t[n'-1] = 0, m < b  -> h(c(n'-1))[m + a + b]
///   3: t[n'] = 1, t[n'-1] = 0, m >= b -> h(c(n'))[m - b]
///   4: t[n'] = 1, t[n'-1] = 1, m < b  -> h(c(n'-1))[m + a]
///   5: t[n'] = 1, t[n'-1] = 1, m >= b -> h(c(n'))[m - b]
/// with n' = n div (a+b) and m = n mod (a+b).
inline int direct_access_case(const ApParams& p, Index n) {
    const auto period = static_cast<Index>(p.a() + p.b());
    const Index block = n / period;
    const auto m = static_cast<std::int64_t>(n % period);
    if (thue_morse(block) == 0) return 1;
    // t[0] = 0, so block >= 1 here and block - 1 is defined.
    assert(block >= 1);
    bool prev = thue_morse(block - 1) == 1;
    bool low = m < p.b();
    return prev ? (low ? 4 : 5) : (low ? 2 : 3);
}

/// (h(vtm))[n] in constant time.
inline Symbol direct_access(const ApParams& p, Index n) {
    const Morphism& h = p.morphism();
    const std::int64_t a = p.a(), b = p.b();
    const auto period = static_cast<Index>(a + b);
    const Index block = n / period;
    const auto m = static_cast<std::int64_t>(n % period);
    auto at = [&](Index i, std::int64_t offset) { return h.image(vtm_symbol(i))[static_cast<std::size_t>(offset)]; };

    if (b >= 0) {
        switch (direct_access_case(p, n)) {
        case 1: return at(block, m);
        case 2: return at(block - 1, m + a + b);
        case 3: return at(block, m - b);
        case 4: return at(block - 1, m + a);
        default: return at(block, m - b);
        }
    }
    // Decreasing progression: block starts can run ahead of (a+b) i, so the
    // target block is one of block, block + 1.
    const auto pos = static_cast<std::int64_t>(n);
    Index i = block;
    if (pos >= image_length(p, i + 1)) ++i;
    return at(i, pos - image_length(p, i));
}

inline SequenceAccessor ap_sequence_accessor(ApParams p) {
    return [p = std::move(p)](Index n) { return direct_access(p, n); };
}

} // namespace fewsq
