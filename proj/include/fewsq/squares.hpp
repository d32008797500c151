#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "fewsq/word.hpp"

namespace fewsq {

/// Leftmost occurrence of a square xx: start position and order |x|.
struct SquareOccurrence {
    std::size_t position = 0;
    std::size_t order = 0;
    friend bool operator==(const SquareOccurrence&, const SquareOccurrence&) = default;
};

struct SquareReport {
    RootSet roots;
    std::size_t max_order = 0;
    /// One entry per root, in root order.
    std::vector<SquareOccurrence> occurrences;
};

namespace detail {

/// Bit-sliced view of a word: plane b holds bit b of every symbol, 64 positions per chunk.
class BitPlanes {
public:
    explicit BitPlanes(const Word& w) : n_(w.size()), chunks_((w.size() + 63) / 64 + 1) {
        unsigned bits = std::max(1u, static_cast<unsigned>(std::bit_width(max_symbol(w))));
        planes_.assign(bits, std::vector<std::uint64_t>(chunks_, 0));
        for (std::size_t i = 0; i < n_; ++i)
            for (unsigned b = 0; b < bits; ++b)
                if ((w[i] >> b) & 1u) planes_[b][i / 64] |= std::uint64_t{1} << (i % 64);
    }

    /// Bit i set iff w[i] == w[i + p], for i < n - p.
    std::vector<std::uint64_t> match_mask(std::size_t p) const {
        const std::size_t len = n_ > p ? n_ - p : 0;
        const std::size_t words = (len + 63) / 64;
        std::vector<std::uint64_t> mask(words + 1, 0);
        const std::size_t q = p / 64;
        const unsigned r = static_cast<unsigned>(p % 64);
        for (std::size_t j = 0; j < words; ++j) {
            std::uint64_t eq = ~std::uint64_t{0};
            for (const auto& plane : planes_) {
                std::uint64_t lo = plane[j + q];
                std::uint64_t hi = (j + q + 1 < chunks_) ? plane[j + q + 1] : 0;
                std::uint64_t shifted = r ? (lo >> r) | (hi << (64 - r)) : lo;
                eq &= ~(plane[j] ^ shifted);
            }
            mask[j] = eq;
        }
        if (len % 64) mask[words - 1] &= (std::uint64_t{1} << (len % 64)) - 1;
        return mask;
    }

    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::size_t chunks_;
    std::vector<std::vector<std::uint64_t>> planes_;
};

/// out[i] = a[i + t] (bitwise), zero-filled.
inline std::vector<std::uint64_t> shift_down(const std::vector<std::uint64_t>& a, std::size_t t) {
    std::vector<std::uint64_t> out(a.size(), 0);
    const std::size_t q = t / 64;
    const unsigned r = static_cast<unsigned>(t % 64);
    for (std::size_t j = 0; j + q < a.size(); ++j) {
        std::uint64_t lo = a[j + q];
        std::uint64_t hi = j + q + 1 < a.size() ? a[j + q + 1] : 0;
        out[j] = r ? (lo >> r) | (hi << (64 - r)) : lo;
    }
    return out;
}

/// Bit s set iff mask[s .. s + len) are all set.
inline std::vector<std::uint64_t> erode(std::vector<std::uint64_t> mask, std::size_t len) {
    // run[i] covers `have` consecutive ones; combine by binary decomposition of len.
    std::vector<std::uint64_t> result;
    std::size_t done = 0;
    std::size_t have = 1;
    std::vector<std::uint64_t> run = std::move(mask);
    while (len) {
        if (len & 1) {
            if (result.empty()) {
                result = run;
            } else {
                auto moved = shift_down(run, done);
                for (std::size_t j = 0; j < result.size(); ++j) result[j] &= moved[j];
            }
            done += have;
        }
        len >>= 1;
        if (len) {
            auto moved = shift_down(run, have);
            for (std::size_t j = 0; j < run.size(); ++j) run[j] &= moved[j];
            have *= 2;
        }
    }
    return result;
}

inline bool any_set(const std::vector<std::uint64_t>& v) {
    return std::any_of(v.begin(), v.end(), [](std::uint64_t x) { return x != 0; });
}

/// Could mask contain p consecutive ones? Exact for p < 128; a cheap necessary
/// condition (some full chunk) beyond.
inline bool may_hold_run(const std::vector<std::uint64_t>& mask, std::size_t p) {
    if (p < 128) return any_set(mask);
    return std::any_of(mask.begin(), mask.end(), [](std::uint64_t x) { return x == ~std::uint64_t{0}; });
}

/// Start positions of squares of order p.
inline std::vector<std::uint64_t> square_starts(const BitPlanes& planes, std::size_t p) {
    auto mask = planes.match_mask(p);
    if (!may_hold_run(mask, p)) return {};
    return erode(std::move(mask), p);
}

/// Polynomial hashes modulo 2^61 - 1 for O(1) factor fingerprints.
class FactorHash {
public:
    explicit FactorHash(const Word& w) : prefix_(w.size() + 1, 0), power_(w.size() + 1, 1) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            prefix_[i + 1] = add(mul(prefix_[i], kBase), w[i] + 1);
            power_[i + 1] = mul(power_[i], kBase);
        }
    }

    std::uint64_t operator()(std::size_t pos, std::size_t len) const {
        return sub(prefix_[pos + len], mul(prefix_[pos], power_[len]));
    }

private:
    static constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
    static constexpr std::uint64_t kBase = 1'000'003;

    static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
        unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
        std::uint64_t r = static_cast<std::uint64_t>(z & kMod) + static_cast<std::uint64_t>(z >> 61);
        return r >= kMod ? r - kMod : r;
    }
    static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
        std::uint64_t r = a + b;
        return r >= kMod ? r - kMod : r;
    }
    static std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kMod - b; }

    std::vector<std::uint64_t> prefix_;
    std::vector<std::uint64_t> power_;
};

template <class F>
void for_each_set_bit(const std::vector<std::uint64_t>& bits, F&& f) {
    for (std::size_t j = 0; j < bits.size(); ++j) {
        std::uint64_t x = bits[j];
        while (x) {
            f(j * 64 + static_cast<std::size_t>(std::countr_zero(x)));
            x &= x - 1;
        }
    }
}

} // namespace detail

/// Every x such that xx is a factor of w, with its leftmost occurrence.
inline SquareReport distinct_squares(const Word& w) {
    SquareReport report;
    const std::size_t n = w.size();
    if (n < 2) return report;
    detail::BitPlanes planes(w);
    detail::FactorHash hash(w);
    std::vector<std::pair<Word, SquareOccurrence>> found;
    for (std::size_t p = 1; 2 * p <= n; ++p) {
        auto starts = detail::square_starts(planes, p);
        if (starts.empty()) continue;
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
        detail::for_each_set_bit(starts, [&](std::size_t s) {
            auto& bucket = seen[hash(s, p)];
            for (std::size_t t : bucket)
                if (std::equal(w.begin() + static_cast<std::ptrdiff_t>(t), w.begin() + static_cast<std::ptrdiff_t>(t + p),
                               w.begin() + static_cast<std::ptrdiff_t>(s)))
                    return;
            bucket.push_back(s);
            found.emplace_back(Word(w.begin() + static_cast<std::ptrdiff_t>(s), w.begin() + static_cast<std::ptrdiff_t>(s + p)),
                               SquareOccurrence{s, p});
        });
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return ShortLex{}(a.first, b.first); });
    for (auto& [root, occ] : found) {
        report.max_order = std::max(report.max_order, root.size());
        report.occurrences.push_back(occ);
        report.roots.insert(std::move(root));
    }
    return report;
}

/// Largest order of a square factor, 0 if w is squarefree. Scans orders
/// downward and stops at the first hit.
inline std::size_t max_square_order(const Word& w) {
    if (w.size() < 2) return 0;
    detail::BitPlanes planes(w);
    for (std::size_t p = w.size() / 2; p >= 1; --p)
        if (detail::any_set(detail::square_starts(planes, p))) return p;
    return 0;
}

/// True iff w has a square factor of order at least min_order.
inline bool has_square_of_order_at_least(const Word& w, std::size_t min_order) {
    detail::BitPlanes planes(w);
    for (std::size_t p = std::max<std::size_t>(min_order, 1); 2 * p <= w.size(); ++p)
        if (detail::any_set(detail::square_starts(planes, p))) return true;
    return false;
}

inline bool has_factor(const Word& w, const Word& f) {
    return std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end();
}

/// A factor w[position, position + length) with period `period`; its exponent is length / period.
struct FractionalPower {
    std::size_t position = 0;
    std::size_t length = 1;
    std::size_t period = 1;

    double value() const { return static_cast<double>(length) / static_cast<double>(period); }
    /// Compares length/period against num/den exactly.
    int compare(std::size_t num, std::size_t den) const {
        unsigned __int128 lhs = static_cast<unsigned __int128>(length) * den;
        unsigned __int128 rhs = static_cast<unsigned __int128>(num) * period;
        return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    }
};

/// Largest exponent length/period over all factors; ties go to the smallest
/// period. A word with no nontrivial period gives exponent 1.
inline FractionalPower max_fractional_power(const Word& w) {
    FractionalPower best;
    const std::size_t n = w.size();
    if (n == 0) return best;
    detail::BitPlanes planes(w);
    for (std::size_t q = 1; q < n; ++q) {
        auto mask = planes.match_mask(q);
        // Longest run of ones in mask and where it starts.
        std::size_t run = 0, run_start = 0, longest = 0, longest_start = 0;
        for (std::size_t j = 0; j < mask.size(); ++j) {
            std::uint64_t x = mask[j];
            if (x == ~std::uint64_t{0}) {
                if (run == 0) run_start = j * 64;
                run += 64;
                continue;
            }
            for (unsigned b = 0; b < 64;) {
                if ((x >> b) & 1u) {
                    if (run == 0) run_start = j * 64 + b;
                    unsigned ones = static_cast<unsigned>(std::countr_one(x >> b));
                    run += ones;
                    b += ones;
                } else {
                    if (run > longest) {
                        longest = run;
                        longest_start = run_start;
                    }
                    run = 0;
                    b += x >> b ? static_cast<unsigned>(std::countr_zero(x >> b)) : 64 - b;
                }
            }
        }
        if (run > longest) {
            longest = run;
            longest_start = run_start;
        }
        FractionalPower cand{longest_start, longest + q, q};
        if (longest > 0 && cand.compare(best.length, best.period) > 0) best = cand;
    }
    return best;
}

/// Outcome of comparing the roots of a window against an expected set.
struct SquareCheck {
    std::size_t window = 0;
    SquareReport report;
    RootSet missing;
    RootSet extra;
    bool pass = false;
};

inline SquareCheck compare_roots(SquareReport report, std::size_t window, const RootSet& expected) {
    SquareCheck check;
    check.window = window;
    for (const Word& r : expected)
        if (!report.roots.count(r)) check.missing.insert(r);
    for (const Word& r : report.roots)
        if (!expected.count(r)) check.extra.insert(r);
    check.pass = check.missing.empty() && check.extra.empty();
    check.report = std::move(report);
    return check;
}

/// distinct_squares on x[0 .. window) compared against `expected`.
inline SquareCheck assert_square_set(const SequenceAccessor& x, std::size_t window, const RootSet& expected) {
    return compare_roots(distinct_squares(take(x, window)), window, expected);
}

/// Incrementally maintained root set of a growing word, with undo. Used by
/// the searches: push reports the roots new at the last position.
class SquareTracker {
public:
    /// Appends s; returns the number of roots it introduced.
    std::size_t push(Symbol s) {
        w_.push_back(s);
        const std::size_t n = w_.size();
        std::size_t added = 0;
        std::size_t order = max_order_.empty() ? 0 : max_order_.back();
        for (std::size_t p = 1; 2 * p <= n; ++p) {
            bool square = true;
            for (std::size_t t = 0; t < p; ++t) {
                if (w_[n - 1 - t] != w_[n - 1 - p - t]) {
                    square = false;
                    break;
                }
            }
            if (!square) continue;
            order = std::max(order, p);
            Word root(w_.end() - static_cast<std::ptrdiff_t>(p), w_.end());
            if (roots_.insert(root).second) {
                history_.push_back(std::move(root));
                ++added;
            }
        }
        added_.push_back(added);
        max_order_.push_back(order);
        return added;
    }

    void pop() {
        for (std::size_t i = 0; i < added_.back(); ++i) {
            roots_.erase(history_.back());
            history_.pop_back();
        }
        added_.pop_back();
        max_order_.pop_back();
        w_.pop_back();
    }

    const Word& word() const noexcept { return w_; }
    const RootSet& roots() const noexcept { return roots_; }
    std::size_t max_order() const noexcept { return max_order_.empty() ? 0 : max_order_.back(); }

private:
    Word w_;
    RootSet roots_;
    std::vector<Word> history_;
    std::vector<std::size_t> added_;
    std::vector<std::size_t> max_order_;
};

// ---------------------------------------------------------------------------
// Report text:
//
//   roots: 0,1,10
//   max_order: 2
//   verdict: pass

inline std::string format_roots(const RootSet& roots) {
    std::string out;
    bool wide = std::any_of(roots.begin(), roots.end(), [](const Word& r) { return max_symbol(r) >= 10; });
    for (const Word& r : roots) {
        if (!out.empty()) out += wide ? " " : ",";
        out += format_word(r);
    }
    return out;
}

inline RootSet parse_roots(const std::string& text) {
    RootSet roots;
    std::size_t i = 0;
    while (i <= text.size()) {
        std::size_t j = text.find(',', i);
        if (j == std::string::npos) j = text.size();
        if (j > i) roots.insert(parse_word(std::string_view(text).substr(i, j - i)));
        i = j + 1;
    }
    return roots;
}

inline void write_report(std::ostream& os, const SquareReport& r) {
    os << "roots: " << format_roots(r.roots) << '\n';
    os << "max_order: " << r.max_order << '\n';
}

inline void write_check(std::ostream& os, const SquareCheck& c) {
    write_report(os, c.report);
    if (!c.missing.empty()) os << "missing: " << format_roots(c.missing) << '\n';
    if (!c.extra.empty()) os << "extra: " << format_roots(c.extra) << '\n';
    os << "verdict: " << (c.pass ? "pass" : "fail") << '\n';
}

} // namespace fewsq
