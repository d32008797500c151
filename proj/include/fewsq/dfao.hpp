#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fewsq/error.hpp"
#include "fewsq/morphism.hpp"
#include "fewsq/word.hpp"

namespace fewsq {

using StateId = std::uint32_t;

/// Deterministic finite automaton with output reading base-k digits,
/// most significant digit first.
class Dfao {
public:
    Dfao() = default;

    /// `transitions` is row-major: transitions[p * base + digit].
    Dfao(unsigned base, StateId initial, std::vector<StateId> transitions, Word outputs)
        : base_(base), initial_(initial), transitions_(std::move(transitions)), outputs_(std::move(outputs)) {
        if (base_ < 2) throw DomainError("base must be at least 2");
        if (outputs_.empty()) throw DomainError("automaton needs at least one state");
        if (transitions_.size() != outputs_.size() * base_)
            throw DomainError("transition table does not have base entries per state");
        if (initial_ >= outputs_.size()) throw DomainError("initial state out of range");
        for (StateId t : transitions_)
            if (t >= outputs_.size()) throw DomainError("transition target out of range");
    }

    unsigned base() const noexcept { return base_; }
    std::size_t state_count() const noexcept { return outputs_.size(); }
    StateId initial() const noexcept { return initial_; }
    StateId next(StateId p, unsigned digit) const { return transitions_[static_cast<std::size_t>(p) * base_ + digit]; }
    Symbol output(StateId p) const { return outputs_[p]; }
    const Word& outputs() const noexcept { return outputs_; }
    const std::vector<StateId>& transitions() const noexcept { return transitions_; }

    /// State reached after reading `digits` (MSD first) from the initial state.
    StateId run(const std::vector<unsigned>& digits) const {
        StateId p = initial_;
        for (unsigned d : digits) {
            if (d >= base_) throw DomainError("digit " + std::to_string(d) + " is not valid in base " + std::to_string(base_));
            p = next(p, d);
        }
        return p;
    }

    friend bool operator==(const Dfao&, const Dfao&) = default;

private:
    unsigned base_ = 2;
    StateId initial_ = 0;
    std::vector<StateId> transitions_;
    Word outputs_;
};

/// Canonical base-k digits of n, MSD first. Zero is the single digit 0.
inline std::vector<unsigned> digits_msd(Index n, unsigned base) {
    std::vector<unsigned> d;
    do {
        d.push_back(static_cast<unsigned>(n % base));
        n /= base;
    } while (n > 0);
    std::reverse(d.begin(), d.end());
    return d;
}

inline Symbol eval(const Dfao& d, Index n) { return d.output(d.run(digits_msd(n, d.base()))); }

inline Symbol eval_digits(const Dfao& d, const std::vector<unsigned>& digits) { return d.output(d.run(digits)); }

/// eval(d, 0), ..., eval(d, n-1) in linear time: the state for i >= k is the
/// successor of the state for i / k on digit i mod k.
inline Word generate_prefix(const Dfao& d, std::size_t n) {
    const unsigned k = d.base();
    std::vector<StateId> state(n);
    Word out(n);
    for (std::size_t i = 0; i < n; ++i) {
        state[i] = i < k ? d.next(d.initial(), static_cast<unsigned>(i)) : d.next(state[i / k], static_cast<unsigned>(i % k));
        out[i] = d.output(state[i]);
    }
    return out;
}

inline SequenceAccessor dfao_accessor(Dfao d) {
    return [d = std::move(d)](Index n) { return eval(d, n); };
}

/// States reachable from the initial state, in BFS order (digits ascending).
inline std::vector<StateId> bfs_order(const Dfao& d) {
    std::vector<StateId> order{d.initial()};
    std::vector<bool> seen(d.state_count(), false);
    seen[d.initial()] = true;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (unsigned c = 0; c < d.base(); ++c) {
            StateId t = d.next(order[head], c);
            if (!seen[t]) {
                seen[t] = true;
                order.push_back(t);
            }
        }
    }
    return order;
}

/// Drops unreachable states and renumbers in BFS order; the initial state becomes 0.
inline Dfao canonical(const Dfao& d) {
    auto order = bfs_order(d);
    std::vector<StateId> id(d.state_count(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<StateId>(i);
    std::vector<StateId> trans;
    Word out;
    trans.reserve(order.size() * d.base());
    for (StateId p : order) {
        out.push_back(d.output(p));
        for (unsigned c = 0; c < d.base(); ++c) trans.push_back(id[d.next(p, c)]);
    }
    return Dfao(d.base(), 0, std::move(trans), std::move(out));
}

inline bool is_normalized(const Dfao& d) { return d.next(d.initial(), 0) == d.initial(); }

/// Makes leading zeros harmless. If the initial state does not loop on 0, a
/// fresh initial state is added that loops on 0, outputs eval(0), and
/// otherwise copies the old initial state's transitions. Eval on canonical
/// representations is unchanged. Unreachable states are dropped.
inline Dfao normalize(const Dfao& d) {
    if (is_normalized(d)) return d;
    const unsigned k = d.base();
    auto fresh = static_cast<StateId>(d.state_count());
    std::vector<StateId> trans = d.transitions();
    Word out = d.outputs();
    out.push_back(d.output(d.next(d.initial(), 0)));
    trans.push_back(fresh);
    for (unsigned c = 1; c < k; ++c) trans.push_back(d.next(d.initial(), c));
    return canonical(Dfao(k, fresh, std::move(trans), std::move(out)));
}

/// Moore partition refinement on the reachable part, starting from the
/// partition by output. The result is canonical (BFS numbering).
inline Dfao minimize(const Dfao& input) {
    const Dfao d = canonical(normalize(input));
    const unsigned k = d.base();
    const std::size_t n = d.state_count();

    std::vector<std::size_t> block(n);
    std::size_t block_count = 0;
    {
        std::map<Symbol, std::size_t> ids;
        for (std::size_t p = 0; p < n; ++p) {
            auto [it, fresh] = ids.emplace(d.output(static_cast<StateId>(p)), ids.size());
            block[p] = it->second;
        }
        block_count = ids.size();
    }
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> ids;
        std::vector<std::size_t> refined(n);
        std::vector<std::size_t> key(k + 1);
        for (std::size_t p = 0; p < n; ++p) {
            key[0] = block[p];
            for (unsigned c = 0; c < k; ++c) key[c + 1] = block[d.next(static_cast<StateId>(p), c)];
            auto [it, fresh] = ids.emplace(key, ids.size());
            refined[p] = it->second;
        }
        block.swap(refined);
        if (ids.size() == block_count) break;
        block_count = ids.size();
    }

    std::vector<StateId> trans(block_count * k);
    Word out(block_count);
    for (std::size_t p = 0; p < n; ++p) {
        out[block[p]] = d.output(static_cast<StateId>(p));
        for (unsigned c = 0; c < k; ++c)
            trans[block[p] * k + c] = static_cast<StateId>(block[d.next(static_cast<StateId>(p), c)]);
    }
    return canonical(Dfao(k, static_cast<StateId>(block[d.initial()]), std::move(trans), std::move(out)));
}

/// Cobham: one state per letter, state a on digit j goes to m(a)[j], output c(a).
inline Dfao from_morphic(const Morphism& m, const Coding& c) {
    auto k = is_uniform(m);
    if (!k) throw DomainError("morphism is not uniform; no automaton of this shape exists");
    if (*k < 2) throw DomainError("morphism must be k-uniform with k >= 2");
    if (!is_prolongable(m, 0)) throw DomainError("morphism is not prolongable on symbol 0");
    if (c.domain_size() < m.domain_size()) throw DomainError("coding does not cover the morphism alphabet");
    std::vector<StateId> trans;
    Word out;
    for (std::size_t a = 0; a < m.domain_size(); ++a) {
        for (Symbol s : m.image(static_cast<Symbol>(a))) trans.push_back(s);
        out.push_back(c(static_cast<Symbol>(a)));
    }
    return Dfao(static_cast<unsigned>(*k), 0, std::move(trans), std::move(out));
}

/// Converse direction: morphism over state ids, image of p = (delta(p,0), ..., delta(p,k-1)),
/// coding = outputs. States are renumbered canonically so the seed is 0.
inline MorphicSystem to_morphic(const Dfao& input) {
    const Dfao d = canonical(normalize(input));
    std::vector<Word> images(d.state_count());
    for (std::size_t p = 0; p < d.state_count(); ++p)
        for (unsigned c = 0; c < d.base(); ++c) images[p].push_back(d.next(static_cast<StateId>(p), c));
    Symbol top = max_symbol(d.outputs());
    return {Morphism(d.state_count(), std::move(images)), Coding(static_cast<std::size_t>(top) + 1, d.outputs())};
}

/// Automaton for n -> m(x[n div L])[n mod L], where x is d's word and m is L-uniform.
/// States are pairs (state of d, remainder); reading digit c from (p, r) feeds
/// quotient digit (k r + c) div L to d and keeps remainder (k r + c) mod L.
inline Dfao uniform_image(const Dfao& input, const Morphism& m) {
    auto len = is_uniform(m);
    if (!len) throw DomainError("image morphism is not uniform");
    if (*len == 0) throw DomainError("image morphism erases every letter");
    const Dfao d = normalize(input);
    for (Symbol s : d.outputs())
        if (s >= m.domain_size()) throw DomainError("image morphism does not cover the automaton's outputs");

    const unsigned k = d.base();
    const std::size_t L = *len;
    std::map<std::pair<StateId, std::size_t>, StateId> ids;
    std::vector<std::pair<StateId, std::size_t>> pairs;
    auto intern = [&](StateId p, std::size_t r) {
        auto [it, fresh] = ids.emplace(std::make_pair(p, r), static_cast<StateId>(pairs.size()));
        if (fresh) pairs.emplace_back(p, r);
        return it->second;
    };
    intern(d.initial(), 0);
    std::vector<StateId> trans;
    Word out;
    for (std::size_t head = 0; head < pairs.size(); ++head) {
        auto [p, r] = pairs[head];
        out.push_back(m.image(d.output(p))[r]);
        for (unsigned c = 0; c < k; ++c) {
            std::size_t v = k * r + c;
            trans.push_back(intern(d.next(p, static_cast<unsigned>(v / L)), v % L));
        }
    }
    return normalize(Dfao(k, 0, std::move(trans), std::move(out)));
}

// ---------------------------------------------------------------------------
// Text format:
//
//   dfao base=2 states=3 initial=0
//   0 1 : 0 1
//   1 0 : 2 0
//   2 1 : 1 2
//
// Written canonically (BFS order from the initial state, digits ascending).

inline void write_dfao(std::ostream& os, const Dfao& input) {
    const Dfao d = canonical(input);
    os << "dfao base=" << d.base() << " states=" << d.state_count() << " initial=" << d.initial() << '\n';
    for (std::size_t p = 0; p < d.state_count(); ++p) {
        os << p << ' ' << d.output(static_cast<StateId>(p)) << " :";
        for (unsigned c = 0; c < d.base(); ++c) os << ' ' << d.next(static_cast<StateId>(p), c);
        os << '\n';
    }
}

inline std::string to_text(const Dfao& d) {
    std::ostringstream os;
    write_dfao(os, d);
    return os.str();
}

inline Dfao read_dfao(std::istream& is) {
    detail::LineReader in(is);
    if (!in.next()) throw ParseError(1, 1, "empty input");
    in.expect("dfao");
    in.expect("base=");
    std::size_t base = in.number();
    in.expect("states=");
    std::size_t states = in.number();
    in.expect("initial=");
    std::size_t initial = in.number();
    if (!in.at_end()) in.fail("trailing characters after header");
    if (base < 2) in.fail("base must be at least 2");
    if (states == 0) in.fail("automaton needs at least one state");
    if (initial >= states) in.fail("initial state out of range");

    std::vector<StateId> trans(states * base);
    Word out(states);
    std::vector<bool> seen(states, false);
    for (std::size_t row = 0; row < states; ++row) {
        if (!in.next()) throw ParseError(in.line_no() + 1, 1, "expected " + std::to_string(states) + " state lines");
        std::size_t col = in.column();
        std::size_t p = in.number();
        if (p >= states) throw ParseError(in.line_no(), col, "state id out of range");
        if (seen[p]) throw ParseError(in.line_no(), col, "duplicate state " + std::to_string(p));
        seen[p] = true;
        out[p] = static_cast<Symbol>(in.number());
        in.expect(":");
        for (std::size_t c = 0; c < base; ++c) {
            col = in.column();
            if (in.at_end()) in.fail("expected " + std::to_string(base) + " transitions");
            std::size_t t = in.number();
            if (t >= states) throw ParseError(in.line_no(), col, "transition target out of range");
            trans[p * base + c] = static_cast<StateId>(t);
        }
        if (!in.at_end()) in.fail("more transitions than the base allows");
    }
    if (in.next()) in.fail("unexpected content after the last state");
    return Dfao(static_cast<unsigned>(base), static_cast<StateId>(initial), std::move(trans), std::move(out));
}

inline Dfao parse_dfao(const std::string& text) {
    std::istringstream is(text);
    return read_dfao(is);
}

} // namespace fewsq
