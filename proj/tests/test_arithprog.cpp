#include <catch_amalgamated.hpp>

#include "oracles.hpp"

#include <array>

using namespace fewsq;
using oracle::w;

namespace {

ApParams zeta() { return ApParams(tables::harju_nowotka_zeta()); }
ApParams eta() { return ApParams(tables::eta()); }

// Image lengths 16, 12, 8: a decreasing progression.
Morphism decreasing() { return Morphism::from_strings({"0011000111001101", "001110001101", "00011101"}); }

/// The five-case block rule applied literally, whatever the sign of b.
Symbol five_case_rule(const ApParams& p, Index n) {
    const auto a = p.a(), b = p.b();
    const Index block = n / static_cast<Index>(a + b);
    const auto m = static_cast<std::int64_t>(n % static_cast<Index>(a + b));
    const Morphism& h = p.morphism();
    auto at = [&](Index i, std::int64_t off) -> std::optional<Symbol> {
        const Word& img = h.image(vtm_symbol(i));
        if (off < 0 || off >= static_cast<std::int64_t>(img.size())) return std::nullopt;
        return img[static_cast<std::size_t>(off)];
    };
    std::optional<Symbol> r;
    if (thue_morse(block) == 0) r = at(block, m);
    else if (thue_morse(block - 1) == 0) r = m < b ? at(block - 1, m + a + b) : at(block, m - b);
    else r = m < b ? at(block - 1, m + a) : at(block, m - b);
    return r.value_or(99);
}

} // namespace

TEST_CASE("thue-morse and vtm") {
    CHECK(thue_morse(0) == 0);
    CHECK(thue_morse(3) == 0);
    CHECK(thue_morse(7) == 1);
    for (Index n = 0; n < 10000; ++n) REQUIRE(thue_morse(2 * n) == thue_morse(n));
    Word v = morphic_word_prefix(tables::vtm_g(), tables::vtm_tau(), 0, 100000);
    for (Index i = 0; i < v.size(); ++i) REQUIRE(vtm_symbol(i) == v[i]);
}

TEST_CASE("parameters") {
    CHECK(zeta().a() == 24);
    CHECK(zeta().b() == 3);
    CHECK(eta().a() == 8);
    CHECK(eta().b() == 4);
    CHECK(ApParams(tables::ejs()).b() == 0);
    CHECK_THROWS_AS(ApParams(tables::badkobeh_xi()), DomainError);
    CHECK_THROWS_AS(ApParams(tables::kappa()), DomainError);
    CHECK_THROWS_AS(ApParams(tables::vtm_g()), DomainError);
    CHECK_THROWS_AS(ApParams(Morphism::from_strings({"0011", "01", ""})), DomainError);
}

TEST_CASE("image lengths") {
    CHECK(image_length(zeta(), 0) == 0);
    CHECK(image_length(zeta(), 1) == 30);
    CHECK(fewsq::apply(tables::harju_nowotka_zeta(), Word{vtm_symbol(0)}).size() == 30);
    std::int64_t total = 0;
    for (Index n = 0; n <= 1000; ++n) {
        REQUIRE(image_length(eta(), n) == total);
        total += static_cast<std::int64_t>(tables::eta().image(vtm_symbol(n)).size());
    }
}

TEST_CASE("direct access") {
    CHECK(direct_access(zeta(), 0) == 1);
    CHECK(direct_access(zeta(), 0) == tables::harju_nowotka_zeta().image(2)[0]);
    auto x = ap_sequence_accessor(eta());
    CHECK(take(x, 16) == w("0011000111001101"));
    CHECK(take(x, 16) == tables::eta().image(2));
}

TEST_CASE("direct access agrees with concatenation for n < 10^5") {
    for (const Morphism& h : {tables::harju_nowotka_zeta(), tables::eta()}) {
        ApParams p(h);
        Word expected = oracle::image_by_concatenation(h, 100000);
        for (Index n = 0; n < expected.size(); ++n) REQUIRE(direct_access(p, n) == expected[n]);
    }
}

TEST_CASE("every case of the block rule is exercised") {
    for (const ApParams& p : {zeta(), eta()}) {
        std::array<int, 6> hits{};
        for (Index n = 0; n < 100000; ++n) ++hits[static_cast<std::size_t>(direct_access_case(p, n))];
        for (int c = 1; c <= 5; ++c) CHECK(hits[static_cast<std::size_t>(c)] > 0);
    }
}

TEST_CASE("uniform morphisms reduce to plain block indexing") {
    ApParams p(tables::ejs());
    for (Index n = 0; n < 20000; ++n) REQUIRE(direct_access(p, n) == tables::ejs().image(vtm_symbol(n / 4))[n % 4]);
}

TEST_CASE("decreasing progressions") {
    ApParams p(decreasing());
    CHECK(p.a() == 16);
    CHECK(p.b() == -4);
    Word expected = oracle::image_by_concatenation(decreasing(), 100000);
    std::size_t literal_mismatches = 0;
    for (Index n = 0; n < expected.size(); ++n) {
        REQUIRE(direct_access(p, n) == expected[n]);
        if (five_case_rule(p, n) != expected[n]) ++literal_mismatches;
    }
    // The five-case rule alone assumes b >= 0.
    CHECK(literal_mismatches > 0);
}
