#include <catch_amalgamated.hpp>

#include "oracles.hpp"

#include <sstream>

using namespace fewsq;
using oracle::w;

namespace {

const std::string kVtm31 = "2102012101202102012021012102012";
const std::string kQ22_47 = "11010011000111001101001110001101000111010011000";

Dfao q22_dfao() { return from_morphic(tables::q22(), tables::q22_gamma()); }
Dfao vtm_dfao() { return from_morphic(tables::vtm_g(), tables::vtm_tau()); }

// Initial state 0 moves to state 1 on digit 0, so leading zeros matter before normalizing.
Dfao leading_zero_sensitive() { return Dfao(2, 0, {1, 2, 1, 2, 2, 1}, Word{5, 0, 1}); }

} // namespace

TEST_CASE("evaluation") {
    Dfao d = q22_dfao();
    CHECK(eval(d, 0) == 1);
    CHECK(eval(d, 2) == 0);
    CHECK(digits_msd(0, 2) == std::vector<unsigned>{0});
    CHECK(digits_msd(6, 2) == std::vector<unsigned>{1, 1, 0});
    CHECK(digits_msd(23, 24) == std::vector<unsigned>{23});
    CHECK(eval_digits(d, {0, 0, 1, 0}) == eval_digits(d, {1, 0}));
    CHECK_THROWS_AS(eval_digits(d, {2}), DomainError);
    for (Index n = 0; n < 2000; ++n) REQUIRE(eval(d, n) == oracle::eval_naive(d, n));
}

TEST_CASE("prefix generation") {
    CHECK(generate_prefix(q22_dfao(), 47) == w(kQ22_47));
    CHECK(generate_prefix(q22_dfao(), 0).empty());
    CHECK(generate_prefix(vtm_dfao(), 31) == w(kVtm31));
    Dfao d = q22_dfao();
    Word big = generate_prefix(d, 5000);
    for (Index n = 0; n < big.size(); ++n) REQUIRE(big[n] == eval(d, n));
    auto x = dfao_accessor(d);
    CHECK(x(4999) == big[4999]);
}

TEST_CASE("construction from a uniform morphic system") {
    Dfao q = q22_dfao();
    CHECK(q.state_count() == 22);
    CHECK(q.base() == 2);
    Dfao v = vtm_dfao();
    CHECK(v.state_count() == 4);
    CHECK(v.base() == 2);
    CHECK_THROWS_AS(from_morphic(tables::harju_nowotka_zeta(), Coding(2, Word{0, 1, 1})), DomainError);
    CHECK_THROWS_AS(from_morphic(Morphism::from_strings({"10", "01"}), Coding::identity(2)), DomainError);
}

TEST_CASE("conversion back to a morphic system") {
    MorphicSystem sys = to_morphic(q22_dfao());
    CHECK(weight(sys.morphism) == 44);
    CHECK(is_uniform(sys.morphism) == 2u);

    MorphicSystem one = to_morphic(Dfao(3, 0, {0, 0, 0}, Word{7}));
    CHECK(one.morphism == Morphism::from_strings({"000"}));
    CHECK(one.coding(0) == 7);
}

TEST_CASE("property: morphic round trip preserves the word") {
    std::vector<Dfao> autos{q22_dfao(), vtm_dfao(), from_morphic(tables::six_f(), tables::six_rho()),
                            uniform_image(vtm_dfao(), tables::ejs())};
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) autos.push_back(oracle::random_dfao(rng, 2 + static_cast<unsigned>(rng() % 3), 1 + rng() % 7, 3, true));
    for (const Dfao& d : autos) {
        MorphicSystem sys = to_morphic(d);
        Word expected = generate_prefix(d, 10000);
        REQUIRE(morphic_word_prefix(sys.morphism, sys.coding, 0, 10000) == expected);
        REQUIRE(generate_prefix(from_morphic(sys.morphism, sys.coding), 10000) == expected);
    }
}

TEST_CASE("normalization") {
    Dfao q = q22_dfao();
    CHECK(is_normalized(q));
    CHECK(normalize(q) == q);

    Dfao d = leading_zero_sensitive();
    CHECK_FALSE(is_normalized(d));
    Dfao n = normalize(d);
    CHECK(is_normalized(n));
    CHECK(normalize(n) == n);
    for (Index i = 0; i < 10000; ++i) REQUIRE(eval(n, i) == eval(d, i));
    CHECK(eval_digits(n, {0, 0, 1, 1}) == eval_digits(n, {1, 1}));
}

TEST_CASE("minimization of catalog automata") {
    CHECK(minimize(uniform_image(vtm_dfao(), tables::ejs())).state_count() == 10);
    CHECK(minimize(from_morphic(tables::six_f(), tables::six_rho())).state_count() == 6);
    CHECK(minimize(q22_dfao()).state_count() == 22);
    CHECK(minimize(uniform_image(vtm_dfao(), tables::ochem_sigma())).state_count() == 109);
    Dfao p = from_morphic(tables::rampersad_p(), Coding::identity(5));
    Dfao r = minimize(uniform_image(p, tables::rampersad_beta()));
    CHECK(r.base() == 24);
    CHECK(r.state_count() == 18);
}

TEST_CASE("uniform image rejects non-uniform morphisms") {
    CHECK_THROWS_AS(uniform_image(vtm_dfao(), tables::eta()), DomainError);
    Dfao one = uniform_image(vtm_dfao(), tables::vtm_tau().as_morphism());
    CHECK(generate_prefix(one, 500) == fewsq::apply(tables::vtm_tau(), generate_prefix(vtm_dfao(), 500)));
}

TEST_CASE("property: minimize is idempotent, preserves eval and is minimal") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Index> idx(0, Index{1} << 40);
    for (int trial = 0; trial < 60; ++trial) {
        unsigned base = 2 + static_cast<unsigned>(rng() % 3);
        std::size_t states = 1 + rng() % 8;
        Dfao d = oracle::random_dfao(rng, base, states, 1 + static_cast<Symbol>(rng() % 3), trial % 2 == 0);
        Dfao m = minimize(d);
        REQUIRE(minimize(m) == m);
        REQUIRE(to_text(minimize(m)) == to_text(m));
        REQUIRE(m.state_count() <= normalize(d).state_count());
        REQUIRE(m.state_count() == oracle::behaviour_count(normalize(d)));
        for (int s = 0; s < 10000 / 60 + 1; ++s) {
            Index n = idx(rng);
            REQUIRE(eval(m, n) == eval(d, n));
        }
        for (Index n = 0; n < 200; ++n) REQUIRE(eval(m, n) == eval(d, n));
    }
}

TEST_CASE("property: minimize preserves eval on 10^4 indices of catalog automata") {
    std::vector<Dfao> autos{q22_dfao(), uniform_image(vtm_dfao(), tables::ejs()), uniform_image(vtm_dfao(), tables::ochem_sigma())};
    for (const Dfao& d : autos) {
        Dfao m = minimize(d);
        REQUIRE(generate_prefix(m, 10000) == generate_prefix(d, 10000));
    }
}

TEST_CASE("property: uniform image agrees with applying the morphism") {
    struct Case {
        Dfao base;
        Morphism image;
    };
    Dfao p = from_morphic(tables::rampersad_p(), Coding::identity(5));
    std::vector<Case> cases{{vtm_dfao(), tables::ejs()},
                            {vtm_dfao(), tables::ochem_sigma()},
                            {p, tables::rampersad_beta()},
                            {q22_dfao(), Morphism::from_strings({"011", "100"})},
                            {vtm_dfao(), Morphism::from_strings({"10", "11", "00"})}};
    for (const auto& [d, m] : cases) {
        Word expected = fewsq::apply(m, generate_prefix(d, 10000));
        expected.resize(10000);
        REQUIRE(generate_prefix(uniform_image(d, m), 10000) == expected);
        REQUIRE(generate_prefix(minimize(uniform_image(d, m)), 10000) == expected);
    }
}

TEST_CASE("dfao text format") {
    Dfao d(2, 0, {0, 1, 1, 0}, Word{0, 1});
    CHECK(to_text(d) == "dfao base=2 states=2 initial=0\n0 0 : 0 1\n1 1 : 1 0\n");
    CHECK(parse_dfao(to_text(d)) == d);
    Dfao q = minimize(q22_dfao());
    CHECK(parse_dfao(to_text(q)) == q);
    CHECK(parse_dfao("# thue-morse\n\ndfao base=2 states=2 initial=0\n1 1 : 1 0\n0 0 : 0 1\n") == d);
    // Serialization is canonical: unreachable states vanish and ids follow BFS order.
    Dfao messy(2, 2, {0, 0, 1, 2, 2, 1}, Word{9, 1, 0});
    CHECK(to_text(messy) == "dfao base=2 states=2 initial=0\n0 0 : 0 1\n1 1 : 1 0\n");
}

TEST_CASE("dfao parse errors carry positions") {
    auto error_at = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
        try {
            parse_dfao(text);
        } catch (const ParseError& e) {
            return {e.line(), e.column()};
        }
        return {0, 0};
    };
    CHECK(error_at("") == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(error_at("dfao base=2 states=2 initial=0\n0 0 : 0 1\n").first == 3);
    CHECK(error_at("dfao base=2 states=2 initial=0\n0 0 : 0 1\n1 1 : 1 7\n") == std::pair<std::size_t, std::size_t>{3, 9});
    CHECK(error_at("dfao base=2 states=2 initial=0\n0 0 : 0 1\n0 1 : 1 0\n") == std::pair<std::size_t, std::size_t>{3, 1});
    CHECK(error_at("dfao base=1 states=1 initial=0\n0 0 : 0\n").first == 1);
    CHECK(error_at("dfao base=2 states=1 initial=0\n0 0 : 0 0 0\n").first == 2);
    CHECK(error_at("dfa base=2 states=1 initial=0\n").first == 1);
}

TEST_CASE("dfao constructor validation") {
    CHECK_THROWS_AS(Dfao(1, 0, {0}, Word{0}), DomainError);
    CHECK_THROWS_AS(Dfao(2, 0, {0}, Word{0}), DomainError);
    CHECK_THROWS_AS(Dfao(2, 1, {0, 0}, Word{0}), DomainError);
    CHECK_THROWS_AS(Dfao(2, 0, {0, 3}, Word{0}), DomainError);
}
