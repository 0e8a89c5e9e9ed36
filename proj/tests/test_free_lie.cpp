#include "oracles.hpp"

#include "liebox/free_lie.hpp"

#include <doctest.h>

#include <random>

using namespace liebox;

namespace {

Word w(const char* s) { return Word::parse(s); }

// [X_v, X_w] by the definition, from the oracle expansions.
WordSum oracle_bracket_of(const Word& v, const Word& u)
{
    return oracle::to_word_sum(oracle::bracket(oracle::nested(v.letters()), oracle::nested(u.letters())));
}

std::vector<Word> words_up_to(int m, int max_len)
{
    std::vector<Word> out;
    for (int len = 1; len <= max_len; ++len)
        for (auto& x : oracle::all_words(m, len))
            out.push_back(x);
    return out;
}

}  // namespace

TEST_CASE("expand_nested matches the bracket definition")
{
    CHECK(expand_nested(w("12")).str() == "+1*12 -1*21");
    auto e = expand_nested(w("123"));
    CHECK(e.size() == 4);
    CHECK(e.coefficient(w("123")) == 1);
    CHECK(e.coefficient(w("132")) == -1);
    CHECK(e.coefficient(w("231")) == -1);
    CHECK(e.coefficient(w("321")) == 1);
    CHECK(expand_nested(w("1234")).size() == 8);
    for (int m = 1; m <= 3; ++m)
        for (const auto& v : words_up_to(m, 6))
            CHECK(expand_nested(v) == oracle::to_word_sum(oracle::nested(v.letters())));
    CHECK_THROWS_AS(expand_nested(Word::repeat(1, 9)), std::out_of_range);
}

TEST_CASE("assoc_bracket is bilinear and antisymmetric")
{
    WordSum a(w("1")), b(w("2"));
    CHECK(assoc_bracket(a, b) == expand_nested(w("12")));
    CHECK(assoc_bracket(a, a).is_zero());
    auto x = expand_nested(w("12")) + WordSum(w("3"), Rational(1, 2));
    auto y = expand_nested(w("231")) * Rational(-3);
    CHECK(assoc_bracket(x, y) == assoc_bracket(y, x) * Rational(-1));
    CHECK(assoc_bracket(expand_nested(w("12")), WordSum(w("3"))) == oracle_bracket_of(w("12"), w("3")));
    for (const auto& v : words_up_to(3, 4))
        CHECK(assoc_bracket(WordSum(w("2")), expand_nested(v)) == expand_nested(w("2") + v));
}

TEST_CASE("Jacobi identity")
{
    CHECK(check_jacobi(w("1"), w("2"), w("3")).is_zero());
    CHECK(check_jacobi(w("1"), w("1"), w("2")).is_zero());
    CHECK(check_jacobi(w("12"), w("3"), w("4")).is_zero());
    for (const auto& u : words_up_to(2, 2))
        for (const auto& v : words_up_to(2, 2))
            for (const auto& x : words_up_to(2, 2))
                CHECK(check_jacobi(u, v, x).is_zero());
}

TEST_CASE("generalized Jacobi, exhaustive to total degree 6 over three letters")
{
    CHECK(check_generalized_jacobi(w("1"), w("23")).is_zero());
    CHECK(check_generalized_jacobi(w("12"), w("3")).is_zero());
    CHECK(check_generalized_jacobi(w("123"), w("45")).is_zero());
    // the residual is built against the definition, so compare one case
    // against the oracle by hand
    WordSum rhs;
    for (const auto& e : pi_table(2).support())
        rhs.add_scaled(oracle::to_word_sum(oracle::nested((apply_perm(e.sigma, w("12")) + w("3")).letters())),
                       Rational(e.coefficient));
    CHECK(rhs == oracle_bracket_of(w("12"), w("3")));

    std::size_t checked = 0;
    for (const auto& v : words_up_to(3, 5))
        for (const auto& u : words_up_to(3, 6 - static_cast<int>(v.size()))) {
            CHECK(check_generalized_jacobi(v, u).is_zero());
            ++checked;
        }
    CHECK(checked > 1000);
}

TEST_CASE("J2 identity")
{
    CHECK(check_J2(w("12")).is_zero());
    CHECK(check_J2(w("123")).is_zero());
    CHECK(check_J2(w("1212")).is_zero());
    // 2 X_1212 = -2 X_2121
    CHECK((expand_nested(w("1212")) * Rational(2) + expand_nested(w("2121")) * Rational(2)).is_zero());
    for (const auto& v : words_up_to(3, 6))
        if (v.size() >= 2)
            CHECK(check_J2(v).is_zero());
    CHECK_THROWS(check_J2(w("1")));
}

TEST_CASE("F identities")
{
    // twelve-term example with exponents (1, b)
    for (int b = 1; b <= 3; ++b)
        CHECK(check_F({1, b}, w("123"), Word{}).is_zero());
    // the (0, b) variant reduces to a single letter power per term
    for (int b = 1; b <= 3; ++b)
        CHECK(check_F({0, b}, w("123"), Word{}).is_zero());
    CHECK(check_F({1}, w("12"), w("3")).is_zero());
    // direct oracle for l = 2, p = 1, b = 1: X_{v1 w} - X_{v2 w} summed with pi
    auto direct = oracle::to_word_sum(oracle::nested({1, 3}));
    direct -= oracle::to_word_sum(oracle::nested({2, 3}));
    direct += oracle::to_word_sum(oracle::nested({2, 3}));
    direct -= oracle::to_word_sum(oracle::nested({1, 3}));
    CHECK(direct.is_zero());

    CHECK_THROWS_AS(check_F({1, 1, 1}, w("123"), Word{}), KnownFailure);
    CHECK_FALSE(f_identity_sum({1, 1, 1}, w("123"), Word{}).is_zero());
    CHECK_THROWS_AS(check_F({0, 0}, w("123"), Word{}), std::invalid_argument);
    CHECK_THROWS_AS(check_F({1, -1}, w("123"), Word{}), std::invalid_argument);
}

TEST_CASE("signed placement expansion equals the pi expansion")
{
    CHECK(signed_expansion(w("12")) == expand_nested(w("12")));
    CHECK(signed_expansion(w("123")) == expand_nested(w("123")));
    for (const auto& v : words_up_to(3, 6))
        CHECK(signed_expansion(v) == expand_nested(v));
    CHECK(placement_word(w("123"), {1, 1}) == w("123"));
    CHECK(placement_word(w("1234"), {-1, -1, 1}) == w("3421"));
}

TEST_CASE("Baker identities")
{
    auto residuals = check_baker();
    CHECK(residuals.size() == 6);
    for (const auto& r : residuals) {
        INFO(r.name);
        CHECK(r.residual.is_zero());
    }
    CHECK((expand_nested(w("1212")) - expand_nested(w("2112"))).is_zero());
    CHECK((expand_nested(w("1212")) + expand_nested(w("1221"))).is_zero());
    auto six = expand_nested(w("122221")) - expand_nested(w("212221")) * Rational(2) + expand_nested(w("221221"));
    CHECK(six.is_zero());
}

TEST_CASE("giochetto combination")
{
    CHECK(check_giochetto(w("12"), 3).is_zero());
    for (const auto& v : oracle::all_words(2, 3))
        for (int x = 1; x <= 2; ++x)
            CHECK(check_giochetto(v, x).is_zero());
    // b^4 a against a: 2[ab^4a] - 4[b^3aba] + 6[b^2ab^2a] - 4[bab^3a]
    auto terms = giochetto_terms(w("22221"), 1);
    // the leading [a b^4 a] plus the all-inverse term
    CHECK(terms.at(w("122221")) == 2);
    CHECK(terms.at(w("222121")) == -4);
    CHECK(terms.at(w("221221")) == 6);
    CHECK(terms.at(w("212221")) == -4);
    CHECK(check_giochetto(w("22221"), 1).is_zero());
    // comma convention: v1^-1 v2^-1 v3 v4 , w -> v3 v4 v2 v1 w
    CHECK(placement_word(w("1234"), {-1, -1, 1}) == w("3421"));
}

TEST_CASE("WordSum arithmetic is exact")
{
    WordSum a(w("12"), Rational(1, 3));
    a.add(w("12"), Rational(-1, 3));
    CHECK(a.is_zero());
    CHECK(a.str() == "0");
    WordSum b(w("1"), Rational(1, 2));
    auto sq = b * b;
    CHECK(sq.coefficient(w("11")) == Rational(1, 4));
}
