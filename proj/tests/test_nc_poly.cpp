#include "oracles.hpp"

#include "liebox/nc_poly.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

using namespace liebox;

namespace {

Word w(const char* s) { return Word::parse(s); }

NCPoly poly(int m, std::initializer_list<std::pair<const char*, long>> terms)
{
    NCPoly p(m);
    for (const auto& [word, c] : terms)
        p.add(w(word), Rational(c));
    return p;
}

// x_j d/dx_{j+1} on monomials of x_1..x_{p+1}, by direct index bookkeeping:
// a monomial is an exponent vector, the action moves one unit of degree from
// slot j+1 to slot j with the exponent as factor.
Rational oracle_witness(const NCPoly& q, const Perm& sigma)
{
    const int p = sigma.order();
    std::map<std::vector<int>, Rational> acc;
    for (const auto& [word, c] : q.terms()) {
        std::vector<int> mono(static_cast<std::size_t>(p + 1), 0);
        mono[static_cast<std::size_t>(p)] = 1;
        Rational coef = c;
        bool dead = false;
        for (std::size_t i = word.size(); i-- > 0 && !dead;) {
            int j = 0;
            for (int pos = 1; pos <= p; ++pos)
                if (sigma(pos) == word[i])
                    j = pos;
            // d/dx_{j+1} then multiply by x_j (0-based slots j, j-1)
            int e = mono[static_cast<std::size_t>(j)];
            if (e == 0) {
                dead = true;
                break;
            }
            coef *= e;
            --mono[static_cast<std::size_t>(j)];
            ++mono[static_cast<std::size_t>(j - 1)];
        }
        if (!dead)
            acc[mono] += coef;
    }
    std::vector<int> x1(static_cast<std::size_t>(p + 1), 0);
    x1[0] = 1;
    return acc.count(x1) ? acc[x1] : Rational(0);
}

}  // namespace

TEST_CASE("homogeneous split of the footnote polynomial")
{
    auto p = poly(3, {{"1122", 1}, {"3333", 1}, {"1231", 1}, {"1132", 1}});
    auto parts = homogeneous_split(p);
    REQUIRE(parts.size() == 3);
    std::vector<std::vector<int>> degrees;
    for (const auto& c : parts)
        degrees.push_back(c.multidegree);
    CHECK(std::find(degrees.begin(), degrees.end(), std::vector<int>{2, 2, 0}) != degrees.end());
    CHECK(std::find(degrees.begin(), degrees.end(), std::vector<int>{0, 0, 4}) != degrees.end());
    CHECK(std::find(degrees.begin(), degrees.end(), std::vector<int>{2, 1, 1}) != degrees.end());
    NCPoly sum(3);
    for (const auto& c : parts)
        sum += c.poly;
    CHECK(sum == p);

    auto single = poly(2, {{"12", 1}, {"21", -1}});
    CHECK(homogeneous_split(single).size() == 1);
    CHECK(homogeneous_split(single)[0].poly == single);
    CHECK(homogeneous_split(NCPoly(2)).empty());
}

TEST_CASE("multilinearization")
{
    // X1^2 -> UT + TU with T the new variable 2
    auto m = multilinearize(poly(1, {{"11", 1}}), 1);
    CHECK(m == poly(2, {{"12", 1}, {"21", 1}}));
    // X1^3: every (U,T) degree pair is (1,2) or (2,1)
    auto cube = multilinearize(poly(1, {{"111", 1}}), 1);
    for (const auto& c : homogeneous_split(cube)) {
        bool ok = c.multidegree == std::vector<int>{1, 2} || c.multidegree == std::vector<int>{2, 1};
        CHECK(ok);
    }
    CHECK(cube.terms().size() == 6);
    CHECK_THROWS_AS(multilinearize(poly(2, {{"12", 1}}), 1), std::invalid_argument);
    CHECK_THROWS_AS(multilinearize(poly(2, {{"11", 1}, {"2", 1}}), 1), std::invalid_argument);
}

TEST_CASE("witness coefficients")
{
    auto c = witness_coefficients(poly(2, {{"12", 1}, {"21", -1}}));
    CHECK(c.size() == 2);
    CHECK(c.at(Perm::parse("12")) == 1);
    CHECK(c.at(Perm::parse("21")) == -1);
    CHECK(witness_coefficients(NCPoly(3)).empty());

    auto nested = witness_coefficients(NCPoly::from_word_sum(expand_nested(w("123")), 3));
    CHECK(nested.size() == 4);
    for (const auto& e : pi_table(3).support())
        CHECK(nested.at(e.sigma) == e.coefficient);

    // witness action is exactly B(sigma) x_1
    auto q = poly(3, {{"123", 2}, {"312", -5}});
    auto act = witness_action(q, Perm::parse("312"));
    Exponents x1{1, 0, 0, 0};
    CHECK(act.coefficient(x1) == -5);
    CHECK(act.terms().size() == 1);

    CHECK_THROWS_AS(witness_coefficients(poly(2, {{"11", 1}})), std::invalid_argument);
}

TEST_CASE("witness round trip and agreement with the index-bookkeeping oracle")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int p = 1; p <= 4; ++p) {
        for (int trial = 0; trial < 25; ++trial) {
            NCPoly q(p);
            for (const auto& sigma : all_perms(p))
                if (rng() % 3 == 0) {
                    Word word;
                    for (int a : sigma.images())
                        word.push_back(a);
                    q.add(word, Rational(coeff(rng)));
                }
            auto coeffs = witness_coefficients(q);
            NCPoly rebuilt(p);
            for (const auto& [sigma, b] : coeffs) {
                Word word;
                for (int a : sigma.images())
                    word.push_back(a);
                rebuilt.add(word, b);
                CHECK(b == oracle_witness(q, sigma));
            }
            CHECK(rebuilt == q);
        }
    }
}

TEST_CASE("triviality test")
{
    auto jac = NCPoly::from_word_sum(check_jacobi(w("1"), w("2"), w("3")), 3);
    CHECK(is_trivial(jac).trivial);

    // Jacobi cyclic sum written out term by term, before cancellation
    NCPoly cyclic(3);
    for (const auto& [u, v, x] : std::vector<std::tuple<int, int, int>>{{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}) {
        Word inner;
        inner.push_back(v);
        inner.push_back(x);
        Word outer;
        outer.push_back(u);
        cyclic += NCPoly::from_word_sum(assoc_bracket(WordSum(outer), expand_nested(inner)), 3);
    }
    CHECK(is_trivial(cyclic).trivial);

    auto comm = is_trivial(poly(2, {{"12", 1}, {"21", -1}}));
    CHECK_FALSE(comm.trivial);
    REQUIRE(comm.certificate);
    CHECK(comm.certificate->sigma == Perm::parse("12"));
    CHECK(comm.certificate->coefficient == 1);

    // F residuals and J2 residuals are trivial
    CHECK(is_trivial(NCPoly::from_word_sum(check_F({1, 2}, w("123"), Word{}), 3)).trivial);
    CHECK(is_trivial(NCPoly::from_word_sum(check_J2(w("1212")), 2)).trivial);

    // a nonzero non-multilinear polynomial is caught after multilinearization
    auto sq = is_trivial(poly(2, {{"1122", 1}}));
    CHECK_FALSE(sq.trivial);
    CHECK(sq.certificate->component_multidegree == std::vector<int>{2, 2});
}

TEST_CASE("triviality agrees with the graded coefficient test on random polynomials")
{
    std::mt19937_64 rng(11);
    int agree = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 3);
        const int maxdeg = 1 + static_cast<int>(rng() % 5);
        NCPoly p(m);
        const int terms = 1 + static_cast<int>(rng() % 4);
        for (int t = 0; t < terms; ++t) {
            Word word;
            const int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(maxdeg));
            for (int i = 0; i < len; ++i)
                word.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(m)));
            int c = static_cast<int>(rng() % 5) - 2;
            p.add(word, Rational(c));
            // sometimes cancel exactly
            if (rng() % 4 == 0)
                p.add(word, Rational(-c));
        }
        agree += is_trivial(p).trivial == p.is_zero();
    }
    CHECK(agree == 1000);
}
