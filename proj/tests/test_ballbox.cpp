#include "liebox/ballbox.hpp"
#include "liebox/models.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace liebox;

namespace {

Word w(const char* s) { return Word::parse(s); }

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double a : v)
        x[i++] = a;
    return x;
}

CommutatorFrame frame_of(const char* name) { return CommutatorFrame(make_system(builtin_model(name))); }

// Determinant from the exact coefficient maps by cofactor expansion, 2x2 and 3x3 only.
Rational oracle_det(const CommutatorFrame& F, const std::vector<int>& I, const std::vector<Rational>& x)
{
    std::vector<std::vector<Rational>> c;
    for (int i : I)
        c.push_back(F.coeffs(i).evaluate(std::span<const Rational>(x)));
    if (I.size() == 2)
        return c[0][0] * c[1][1] - c[1][0] * c[0][1];
    return c[0][0] * (c[1][1] * c[2][2] - c[2][1] * c[1][2]) - c[1][0] * (c[0][1] * c[2][2] - c[2][1] * c[0][2]) +
           c[2][0] * (c[0][1] * c[1][2] - c[1][1] * c[0][2]);
}

}  // namespace

TEST_CASE("frame determinants")
{
    auto H = frame_of("heisenberg");
    std::vector<Rational> zero{Rational(0), Rational(0), Rational(0)};
    std::vector<int> I{1, 2, 4};
    CHECK(lambda_I(H, I, zero) == 1);
    std::vector<int> rep{1, 1, 4};
    CHECK(lambda_I(H, rep, zero) == 0);
    std::vector<Rational> p{Rational(1, 3), Rational(-2, 7), Rational(5)};
    for (const auto& J : std::vector<std::vector<int>>{{1, 2, 4}, {1, 2, 5}, {1, 4, 5}, {2, 1, 4}})
        CHECK(lambda_I(H, J, p) == oracle_det(H, J, p));

    auto G = frame_of("grushin");
    std::vector<int> g12{1, 2};
    for (int a : {-3, 0, 2}) {
        std::vector<Rational> pt{Rational(a), Rational(0)};
        CHECK(lambda_I(G, g12, pt) == a);
    }
    CHECK(lambda_I(G, g12, vec({0.25, 0.0})) == 0.25);
}

TEST_CASE("Lambda tuple and nu")
{
    auto H = frame_of("heisenberg");
    Eigen::VectorXd x = vec({0.3, -0.2, 0.5});
    auto full = lambda_vector(H, x, 1.0);
    double best = 0;
    for (const auto& e : full)
        best = std::max(best, std::abs(e.scaled));
    CHECK(lambda_vector(H, Eigen::VectorXd::Zero(3), 1.0).size() > 0);
    CHECK(best == doctest::Approx(1.0));
    for (double r : {0.5, 0.01}) {
        auto v = lambda_vector(H, x, r);
        REQUIRE(v.size() == full.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(v[i].scaled == full[i].lambda * std::pow(r, full[i].degree));
    }
    auto top = lambda_vector(H, x, 0.5, 2);
    CHECK(top.size() == 2);
    CHECK(lambda_norm(H, x, 1.0) > 0);

    auto G = frame_of("grushin");
    std::vector<Eigen::VectorXd> grid;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j)
            grid.push_back(vec({-1 + 0.2 * i, -1 + 0.2 * j}));
    CHECK(nu(G, grid) > 0.5);
}

TEST_CASE("maximal frame selection")
{
    auto H = frame_of("heisenberg");
    for (const auto& x : {vec({0, 0, 0}), vec({0.4, -0.3, 1.0})})
        for (double r : {1.0, 0.1}) {
            auto t = select_maximal(H, x, r);
            CHECK(t.indices == std::vector<int>{1, 2, 4});
            CHECK(t.certified);
            CHECK(t.score == doctest::Approx(r * r * r * r));
        }
    auto G = frame_of("grushin");
    auto far = select_maximal(G, vec({0.5, 0.0}), 0.01);
    CHECK(far.indices == std::vector<int>{1, 2});
    CHECK(far.score == doctest::Approx(0.5 * 1e-4));
    auto origin = select_maximal(G, vec({0.0, 0.0}), 0.1);
    CHECK(origin.indices == std::vector<int>{1, 4});
    CHECK(origin.score == doctest::Approx(1e-3));

    // a single field never spans R^2
    Model line{"line", "", 2, 1, 1, {PolyMap({Polynomial::constant(2, Rational(1)), Polynomial(2)})}};
    CommutatorFrame L(make_system(line));
    CHECK_THROWS_AS(select_maximal(L, vec({0, 0}), 0.5), HormanderViolation);
}

TEST_CASE("maximality is stable near the center")
{
    auto G = frame_of("grushin");
    const double r = 0.05;
    auto base = select_maximal(G, vec({0.5, 0.1}), r);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        // horizontal moves of length below 0.01 r
        Eigen::VectorXd y = vec({0.5 + 0.005 * r * U(rng), 0.1});
        y[1] += 0.005 * r * U(rng) * y[0];
        CHECK(select_maximal(G, y, r).indices == base.indices);
    }
}

TEST_CASE("ball-box inclusion on Heisenberg")
{
    auto H = frame_of("heisenberg");
    auto t = select_maximal(H, vec({0.1, -0.2, 0.05}), 0.5);
    InclusionOptions opt;
    opt.samples = 40;
    auto rep = inclusion_check(H, t, opt);
    CHECK(rep.targets == 40);
    CHECK(rep.solve_fraction == 1.0);
    CHECK(rep.diverged == 0);
    CHECK(rep.max_box_norm < opt.eps);
    CHECK(rep.collisions == 0);
    CHECK(rep.rho_bound == doctest::Approx(0.05 * 0.09 * 0.5));

    InclusionOptions wide = opt;
    wide.eps = 0.8;
    CHECK_THROWS_AS(inclusion_check(H, t, wide), std::invalid_argument);

    // flat model: E is affine in h, recovered exactly
    auto F = frame_of("flat3");
    auto ft = select_maximal(F, vec({0, 0, 0}), 0.5);
    Eigen::VectorXd y = vec({0.01, -0.02, 0.005});
    auto sol = solve_e_map(F, ft.indices, vec({0, 0, 0}), 0.5, y);
    CHECK(sol.converged);
    CHECK(sol.h[0] == doctest::Approx(0.02));
    CHECK(sol.h[1] == doctest::Approx(-0.04));
    CHECK(sol.h[2] == doctest::Approx(0.01));
}

TEST_CASE("frame expansion")
{
    auto H = frame_of("heisenberg");
    Eigen::VectorXd x = vec({0.2, 0.1, -0.3});
    Eigen::MatrixXd Y = H.evaluate(x);
    std::vector<int> I{1, 2, 4};
    for (int k = 0; k < 3; ++k) {
        auto e = express_in_frame(H, Y.col(I[static_cast<std::size_t>(k)] - 1), x, I);
        CHECK(e.in_span);
        for (int j = 0; j < 3; ++j)
            CHECK(e.coefficients[j] == doctest::Approx(j == k ? 1.0 : 0.0));
    }
    auto zero = express_in_frame(H, Eigen::VectorXd::Zero(3), x);
    CHECK(zero.coefficients.norm() == 0.0);

    Eigen::VectorXd up = vec({0, 0, 1});
    auto on_frame = express_in_frame(H, up, Eigen::VectorXd::Zero(3), I);
    CHECK(on_frame.coefficients[2] == doctest::Approx(1.0));
    CHECK(std::abs(on_frame.coefficients[0]) < 1e-12);
    // over all of P the min-norm solution splits between [X1,X2] and [X2,X1]
    auto all = express_in_frame(H, up, Eigen::VectorXd::Zero(3));
    CHECK(all.indices.size() == 6);
    CHECK(all.coefficients[3] == doctest::Approx(0.5));
    CHECK(all.coefficients[4] == doctest::Approx(-0.5));
    CHECK(all.residual < 1e-12);

    // span failure: a single-field family cannot reach the second axis
    Model line{"line", "", 2, 1, 1, {PolyMap({Polynomial::constant(2, Rational(1)), Polynomial(2)})}};
    CommutatorFrame L(make_system(line));
    CHECK_FALSE(express_in_frame(L, vec({0, 1}), vec({0, 0})).in_span);

    for (const char* name : {"grushin", "engel", "martinet"}) {
        auto F = frame_of(name);
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            Eigen::VectorXd p(F.dim()), v(F.dim());
            for (int d = 0; d < F.dim(); ++d) {
                p[d] = U(rng);
                v[d] = U(rng);
            }
            CHECK(express_in_frame(F, v, p).residual <= 1e-8);
        }
    }

    auto bound = ad_frame_bound(frame_of("engel"), 1, w("12"), vec({0.1, 0.2, 0.0, 0.0}), {0.0, 0.1, 0.2, 0.4});
    CHECK(bound.max_coefficient > 0);
    CHECK(std::isfinite(bound.max_coefficient));
    CHECK(bound.max_residual < 1e-8);
}

TEST_CASE("doubling ratios at moderate sample counts")
{
    DoublingOptions opt;
    opt.samples = 100000;
    auto H = frame_of("heisenberg");
    auto h = doubling_ratio(H, vec({0, 0, 0}), 0.5, opt);
    CHECK(h.ratio == doctest::Approx(16.0).epsilon(0.15));
    CHECK(h.ci_low <= h.ratio);
    CHECK(h.ci_high >= h.ratio);
    CHECK_FALSE(h.box_touched);

    auto flat = frame_of("flat2");
    auto f = doubling_ratio(flat, vec({0, 0}), 0.5, opt);
    CHECK(f.ratio == doctest::Approx(4.0).epsilon(0.05));
    // Euclidean disc: pi r^2
    CHECK(f.volume_r == doctest::Approx(M_PI * 0.25).epsilon(0.02));

    // worker count does not change the counts
    DoublingOptions par = opt;
    par.samples = 20000;
    auto one = doubling_ratio(H, vec({0, 0, 0}), 0.5, par);
    par.workers = 3;
    auto three = doubling_ratio(H, vec({0, 0, 0}), 0.5, par);
    CHECK(one.inner == three.inner);
    CHECK(one.outer == three.outer);

    CHECK_THROWS_AS(doubling_ratio(H, vec({0, 0, 0}), -1.0, opt), std::invalid_argument);
}

TEST_CASE("Poincare harness")
{
    auto H = frame_of("heisenberg");
    PoincareOptions opt;
    opt.samples = 20000;
    std::vector<Polynomial> fs{Polynomial::constant(3, Rational(2)), Polynomial::variable(3, 0)};
    auto res = poincare_check(H, fs, vec({0, 0, 0}), 0.5, opt);
    REQUIRE(res.size() == 2);
    CHECK(res[0].lhs == 0.0);
    CHECK(res[1].lhs > 0);
    CHECK(std::isfinite(res[1].ratio));
    CHECK(res[1].ratio > 0);
    CHECK(poincare_suite(3).size() == 10);
    CHECK(poincare_suite(2).size() == 10);
    CHECK_THROWS(poincare_check(H, {Polynomial::variable(2, 0)}, vec({0, 0, 0}), 0.5, opt));
}
