#include "liebox/approx_exp.hpp"
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

}  // namespace

TEST_CASE("frame enumeration")
{
    auto F = frame_of("heisenberg");
    REQUIRE(F.size() == 6);
    const char* order[] = {"1", "2", "11", "12", "21", "22"};
    for (int j = 1; j <= 6; ++j)
        CHECK(F.word(j) == w(order[j - 1]));
    CHECK(F.index_of(w("12")) == 4);
    CHECK(F.degree(4) == 2);
    std::vector<int> I{1, 2, 4};
    CHECK(F.degree(I) == 4);
    CHECK_THROWS(F.index_of(w("121")));
    Eigen::MatrixXd Y = F.evaluate(vec({0.0, 0.0, 0.0}));
    CHECK(Y(2, 3) == 1.0);
    CHECK(Y.col(2).norm() == 0.0);
    CHECK(frame_of("engel").size() == 2 + 4 + 8);
}

TEST_CASE("c_steps application order")
{
    auto s = c_steps(w("12"), 0.5);
    // e^{tX1} first, then e^{tX2}, e^{-tX1}, e^{-tX2}
    REQUIRE(s.size() == 4);
    CHECK(s[0].field == 1);
    CHECK(s[0].time == 0.5);
    CHECK(s[1].field == 2);
    CHECK(s[2].field == 1);
    CHECK(s[2].time == -0.5);
    CHECK(s[3].field == 2);
    CHECK(s[3].time == -0.5);
    CHECK(c_steps(w("123"), 1.0).size() == 10);
    CHECK(c_steps(w("1"), 0.2).size() == 1);
}

TEST_CASE("approximate exponentials on Heisenberg")
{
    auto H = make_system(builtin_model("heisenberg"));
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    for (double s : {0.05, 0.1, 0.2})
        CHECK((c_map(H, s, w("12"), zero) - vec({0, 0, s * s})).norm() < 1e-8);
    CHECK((c_map(H, 0.3, w("1"), zero) - H.flow(1, 0.3, zero)).norm() == 0.0);
    for (double t : {0.01, 0.2, 0.5})
        CHECK((exp_ap(H, t, w("12"), zero) - vec({0, 0, t})).norm() < 1e-8);
    CHECK((exp_ap(H, -0.2, w("12"), zero) - vec({0, 0, -0.2})).norm() < 1e-8);

    auto flat = make_system(builtin_model("flat2"));
    Eigen::VectorXd p = vec({0.3, -0.4});
    CHECK((c_map(flat, 0.7, w("12"), p) - p).norm() < 1e-9);
}

TEST_CASE("exp_ap inverse and first-order accuracy on every model")
{
    for (const char* name : {"heisenberg", "grushin", "engel", "martinet"}) {
        auto sys = make_system(builtin_model(name));
        const double tol = sys.flow_options().abs_tol;
        CommutatorFrame F(sys);
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> U(-0.5, 0.5);
        Eigen::VectorXd x(sys.dim());
        for (int i = 0; i < sys.dim(); ++i)
            x[i] = U(rng);
        for (int j = 1; j <= F.size(); ++j) {
            INFO(name, " ", F.word(j).str());
            for (double t : {0.5, 0.1}) {
                auto there = exp_ap(sys, t, F.word(j), x);
                CHECK((exp_ap(sys, -t, F.word(j), there) - x).norm() <= 10 * tol);
            }
        }
    }
    // o(t): error of x + t f_w(x) shrinks faster than t
    auto E = make_system(builtin_model("engel"));
    Eigen::VectorXd x = vec({0.3, -0.2, 0.1, 0.4});
    std::vector<double> ts{1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2}, err;
    for (double t : ts) {
        Eigen::VectorXd lin = x + t * E.commutator_coeffs(w("12")).evaluate(x);
        err.push_back((exp_ap(E, t, w("12"), x) - lin).norm());
    }
    CHECK(loglog_fit(ts, err).first > 1.2);
}

TEST_CASE("box norm")
{
    std::vector<int> ones{1, 1, 1};
    std::vector<double> h{0.1, -0.3, 0.2};
    CHECK(box_norm(h, ones) == 0.3);
    std::vector<double> one{0.04};
    std::vector<int> two{2};
    CHECK(box_norm(one, two) == doctest::Approx(0.2));
    std::vector<double> mixed{0.1, 0.001};
    std::vector<int> d13{1, 3};
    CHECK(box_norm(mixed, d13) == doctest::Approx(0.1));
    CHECK_FALSE(in_box(mixed, d13, 0.1));
    CHECK(in_box(mixed, d13, 0.10001));
}

TEST_CASE("almost exponential map")
{
    auto F = frame_of("heisenberg");
    std::vector<int> I{1, 2, 4};
    Eigen::VectorXd x = vec({0.1, 0.2, -0.1});
    std::vector<double> zero3{0, 0, 0};
    CHECK((e_map(F, I, x, 0.5, zero3) - x).norm() == 0.0);
    std::vector<double> h3{0, 0, 0.3};
    CHECK((e_map(F, I, Eigen::VectorXd::Zero(3), 0.5, h3) - vec({0, 0, 0.3 * 0.25})).norm() < 1e-8);

    // letters only: composed plain flows with times h_k r, h_n acting first
    auto flat = frame_of("flat2");
    std::vector<int> J{1, 2};
    std::vector<double> h{0.2, -0.4};
    auto steps = e_map_steps(flat, J, 0.5, h);
    REQUIRE(steps.size() == 2);
    CHECK(steps[0].field == 2);
    CHECK(steps[0].time == doctest::Approx(-0.2));
    CHECK((e_map(flat, J, vec({1, 1}), 0.5, h) - vec({1.1, 0.8})).norm() < 1e-12);
}

TEST_CASE("Jacobian of E at the origin of the box")
{
    for (const char* name : {"heisenberg", "grushin"}) {
        auto F = frame_of(name);
        std::vector<Eigen::VectorXd> pts;
        if (F.dim() == 3)
            pts = {vec({0, 0, 0}), vec({0.2, -0.1, 0.3})};
        else
            pts = {vec({0, 0}), vec({1, 0}), vec({0.3, 0.2})};
        for (const auto& x : pts)
            for (double r : {0.5, 0.1}) {
                auto tri = select_maximal(F, x, r);
                std::vector<double> h(static_cast<std::size_t>(F.dim()), 0.0);
                auto J = jacobian_e(F, tri.indices, x, r, h);
                INFO(name, " r=", r);
                for (int k = 0; k < F.dim(); ++k) {
                    const int i = tri.indices[static_cast<std::size_t>(k)];
                    Eigen::VectorXd col = std::pow(r, F.degree(i)) * F.evaluate(x).col(i - 1);
                    CHECK((J.jacobian.col(k) - col).norm() <= 1e-4 * col.norm() + 1e-9);
                }
                double want = lambda_I(F, tri.indices, x) * std::pow(r, F.degree(tri.indices));
                CHECK(std::abs(J.det - want) <= 1e-4 * std::abs(want));
            }
    }
    // Grushin maximal frame at (1,0): det dE(0) = r^2
    auto G = frame_of("grushin");
    std::vector<int> I{1, 2};
    std::vector<double> h{0, 0};
    CHECK(jacobian_e(G, I, vec({1, 0}), 0.1, h).det == doctest::Approx(0.01).epsilon(1e-4));
    // commuting frame: diag(r)
    auto flat = frame_of("flat3");
    std::vector<int> K{1, 2, 3};
    std::vector<double> h3{0.1, 0.2, -0.1};
    auto J = jacobian_e(flat, K, vec({0, 0, 0}), 0.3, h3);
    CHECK((J.jacobian - 0.3 * Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-8);
}
