#include "oracles.hpp"

#include "liebox/models.hpp"
#include "liebox/vfield.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace liebox;

namespace {

Word w(const char* s) { return Word::parse(s); }

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double a : v)
        x[i++] = a;
    return x;
}

// f_w by the recursive bracket of fields: f_{[u,V]} = (f_u . grad) f_V - (f_V . grad) f_u,
// nested from the right. Independent of the pi tables.
PolyMap oracle_coeffs(const std::vector<PolyMap>& fields, const Word& word)
{
    PolyMap acc = fields.at(static_cast<std::size_t>(word.back() - 1));
    for (std::size_t i = word.size() - 1; i-- > 0;) {
        const auto& fa = fields.at(static_cast<std::size_t>(word[i] - 1));
        acc = directional_derivative(fa, acc) - directional_derivative(acc, fa);
    }
    return acc;
}

std::vector<Word> words_up_to(int m, int s)
{
    std::vector<Word> out;
    for (int len = 1; len <= s; ++len)
        for (auto& x : oracle::all_words(m, len))
            out.push_back(x);
    return out;
}

}  // namespace

TEST_CASE("polynomial arithmetic and derivatives")
{
    auto x = var(2, 0), y = var(2, 1);
    auto p = x * x * y - Rational(1, 2) * y;
    CHECK(p.degree() == 3);
    CHECK(p.coefficient({2, 1}) == 1);
    CHECK(p.coefficient({0, 1}) == Rational(-1, 2));
    CHECK(p.derivative(0) == Rational(2) * x * y);
    CHECK(p.derivative(1) == x * x - Polynomial::constant(2, Rational(1, 2)));
    std::vector<Rational> at{Rational(3), Rational(2)};
    CHECK(p.evaluate(std::span<const Rational>(at)) == 17);
    CHECK(p.evaluate(vec({3.0, 2.0})) == doctest::Approx(17.0));
    CHECK((p - p).is_zero());

    CompiledFamily fam({PolyMap({x * y, y}), PolyMap({Polynomial(2), x * x * x})});
    Eigen::VectorXd pt = vec({0.5, -2.0});
    CHECK(fam.evaluate(0, pt)[0] == doctest::Approx(-1.0));
    CHECK(fam.evaluate(1, pt)[1] == doctest::Approx(0.125));
    std::vector<double> u{2.0, -1.0};
    Eigen::VectorXd vals;
    fam.monomials(pt, vals);
    Eigen::VectorXd comb = fam.combine(u) * vals;
    CHECK(comb[0] == doctest::Approx(-2.0));
    CHECK(comb[1] == doctest::Approx(-4.125));
}

TEST_CASE("horizontal derivatives on Heisenberg")
{
    auto H = make_system(builtin_model("heisenberg"));
    auto x = var(3, 0), y = var(3, 1), z = var(3, 2);
    CHECK(H.horizontal_derivative(1, z) == Rational(-1, 2) * y);
    CHECK(H.horizontal_derivative(2, z) == Rational(1, 2) * x);
    CHECK(H.horizontal_derivative(1, x * y) == y);
    CHECK(H.horizontal_derivative(2, Polynomial::constant(3, Rational(5))).is_zero());
}

TEST_CASE("commutator coefficients")
{
    auto H = make_system(builtin_model("heisenberg"));
    Polynomial zero(3), one = Polynomial::constant(3, Rational(1));
    CHECK(H.commutator_coeffs(w("12")) == PolyMap({zero, zero, one}));
    CHECK(H.commutator_coeffs(w("21")) == PolyMap({zero, zero, -one}));
    CHECK(H.commutator_coeffs(w("11")).is_zero());
    CHECK_THROWS_AS(H.commutator_coeffs(w("121")), std::out_of_range);
    CHECK(commutator_coeffs_uncached(H.fields(), w("112")).is_zero());

    auto G = make_system(builtin_model("grushin"));
    CHECK(G.commutator_coeffs(w("12")) == PolyMap({Polynomial(2), Polynomial::constant(2, Rational(1))}));

    for (const char* name : {"heisenberg", "grushin", "engel", "martinet"}) {
        auto sys = make_system(builtin_model(name));
        INFO(name);
        for (const auto& v : words_up_to(sys.fields_count(), sys.step()))
            CHECK(sys.commutator_coeffs(v) == oracle_coeffs(sys.fields(), v));
    }
}

TEST_CASE("coefficient-level antisymmetry and Jacobi")
{
    auto E = make_system(builtin_model("engel"));
    const auto& fs = E.fields();
    // f_{[u]v} for words u, v: bracket of the two coefficient maps
    auto br = [](const PolyMap& a, const PolyMap& b) {
        return directional_derivative(a, b) - directional_derivative(b, a);
    };
    for (const auto& u : words_up_to(2, 2))
        for (const auto& v : words_up_to(2, 2)) {
            if (u.size() + v.size() > 3)
                continue;
            auto fu = E.commutator_coeffs(u), fv = E.commutator_coeffs(v);
            CHECK(br(fu, fv) == br(fv, fu) * Rational(-1));
        }
    for (const auto& u : words_up_to(2, 1))
        for (const auto& v : words_up_to(2, 1))
            for (const auto& x : words_up_to(2, 1)) {
                auto a = E.commutator_coeffs(u), b = E.commutator_coeffs(v), c = E.commutator_coeffs(x);
                CHECK((br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).is_zero());
            }
    CHECK(br(fs[0], fs[1]) == E.commutator_coeffs(w("12")));
}

TEST_CASE("sharp and iterated derivative forms agree")
{
    for (const char* name : {"heisenberg", "grushin", "engel", "martinet"}) {
        auto sys = make_system(builtin_model(name));
        const int n = sys.dim();
        std::vector<Polynomial> psis{var(n, n - 1), var(n, 0) * var(n, n - 1) + var(n, 1) * var(n, 1)};
        for (const auto& v : words_up_to(sys.fields_count(), sys.step()))
            for (const auto& psi : psis)
                CHECK(sys.nested_derivative(v, psi) == sys.sharp_derivative(v, psi));
    }
}

TEST_CASE("ad")
{
    auto H = make_system(builtin_model("heisenberg"));
    Eigen::VectorXd x = vec({0.3, -0.7, 1.1});
    CHECK(H.ad(1, w("12"), x).norm() == 0.0);
    CHECK(H.ad(-2, w("12"), x).norm() == 0.0);
    CHECK(H.ad_coeffs(H.field(1), w("2")) == H.commutator_coeffs(w("12")));

    auto E = make_system(builtin_model("engel"));
    CHECK(E.ad_coeffs(E.field(1), w("12")) == E.commutator_coeffs(w("112")));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd p = vec({U(rng), U(rng), U(rng), U(rng)});
        CHECK((E.ad(1, w("12"), p) - E.commutator_coeffs(w("112")).evaluate(p)).norm() < 1e-14);
        CHECK((E.ad(-1, w("12"), p) + E.commutator_coeffs(w("112")).evaluate(p)).norm() < 1e-14);
    }
}

TEST_CASE("flows")
{
    auto H = make_system(builtin_model("heisenberg"));
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    CHECK((H.flow(1, 0.7, zero) - vec({0.7, 0, 0})).norm() < 1e-12);
    // analytic: e^{tX2}(x,y,z) = (x, y + t, z + t x / 2)
    Eigen::VectorXd p = vec({0.4, -0.1, 0.2});
    CHECK((H.flow(2, 0.5, p) - vec({0.4, 0.4, 0.2 + 0.5 * 0.4 / 2})).norm() < 1e-12);
    CHECK((H.flow(-2, 0.5, p) - H.flow(2, -0.5, p)).norm() < 1e-14);

    auto flat = make_system(builtin_model("flat2"));
    CHECK((flat.flow(1, 1.5, Eigen::VectorXd::Zero(2)) - vec({1.5, 0})).norm() < 1e-14);

    PolyMap radial({var(2, 0), var(2, 1)});
    Eigen::VectorXd x0 = vec({0.3, -0.2});
    for (double t : {0.1, 0.5, 1.0, -1.0})
        CHECK((flow_field(radial, t, x0) - std::exp(t) * x0).norm() < 1e-9 * std::exp(t));

    for (const auto& name : builtin_model_names()) {
        auto sys = make_system(builtin_model(name));
        const double tol = sys.flow_options().abs_tol;
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd x(sys.dim());
            for (int i = 0; i < sys.dim(); ++i)
                x[i] = U(rng);
            double t = U(rng);
            for (int j = 1; j <= sys.fields_count(); ++j) {
                auto back = sys.flow(j, -t, sys.flow(j, t, x));
                CHECK((back - x).norm() <= 10 * tol);
            }
        }
    }

    FlowOptions tight;
    tight.domain = DomainBox{-1.0, 1.0};
    H.set_flow_options(tight);
    CHECK_THROWS_AS(H.flow(1, 2.0, zero), DomainEscape);
    CHECK_THROWS_AS(H.flow(1, 20.0, zero), std::invalid_argument);
}

TEST_CASE("compose and delta orderings")
{
    auto H = make_system(builtin_model("heisenberg"));
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    const double t = 0.3;
    // Delta^{12} x = e^{tX1} e^{tX2} x: X2 acts first, giving (t, t, -t^2/2)
    CHECK((delta(H, w("12"), t, zero) - vec({t, t, -t * t / 2})).norm() < 1e-14);
    std::vector<FlowStep> steps{{2, t}, {1, t}};
    CHECK((H.compose(steps, zero) - delta(H, w("12"), t, zero)).norm() < 1e-15);
    auto inv = inverse_steps(steps);
    CHECK(inv[0].field == 1);
    CHECK(inv[0].time == -t);
    CHECK((H.compose(inv, H.compose(steps, zero))).norm() < 1e-14);
}

TEST_CASE("bracket via flows")
{
    auto H = make_system(builtin_model("heisenberg"));
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    auto ts = geometric_samples(1e-3, 1e-1, 8);
    CHECK(ts.size() == 8);
    CHECK(ts.front() == doctest::Approx(1e-3));
    CHECK(ts.back() == doctest::Approx(1e-1));

    // psi = z at 0: the group commutator is exactly (0, 0, t^2)
    auto fit = bracket_limit_fit(H, w("12"), var(3, 2), zero, ts);
    CHECK(fit.exact == 1.0);
    for (double v : fit.values)
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    // psi = x z: the quotient is exactly t, error order one
    auto xz = bracket_limit_fit(H, w("12"), var(3, 0) * var(3, 2), zero, ts);
    CHECK(xz.exact == 0.0);
    CHECK(xz.slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(xz.values[3] == doctest::Approx(ts[3]).epsilon(1e-8));

    // constant fields declared with step 2 so that length-two words are allowed
    VectorFieldSystem flat("flat", builtin_model("flat2").fields, 2);
    for (double t : ts)
        CHECK(bracket_via_flows(flat, w("12"), var(2, 0) * var(2, 1), Eigen::VectorXd::Zero(2), t) == 0.0);

    // Engel, |w| = 3, against the exact f_w . grad psi
    auto E = make_system(builtin_model("engel"));
    Eigen::VectorXd xe = vec({0.3, -0.2, 0.1, 0.4});
    auto psi = var(4, 3) * var(4, 0) + var(4, 3) * var(4, 1);
    auto e = bracket_limit_fit(E, w("112"), psi, xe, geometric_samples(1e-2, 1e-1, 6));
    const auto grad_exact = E.sharp_derivative(w("112"), psi).evaluate(xe);
    CHECK(e.exact == doctest::Approx(grad_exact));
    CHECK(e.slope == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("conjugated derivative along a flow")
{
    auto H = make_system(builtin_model("heisenberg"));
    Eigen::VectorXd y = vec({0.2, -0.3, 0.1});
    auto chk = conjugated_derivative_check(H, 1, w("2"), var(3, 2), y, 0.4, 1e-3);
    CHECK(chk.residual < 1e-7);
    CHECK(chk.rhs == doctest::Approx(1.0));
    auto chk2 = conjugated_derivative_check(H, 1, w("2"), var(3, 0) * var(3, 2), y, 0.4, 1e-3);
    CHECK(chk2.residual < 1e-7);
    // commuting case: Z = X_1 and w = 1 give zero on both sides
    auto same = conjugated_derivative_check(H, 1, w("1"), var(3, 0) * var(3, 2), y, 0.3, 1e-3);
    CHECK(std::abs(same.rhs) < 1e-12);
    CHECK(std::abs(same.lhs) < 1e-7);

    auto G = make_system(builtin_model("grushin"));
    Eigen::VectorXd g = vec({0.5, 0.2});
    auto psi = var(2, 0) * var(2, 1) + var(2, 1) * var(2, 1);
    std::vector<double> hs{1e-2, 5e-3, 2.5e-3};
    std::vector<double> res;
    for (double h : hs)
        res.push_back(conjugated_derivative_check(G, 2, w("1"), psi, g, 0.3, h).residual);
    for (double r : res)
        CHECK(r < 1e-6);
}

TEST_CASE("Taylor expansion of composed flows")
{
    auto H = make_system(builtin_model("heisenberg"));
    Eigen::VectorXd x = vec({0.2, -0.1, 0.3});
    auto psi = var(3, 0) * var(3, 2) + var(3, 1);
    std::vector<double> ts = geometric_samples(1e-2, 1e-1, 6), rem;
    for (double t : ts) {
        auto tc = taylor_composed_flows(H, psi, w("12"), x, t, 3);
        CHECK(tc.remainder == doctest::Approx(std::abs(tc.value - tc.partial_sum)));
        rem.push_back(tc.remainder);
    }
    auto [slope, icpt] = loglog_fit(ts, rem);
    CHECK(slope >= 2.8);

    // constant fields: once the order exceeds deg psi the remainder vanishes
    auto flat = make_system(builtin_model("flat2"));
    auto q = var(2, 0) * var(2, 0) * var(2, 1);
    auto tc = taylor_composed_flows(flat, q, w("12"), vec({0.3, 0.4}), 0.2, 4);
    CHECK(tc.remainder < 1e-14);
    auto partial = taylor_composed_flows(flat, q, w("12"), vec({0.3, 0.4}), 0.2, 3);
    // leading missing term is the t^3 coefficient t^3 * 1
    CHECK(partial.remainder == doctest::Approx(0.008).epsilon(1e-9));
}

TEST_CASE("models: registry and JSON copies")
{
    auto names = builtin_model_names();
    CHECK(names.size() >= 4);
    for (const auto& name : names) {
        auto m = builtin_model(name);
        INFO(name);
        auto round = parse_model_json(model_to_json(m));
        CHECK(round.fields == m.fields);
        CHECK(round.n == m.n);
        CHECK(round.s == m.s);
        auto path = std::filesystem::path(LIEBOX_SOURCE_DIR) / "core" / "models" / (name + ".json");
        REQUIRE(std::filesystem::exists(path));
        auto file = load_model_file(path);
        CHECK(file.fields == m.fields);
        CHECK(file.m == m.m);
        CHECK(resolve_model(path.string()).fields == m.fields);
    }
    auto h = builtin_model("heisenberg");
    CHECK(h.n == 3);
    CHECK(h.m == 2);
    CHECK(h.s == 2);
    CHECK(builtin_model("engel").s == 3);
    CHECK(builtin_model("martinet").s == 3);
    CHECK_THROWS_AS(builtin_model("nope"), UnknownModel);
    CHECK_THROWS_AS(resolve_model("nope"), UnknownModel);
    CHECK_THROWS(parse_model_json(R"({"n": 2, "m": 1, "s": 1, "fields": [[[]]]})"));
    CHECK_THROWS(parse_model_json("not json"));
}
