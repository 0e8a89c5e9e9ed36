#include "criteria.hpp"

#include "liebox/ballbox.hpp"
#include "liebox/free_lie.hpp"
#include "liebox/linalg_mp.hpp"
#include "liebox/metric.hpp"
#include "liebox/models.hpp"
#include "liebox/nc_poly.hpp"
#include "liebox/perm_words.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace liebox::criteria {

namespace {

struct Spec {
    const char* name;
    double limit;
};

const Spec kSpecs[] = {
    {"pi-tables", 1},
    {"generalized-jacobi-j2", 60},
    {"f-identities", 300},
    {"baker", 1},
    {"witness-triviality", 30},
    {"bracket-limit", 10},
    {"c-map-exactness", 5},
    {"jacobian-structure", 10},
    {"comparability-inclusion", 120},
    {"doubling", 300},
    {"poincare", 300},
    {"tychonoff", 10},
    {"distances", 600},
};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
};

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double a : v)
        x[i++] = a;
    return x;
}

CommutatorFrame frame_of(const char* name) { return CommutatorFrame(make_system(builtin_model(name))); }

std::vector<Word> words(int m, int len)
{
    std::vector<Word> out{Word{}};
    for (int k = 0; k < len; ++k) {
        std::vector<Word> next;
        for (const auto& w : out)
            for (int a = 1; a <= m; ++a) {
                auto v = w;
                v.push_back(a);
                next.push_back(v);
            }
        out = std::move(next);
    }
    return out;
}

std::map<std::string, int> support_map(int order)
{
    std::map<std::string, int> out;
    for (const auto& e : pi_table(order).support())
        out[e.sigma.str()] = e.coefficient;
    return out;
}

void pi_tables(Outcome& o, const Settings&)
{
    const std::map<std::string, int> three{{"123", 1}, {"132", -1}, {"231", -1}, {"321", 1}};
    const std::map<std::string, int> four{{"1234", 1},  {"1243", -1}, {"1342", -1}, {"1432", 1},
                                          {"2341", -1}, {"2431", 1},  {"3421", 1},  {"4321", -1}};
    bool ok3 = support_map(3) == three, ok4 = support_map(4) == four;
    o.pass = ok3 && ok4;
    o.detail << "order3 " << (ok3 ? "match" : "MISMATCH") << ", order4 " << (ok4 ? "match" : "MISMATCH");
}

void generalized_jacobi(Outcome& o, const Settings&)
{
    std::size_t instances = 0, nonzero = 0;
    for (int lv = 1; lv <= 5; ++lv)
        for (const auto& v : words(3, lv))
            for (int lw = 1; lv + lw <= 6; ++lw)
                for (const auto& w : words(3, lw)) {
                    ++instances;
                    nonzero += !check_generalized_jacobi(v, w).is_zero();
                }
    std::size_t j2 = 0, j2_nonzero = 0;
    for (int len = 2; len <= 6; ++len)
        for (const auto& v : words(3, len)) {
            ++j2;
            j2_nonzero += !check_J2(v).is_zero();
        }
    o.pass = nonzero == 0 && j2_nonzero == 0;
    o.detail << "otto " << instances << " instances, " << nonzero << " nonzero; J2 " << j2 << " instances, "
             << j2_nonzero << " nonzero";
}

// Every exponent vector of length p with entries >= 0 and 1 <= sum <= max_sum.
void exponent_vectors(int p, int max_sum, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& fn)
{
    if (static_cast<int>(cur.size()) == p) {
        int s = 0;
        for (int b : cur)
            s += b;
        if (s >= 1)
            fn(cur);
        return;
    }
    int used = 0;
    for (int b : cur)
        used += b;
    for (int b = 0; used + b <= max_sum; ++b) {
        cur.push_back(b);
        exponent_vectors(p, max_sum, cur, fn);
        cur.pop_back();
    }
}

void f_identities(Outcome& o, const Settings&)
{
    std::size_t instances = 0, nonzero = 0;
    for (int l = 1; l <= 5; ++l) {
        Word v;
        for (int i = 1; i <= l; ++i)
            v.push_back(i);
        // w empty, or a fresh letter, or a repeat of the first letter of v
        std::vector<Word> ws{Word{}, Word{l + 1}, Word{1}};
        for (int p = 1; p <= l - 1; ++p) {
            std::vector<int> cur;
            exponent_vectors(p, 4, cur, [&](const std::vector<int>& b) {
                for (const auto& w : ws) {
                    ++instances;
                    nonzero += !check_F(b, v, w).is_zero();
                }
            });
        }
    }
    // the same identities over a two-letter alphabet, where letters repeat
    for (int l = 2; l <= 4; ++l)
        for (const auto& v : words(2, l))
            for (int p = 1; p <= l - 1; ++p) {
                std::vector<int> cur;
                exponent_vectors(p, 4, cur, [&](const std::vector<int>& b) {
                    for (const auto& w : {Word{}, Word{1}, Word{2}}) {
                        ++instances;
                        nonzero += !check_F(b, v, w).is_zero();
                    }
                });
            }

    // p = l must fail: a nonzero residual and the explicit flag
    std::size_t failing = 0, flagged = 0, attempted = 0;
    for (int l = 2; l <= 5; ++l) {
        Word v;
        for (int i = 1; i <= l; ++i)
            v.push_back(i);
        std::vector<int> ones(static_cast<std::size_t>(l), 1);
        ++attempted;
        failing += !f_identity_sum(ones, v, Word{}).is_zero();
        try {
            check_F(ones, v, Word{});
        } catch (const KnownFailure&) {
            ++flagged;
        }
    }
    o.pass = nonzero == 0 && failing == attempted && flagged == attempted;
    o.detail << instances << " instances with p < l, " << nonzero << " nonzero; p = l nonzero in " << failing << "/"
             << attempted << ", flagged " << flagged << "/" << attempted;
}

void baker(Outcome& o, const Settings&)
{
    std::size_t zero = 0, total = 0;
    for (const auto& [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {1, 3}}) {
        for (const auto& r : check_baker(a, b)) {
            ++total;
            zero += r.residual.is_zero();
        }
    }
    o.pass = zero == total;
    o.detail << zero << "/" << total << " residuals exactly zero";
}

NCPoly random_poly(std::mt19937_64& rng, int m, int p, bool multilinear)
{
    std::uniform_int_distribution<int> coeff(-5, 5);
    NCPoly q(m);
    while (q.is_zero()) {
        const int terms = 1 + static_cast<int>(rng() % 5);
        for (int t = 0; t < terms; ++t) {
            Word w;
            if (multilinear) {
                std::vector<int> letters(static_cast<std::size_t>(p));
                for (int i = 0; i < p; ++i)
                    letters[static_cast<std::size_t>(i)] = i + 1;
                std::shuffle(letters.begin(), letters.end(), rng);
                for (int a : letters)
                    w.push_back(a);
            } else {
                for (int i = 0; i < p; ++i)
                    w.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(m)));
            }
            q.add(w, Rational(coeff(rng)));
        }
    }
    return q;
}

// The certificate must point at a nonzero coefficient of the evaluated
// multilinear descendant: the coefficient of the word sigma(1)..sigma(p),
// read back through the relabeling.
bool certificate_valid(const TrivialityResult& r)
{
    if (r.trivial || !r.certificate)
        return false;
    const auto& c = *r.certificate;
    Word w;
    for (int a : c.sigma.images())
        w.push_back(c.relabel.at(static_cast<std::size_t>(a - 1)));
    auto it = c.multilinear.terms().find(w);
    Rational want = it == c.multilinear.terms().end() ? Rational(0) : it->second;
    return c.coefficient != 0 && c.coefficient == want;
}

void witness(Outcome& o, const Settings& s)
{
    std::mt19937_64 rng(s.seed);
    int flagged = 0, certified = 0;
    const int count = 20;
    for (int i = 0; i < count; ++i) {
        // multilinear in p letters (p <= 3 = m) or, every other draw, degree 4 over m <= 3
        const bool ml = i % 2 == 0;
        const int m = ml ? 1 + static_cast<int>(rng() % 3) : 2 + static_cast<int>(rng() % 2);
        const int p = ml ? m : 4;
        auto q = random_poly(rng, m, p, ml);
        auto r = is_trivial(q);
        flagged += !r.trivial;
        certified += certificate_valid(r);
    }
    // zero-witness residuals of the identity families
    int residuals = 0, trivial = 0;
    auto add = [&](const WordSum& w, int m) {
        ++residuals;
        trivial += is_trivial(NCPoly::from_word_sum(w, m)).trivial;
    };
    for (const auto& v : words(3, 2))
        for (const auto& w : words(3, 2))
            add(check_generalized_jacobi(v, w), 3);
    for (int len = 2; len <= 4; ++len)
        for (const auto& v : words(2, len))
            add(check_J2(v), 2);
    add(check_jacobi(Word{1}, Word{2}, Word{3}), 3);
    add(check_F({1, 2}, Word{1, 2, 3}, Word{}), 3);
    add(check_F({0, 2}, Word{1, 2, 3}, Word{4}), 4);
    for (const auto& r : check_baker())
        add(r.residual, 2);
    add(check_giochetto(Word{2, 2, 2, 2, 1}, 1), 2);
    o.pass = flagged == count && certified == count && trivial == residuals;
    o.detail << "nontrivial flagged " << flagged << "/" << count << ", certificates valid " << certified << "/"
             << count << ", residuals trivial " << trivial << "/" << residuals;
}

void bracket_limit(Outcome& o, const Settings&)
{
    auto H = make_system(builtin_model("heisenberg"));
    FlowOptions fo;
    fo.abs_tol = fo.rel_tol = 1e-10;
    H.set_flow_options(fo);
    auto ts = geometric_samples(1e-3, 1e-1, 8);
    auto fit = bracket_limit_fit(H, Word{1, 2}, Polynomial::variable(3, 2), Eigen::VectorXd::Zero(3), ts);
    double max_err = 0.0, last = 0.0;
    for (double e : fit.errors)
        max_err = std::max(max_err, e);
    last = fit.values.back();
    const bool converges = std::abs(fit.values.front() - 1.0) < 1e-6;
    const bool slope_ok = std::abs(fit.slope - 1.0) <= 0.2;
    o.pass = converges && slope_ok;
    o.detail << "quotient at t=1e-3 " << fit.values.front() << ", at t=1e-1 " << last << ", max |error| " << max_err
             << ", log-log slope " << fit.slope << " (want 1.0 +- 0.2)";
    if (max_err < 1e-12)
        o.detail << "; error is at roundoff level for every t, the quotient is exact";
}

void c_map_exact(Outcome& o, const Settings&)
{
    auto H = make_system(builtin_model("heisenberg"));
    double worst = 0.0;
    for (double s : {0.05, 0.1, 0.2}) {
        auto p = c_map(H, s, Word{1, 2}, Eigen::VectorXd::Zero(3));
        worst = std::max(worst, (p - vec({0, 0, s * s})).norm());
    }
    o.pass = worst <= 1e-8;
    o.detail << "max deviation from (0,0,s^2) " << worst;
}

void jacobian_structure(Outcome& o, const Settings&)
{
    struct Case {
        const char* model;
        Eigen::VectorXd x;
        double r;
    };
    std::vector<Case> cases{{"heisenberg", vec({0, 0, 0}), 0.5},
                            {"heisenberg", vec({0.2, -0.1, 0.3}), 0.1},
                            {"grushin", vec({1, 0}), 0.1},
                            {"grushin", vec({0, 0}), 0.1},
                            {"grushin", vec({0.3, 0.2}), 0.2}};
    double worst_col = 0.0, worst_det = 0.0;
    for (const auto& c : cases) {
        auto F = frame_of(c.model);
        auto tri = select_maximal(F, c.x, c.r);
        std::vector<double> h(static_cast<std::size_t>(F.dim()), 0.0);
        auto J = jacobian_e(F, tri.indices, c.x, c.r, h);
        Eigen::MatrixXd Y = F.evaluate(c.x);
        for (int k = 0; k < F.dim(); ++k) {
            const int i = tri.indices[static_cast<std::size_t>(k)];
            Eigen::VectorXd col = std::pow(c.r, F.degree(i)) * Y.col(i - 1);
            worst_col = std::max(worst_col, (J.jacobian.col(k) - col).norm() / col.norm());
        }
        const double want = lambda_I(F, tri.indices, c.x) * std::pow(c.r, F.degree(tri.indices));
        worst_det = std::max(worst_det, std::abs(J.det - want) / std::abs(want));
    }
    o.pass = worst_col <= 1e-4 && worst_det <= 1e-4;
    o.detail << cases.size() << " maximal frames, max column rel error " << worst_col << ", max det rel error "
             << worst_det;
}

void comparability_inclusion(Outcome& o, const Settings& s)
{
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double lo = INFINITY, hi = 0.0;
    int sampled = 0;
    struct Case {
        const char* model;
        Eigen::VectorXd x;
        double r;
    };
    for (const auto& c : std::vector<Case>{{"heisenberg", vec({0, 0, 0}), 0.5},
                                           {"heisenberg", vec({0.1, -0.2, 0.05}), 0.5},
                                           {"grushin", vec({0.5, 0}), 0.1},
                                           {"grushin", vec({0, 0}), 0.5}}) {
        auto F = frame_of(c.model);
        auto tri = select_maximal(F, c.x, c.r);
        std::vector<double> zero(static_cast<std::size_t>(F.dim()), 0.0);
        const double d0 = jacobian_e(F, tri.indices, c.x, c.r, zero).det;
        for (int i = 0; i < 100; ++i) {
            std::vector<double> h(static_cast<std::size_t>(F.dim()));
            for (int k = 0; k < F.dim(); ++k)
                h[static_cast<std::size_t>(k)] = U(rng) * std::pow(0.2, F.degree(tri.indices[static_cast<std::size_t>(k)]));
            const double ratio = jacobian_e(F, tri.indices, c.x, c.r, h).det / d0;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            ++sampled;
        }
    }
    auto H = frame_of("heisenberg");
    auto tri = select_maximal(H, vec({0.1, -0.2, 0.05}), 0.5);
    InclusionOptions io;
    io.samples = 200;
    io.seed = s.seed;
    auto rep = inclusion_check(H, tri, io);
    o.pass = lo >= 0.5 && hi <= 2.0 && rep.solve_fraction == 1.0;
    o.detail << "det ratio in [" << lo << ", " << hi << "] over " << sampled << " box points; inclusion "
             << rep.solved << "/" << rep.targets << " solved, max |h|_I " << rep.max_box_norm << ", collisions "
             << rep.collisions;
}

void doubling(Outcome& o, const Settings& s)
{
    struct Case {
        const char* model;
        Eigen::VectorXd x;
        double want;
    };
    bool ok = true;
    for (const auto& c : std::vector<Case>{{"heisenberg", vec({0, 0, 0}), 16.0}, {"grushin", vec({0, 0}), 8.0}}) {
        auto F = frame_of(c.model);
        std::vector<double> ratios;
        for (std::uint64_t seed : {s.seed, s.seed + 1}) {
            DoublingOptions d;
            d.samples = s.doubling_samples;
            d.seed = seed;
            d.workers = s.workers;
            auto e = doubling_ratio(F, c.x, 0.5, d);
            ratios.push_back(e.ratio);
            ok = ok && std::abs(e.ratio - c.want) <= 0.15 * c.want && !e.box_touched;
            o.detail << c.model << " seed " << seed << ": " << e.ratio << " [" << e.ci_low << ", " << e.ci_high
                     << "]; ";
        }
    }
    o.pass = ok;
    o.detail << "N = " << s.doubling_samples << ", target 16 and 8 within 15%";
}

void poincare(Outcome& o, const Settings& s)
{
    auto H = frame_of("heisenberg");
    auto suite = poincare_suite(3);
    std::vector<double> maxima;
    bool finite = true;
    for (std::uint64_t seed : {s.seed, s.seed + 1, s.seed + 2}) {
        PoincareOptions p;
        p.samples = s.poincare_samples;
        p.seed = seed;
        p.workers = s.workers;
        auto res = poincare_check(H, suite, Eigen::VectorXd::Zero(3), 0.5, p);
        double mx = 0.0;
        for (const auto& r : res) {
            finite = finite && std::isfinite(r.ratio);
            mx = std::max(mx, r.ratio);
        }
        maxima.push_back(mx);
    }
    auto [mn, mxit] = std::minmax_element(maxima.begin(), maxima.end());
    const double spread = (*mxit - *mn) / *mn;
    o.pass = finite && spread <= 0.10;
    o.detail << "suite max per seed";
    for (double m : maxima)
        o.detail << " " << m;
    o.detail << ", spread " << spread * 100 << "%, empirical C " << *mxit;
}

void tychonoff(Outcome& o, const Settings& s)
{
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.1, 2.0);
    auto gaussian = [&](int r, int c) {
        Eigen::MatrixXd A(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                A(i, j) = N(rng);
        return A;
    };
    auto orthogonal = [&](int n) -> Eigen::MatrixXd {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(n, n));
        return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    };
    // Slopes need exactly rank-deficient matrices: a rounded zero singular
    // value eps contributes about eps/lambda^2 to x_lambda and hides the law.
    // Products of small integer factors are exact in double.
    std::uniform_int_distribution<int> K(-3, 3);
    const std::vector<double> lambdas = geometric_samples(1e-5, 1e-2, 9);
    double slope_lo = INFINITY, slope_hi = -INFINITY, worst_component = 0.0;
    for (int sys = 0; sys < 20;) {
        const int n = 5 + sys % 3, q = 7 + sys % 4, rank = 2 + sys % 3;
        Eigen::MatrixXd B(n, rank), C(rank, q);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < rank; ++j)
                B(i, j) = K(rng);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < q; ++j)
                C(i, j) = K(rng);
        Eigen::MatrixXd A = B * C;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        if (svd.singularValues()[rank - 1] < 0.5)
            continue;
        Eigen::VectorXd b = gaussian(n, 1);
        Eigen::VectorXd x_ls = min_norm_solve(A, b).x;
        std::vector<double> errs;
        for (double lam : lambdas)
            errs.push_back((x_ls - tychonoff_solve(A, b, lam)).norm());
        const double slope = loglog_fit(lambdas, errs).first;
        slope_lo = std::min(slope_lo, slope);
        slope_hi = std::max(slope_hi, slope);
        ++sys;
    }
    // error components along the singular directions
    for (int sys = 0; sys < 20; ++sys) {
        const int n = 5 + sys % 3, q = 7 + sys % 4, rank = 2 + sys % 3;
        Eigen::MatrixXd Uo = orthogonal(n), Vo = orthogonal(q);
        Eigen::VectorXd sigma(rank);
        for (int i = 0; i < rank; ++i)
            sigma[i] = U(rng);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, q);
        for (int i = 0; i < rank; ++i)
            A += sigma[i] * Uo.col(i) * Vo.col(i).transpose();
        Eigen::VectorXd b = gaussian(n, 1);
        Eigen::VectorXd x_ls = min_norm_solve(A, b).x;
        for (double lam : geometric_samples(1e-6, 1e-2, 9)) {
            Eigen::VectorXd x = tychonoff_solve(A, b, lam);
            for (int i = 0; i < rank; ++i) {
                const double beta = Uo.col(i).dot(b);
                const double expected = lam * lam * beta / (sigma[i] * (sigma[i] * sigma[i] + lam * lam));
                worst_component = std::max(worst_component, std::abs(Vo.col(i).dot(x_ls - x) - expected));
            }
        }
    }
    // dyadic and Hadamard spectra, where the singular triplets are known exactly
    Eigen::MatrixXd Had(4, 4);
    Had << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
    Had /= 2.0;
    Eigen::Vector4d spec(2.0, 1.0, 0.5, 0.0);
    Eigen::MatrixXd A = Had * spec.asDiagonal() * Had.transpose();
    Eigen::Vector4d b(1.0, -2.0, 0.5, 3.0);
    for (double lam : {1e-1, 1e-3, 1e-5}) {
        Eigen::VectorXd x = tychonoff_solve(A, b, lam);
        Eigen::VectorXd x_ls = min_norm_solve(A, b).x;
        for (int i = 0; i < 3; ++i) {
            const double beta = Had.col(i).dot(b);
            const double expected = lam * lam * beta / (spec[i] * (spec[i] * spec[i] + lam * lam));
            worst_component = std::max(worst_component, std::abs(Had.col(i).dot(x_ls - x) - expected));
        }
    }
    o.pass = slope_lo >= 1.9 && slope_hi <= 2.1 && worst_component <= 1e-10;
    o.detail << "slopes in [" << slope_lo << ", " << slope_hi << "] over 20 integer rank-deficient systems, max component error "
             << worst_component;
}

void distances(Outcome& o, const Settings& s)
{
    auto H = frame_of("heisenberg");
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> U(-0.25, 0.25);
    const double tol = 1e-6;
    int ordered = 0, exhausted = 0;
    for (int i = 0; i < s.distance_pairs; ++i) {
        Eigen::VectorXd x = vec({U(rng), U(rng), U(rng)}), y = vec({U(rng), U(rng), U(rng)});
        DistanceOptions opt;
        opt.seed = s.seed + static_cast<std::uint64_t>(i);
        auto t = distance_triple(H, x, y, opt);
        exhausted += t.fl.status == DistanceStatus::budget_exhausted;
        ordered += t.cc.value <= t.fl.value + tol && t.rho.value <= t.cc.value + tol;
    }
    std::vector<Eigen::VectorXd> centers{vec({0, 0, 0}), vec({0.1, -0.1, 0.05}), vec({-0.2, 0.1, 0.0})};
    std::vector<Eigen::VectorXd> dirs{vec({0, 0, 1}), vec({1, 0, 0}), vec({0.6, 0, 0.8}), vec({0.3, -0.4, 0.866})};
    for (auto& d : dirs)
        d.normalize();
    auto fp = fefferman_phong_check(DistanceKind::cc, H, centers, dirs, {1e-4, 1e-3, 1e-2, 1e-1});
    o.pass = ordered == s.distance_pairs && fp.exhausted == 0 && fp.variation < 3.0;
    o.detail << "ordering holds on " << ordered << "/" << s.distance_pairs << " pairs (" << exhausted
             << " exhausted); cc/|x-y|^(1/2) per scale";
    for (const auto& sc : fp.scales)
        o.detail << " " << sc.scale << ":" << sc.max_ratio;
    o.detail << ", variation " << fp.variation;
}

using Runner = void (*)(Outcome&, const Settings&);
const Runner kRunners[] = {pi_tables,    generalized_jacobi, f_identities, baker,      witness,
                           bracket_limit, c_map_exact,        jacobian_structure, comparability_inclusion,
                           doubling,     poincare,           tychonoff,    distances};

}  // namespace

std::vector<int> ids()
{
    std::vector<int> out;
    for (int i = 1; i <= static_cast<int>(std::size(kSpecs)); ++i)
        out.push_back(i);
    return out;
}

std::string name(int id)
{
    if (id < 1 || id > static_cast<int>(std::size(kSpecs)))
        throw std::out_of_range("criteria: no criterion " + std::to_string(id));
    return kSpecs[id - 1].name;
}

double time_limit(int id)
{
    name(id);
    return kSpecs[id - 1].limit;
}

Result run(int id, const Settings& settings)
{
    Result r;
    r.id = id;
    r.name = name(id);
    r.limit_seconds = time_limit(id);
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
        kRunners[id - 1](o, settings);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " error: " << e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = o.pass;
    r.detail = o.detail.str();
    if (r.seconds > r.limit_seconds) {
        r.pass = false;
        r.detail += "; over the time limit";
    }
    return r;
}

std::string format_line(const Result& r)
{
    std::ostringstream s;
    s << (r.pass ? "PASS" : "FAIL") << "  " << r.id << " " << r.name << "  " << std::fixed;
    s.precision(2);
    s << r.seconds << "s/" << r.limit_seconds << "s  " << r.detail;
    return s.str();
}

}  // namespace liebox::criteria
