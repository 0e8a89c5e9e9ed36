#include "liebox/ballbox.hpp"

#include "liebox/linalg_mp.hpp"
#include "liebox/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace liebox {

namespace {

using RationalColumns = std::vector<std::vector<Rational>>;

RationalColumns rational_columns(const CommutatorFrame& frame, std::span<const Rational> x)
{
    RationalColumns cols;
    for (int j = 1; j <= frame.size(); ++j)
        cols.push_back(frame.coeffs(j).evaluate(x));
    return cols;
}

Rational det_of(const RationalColumns& cols, std::span<const int> indices)
{
    const std::size_t n = indices.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t c = 0; c < n; ++c) {
        const auto& col = cols.at(static_cast<std::size_t>(indices[c] - 1));
        if (col.size() != n)
            throw std::invalid_argument("lambda_I: frame size differs from the dimension");
        for (std::size_t r = 0; r < n; ++r)
            a[r][c] = col[r];
    }
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0)
            ++piv;
        if (piv == n)
            return Rational(0);
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t r = k + 1; r < n; ++r) {
            if (a[r][k] == 0)
                continue;
            Rational f = a[r][k] / a[k][k];
            for (std::size_t c = k; c < n; ++c)
                a[r][c] -= f * a[k][c];
        }
    }
    return det;
}

std::vector<Rational> to_rationals(const Eigen::VectorXd& x)
{
    std::vector<Rational> out;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out.push_back(from_double(x[i]));
    return out;
}

// Calls fn on every increasing tuple 1 <= i_1 < ... < i_n <= q.
template <class Fn>
void for_each_combination(int q, int n, Fn&& fn)
{
    if (n > q)
        return;
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 1);
    while (true) {
        fn(std::span<const int>(idx));
        int k = n - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == q - n + k + 1)
            --k;
        if (k < 0)
            return;
        ++idx[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < n; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

// Box enclosing B(center, radius) for the single-segment rho estimator:
// endpoints over sampled unit directions, widened by `inflate`.
void ball_box(const CommutatorFrame& frame, const std::vector<int>& indices, const Eigen::VectorXd& center,
              double radius, int directions, double inflate, std::uint64_t seed, Eigen::VectorXd& lo,
              Eigen::VectorXd& hi)
{
    const int n = frame.dim();
    lo = center;
    hi = center;
    auto rng = chunk_engine(seed, 0xB0C5);
    std::normal_distribution<double> normal;
    for (int d = 0; d < directions; ++d) {
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i)
            b[i] = normal(rng);
        b.normalize();
        Eigen::VectorXd p = frame_move(frame, indices, center, b, radius);
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    Eigen::VectorXd mid = 0.5 * (lo + hi);
    Eigen::VectorXd half = 0.5 * (hi - lo) * inflate;
    lo = mid - half;
    hi = mid + half;
}

bool member(const CommutatorFrame& frame, const std::vector<int>& indices, const Eigen::VectorXd& x,
            const Eigen::VectorXd& y, double r)
{
    auto u = frame_coordinates(frame, indices, x, y);
    return u && frame_weighted_norm(frame, indices, *u, r) <= 1.0;
}

}  // namespace

Rational lambda_I(const CommutatorFrame& frame, std::span<const int> indices, std::span<const Rational> x)
{
    if (static_cast<int>(indices.size()) != frame.dim())
        throw std::invalid_argument("lambda_I: need exactly n indices");
    for (int i : indices)
        if (i < 1 || i > frame.size())
            throw std::out_of_range("lambda_I: index " + std::to_string(i) + " out of range");
    RationalColumns cols(static_cast<std::size_t>(frame.size()));
    for (int i : indices)
        cols[static_cast<std::size_t>(i - 1)] = frame.coeffs(i).evaluate(x);
    return det_of(cols, indices);
}

double lambda_I(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x)
{
    auto xr = to_rationals(x);
    return to_double(lambda_I(frame, indices, xr));
}

std::vector<LambdaEntry> lambda_vector(const CommutatorFrame& frame, const Eigen::VectorXd& x, double r,
                                       std::size_t top_k)
{
    auto xr = to_rationals(x);
    auto cols = rational_columns(frame, xr);
    std::vector<LambdaEntry> out;
    for_each_combination(frame.size(), frame.dim(), [&](std::span<const int> idx) {
        Rational d = det_of(cols, idx);
        if (d == 0)
            return;
        LambdaEntry e;
        e.indices.assign(idx.begin(), idx.end());
        e.lambda = to_double(d);
        e.degree = frame.degree(idx);
        e.scaled = e.lambda * std::pow(r, e.degree);
        out.push_back(std::move(e));
    });
    if (top_k > 0 && out.size() > top_k) {
        std::stable_sort(out.begin(), out.end(), [](const LambdaEntry& a, const LambdaEntry& b) {
            return std::abs(a.scaled) > std::abs(b.scaled);
        });
        out.resize(top_k);
    }
    return out;
}

double lambda_norm(const CommutatorFrame& frame, const Eigen::VectorXd& x, double r)
{
    double sum = 0.0;
    for (const auto& e : lambda_vector(frame, x, r))
        sum += e.scaled * e.scaled;
    return std::sqrt(static_cast<double>(factorial(frame.dim())) * sum);
}

double nu(const CommutatorFrame& frame, const std::vector<Eigen::VectorXd>& samples)
{
    double out = std::numeric_limits<double>::infinity();
    for (const auto& x : samples)
        out = std::min(out, lambda_norm(frame, x, 1.0));
    return out;
}

MaximalTriple select_maximal(const CommutatorFrame& frame, const Eigen::VectorXd& x, double r, double eta)
{
    if (!(eta > 0 && eta < 1))
        throw std::invalid_argument("select_maximal: eta must lie in (0,1)");
    if (!(r > 0))
        throw std::invalid_argument("select_maximal: radius must be positive");
    auto entries = lambda_vector(frame, x, r);
    if (entries.empty())
        throw HormanderViolation("every frame determinant vanishes at the given point");
    MaximalTriple t;
    t.x = x;
    t.r = r;
    t.eta = eta;
    std::size_t best = 0;
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (std::abs(entries[i].scaled) > std::abs(entries[best].scaled))
            best = i;
    t.indices = entries[best].indices;
    t.lambda = entries[best].lambda;
    t.score = std::abs(entries[best].scaled);
    t.max_score = t.score;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (i != best)
            t.runner_up = std::max(t.runner_up, std::abs(entries[i].scaled));
    t.certified = t.score > eta * t.max_score;
    return t;
}

NewtonResult solve_e_map(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x,
                         double r, const Eigen::VectorXd& y, int max_iterations, double tol)
{
    const int n = frame.dim();
    NewtonResult out;
    out.h.assign(static_cast<std::size_t>(n), 0.0);
    const double target = tol * r;
    auto residual = [&](const std::vector<double>& h) -> std::optional<Eigen::VectorXd> {
        try {
            return e_map(frame, indices, x, r, h) - y;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    auto res = residual(out.h);
    if (!res)
        return out;
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it;
        out.residual = res->norm();
        if (out.residual <= target) {
            out.converged = true;
            return out;
        }
        EJacobian jac;
        try {
            jac = jacobian_e(frame, indices, x, r, out.h);
        } catch (const std::exception&) {
            return out;
        }
        auto lu = jac.jacobian.fullPivLu();
        if (lu.rank() < n)
            return out;
        Eigen::VectorXd step = lu.solve(*res);
        double damp = 1.0;
        bool moved = false;
        for (int k = 0; k < 20; ++k, damp *= 0.5) {
            std::vector<double> cand = out.h;
            for (int i = 0; i < n; ++i)
                cand[static_cast<std::size_t>(i)] -= damp * step[i];
            auto cres = residual(cand);
            if (cres && cres->norm() < out.residual) {
                out.h = cand;
                res = cres;
                moved = true;
                break;
            }
        }
        if (!moved)
            return out;
    }
    out.residual = res->norm();
    out.converged = out.residual <= target;
    return out;
}

InclusionReport inclusion_check(const CommutatorFrame& frame, const MaximalTriple& triple,
                                const InclusionOptions& opt)
{
    if (!(opt.eps > 0) || opt.eps > opt.box_bound)
        throw std::invalid_argument("inclusion_check: eps must lie in (0, box bound]");
    if (!triple.certified)
        throw std::invalid_argument("inclusion_check: the triple is not eta-maximal");
    const int n = frame.dim();
    const int s = frame.system().step();
    const auto& I = triple.indices;
    std::vector<int> degrees;
    for (int i : I)
        degrees.push_back(frame.degree(i));

    InclusionReport rep;
    rep.rho_bound = opt.c * std::pow(opt.eps, s) * triple.r;
    auto rng = chunk_engine(opt.seed, 0x1C1);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < opt.samples; ++k) {
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i)
            b[i] = normal(rng);
        b *= std::pow(unit(rng), 1.0 / n) / b.norm();
        const double rho0 = rep.rho_bound * unit(rng);
        ++rep.targets;
        Eigen::VectorXd y;
        try {
            y = frame_move(frame, I, triple.x, b, rho0);
        } catch (const std::exception&) {
            ++rep.diverged;
            continue;
        }
        auto sol = solve_e_map(frame, I, triple.x, triple.r, y, opt.newton_iterations, opt.newton_tol);
        rep.max_residual = std::max(rep.max_residual, sol.residual);
        const double bn = box_norm(sol.h, degrees);
        rep.max_box_norm = std::max(rep.max_box_norm, bn);
        if (!sol.converged) {
            ++rep.diverged;
            continue;
        }
        if (bn < opt.eps)
            ++rep.solved;
    }
    rep.solve_fraction = rep.targets ? static_cast<double>(rep.solved) / rep.targets : 0.0;

    // Injectivity probe on random pairs in Q_I(eps).
    rep.min_separation_ratio = std::numeric_limits<double>::infinity();
    auto draw = [&] {
        std::vector<double> h(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double side = std::pow(opt.eps, degrees[static_cast<std::size_t>(i)]);
            h[static_cast<std::size_t>(i)] = (2.0 * unit(rng) - 1.0) * side;
        }
        return h;
    };
    for (int k = 0; k < opt.collision_pairs; ++k) {
        auto h1 = draw();
        auto h2 = draw();
        try {
            Eigen::VectorXd p1 = e_map(frame, I, triple.x, triple.r, h1);
            Eigen::VectorXd p2 = e_map(frame, I, triple.x, triple.r, h2);
            double dh = 0.0;
            for (int i = 0; i < n; ++i)
                dh = std::max(dh, std::abs(h1[static_cast<std::size_t>(i)] - h2[static_cast<std::size_t>(i)]));
            const double dp = (p1 - p2).norm();
            if (dh > 1e-6 && dp < 1e-9)
                ++rep.collisions;
            if (dh > 0)
                rep.min_separation_ratio = std::min(rep.min_separation_ratio, dp / dh);
        } catch (const std::exception&) {
        }
    }
    return rep;
}

FrameExpansion express_in_frame(const CommutatorFrame& frame, const Eigen::VectorXd& v, const Eigen::VectorXd& x,
                                std::vector<int> indices, double tol)
{
    if (indices.empty()) {
        indices.resize(static_cast<std::size_t>(frame.size()));
        std::iota(indices.begin(), indices.end(), 1);
    }
    Eigen::MatrixXd cols(frame.dim(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k)
        cols.col(static_cast<Eigen::Index>(k)) = frame.compiled().evaluate(indices[k] - 1, x);
    auto sol = min_norm_solve(cols, v);
    FrameExpansion out;
    out.coefficients = sol.x;
    out.indices = std::move(indices);
    out.residual = sol.residual;
    out.in_span = sol.residual <= tol * std::max(1.0, v.norm());
    return out;
}

AdBoundReport ad_frame_bound(const CommutatorFrame& frame, int z, const Word& w, const Eigen::VectorXd& x,
                             const std::vector<double>& times)
{
    AdBoundReport rep;
    const auto& sys = frame.system();
    for (double t : times) {
        Eigen::VectorXd p = sys.flow(z, t, x);
        auto e = express_in_frame(frame, sys.ad(z, w, p), p);
        rep.max_coefficient = std::max(rep.max_coefficient, e.coefficients.lpNorm<Eigen::Infinity>());
        rep.max_residual = std::max(rep.max_residual, e.residual);
    }
    return rep;
}

DoublingEstimate doubling_ratio(const CommutatorFrame& frame, const Eigen::VectorXd& x, double r,
                                const DoublingOptions& opt)
{
    if (!(r > 0))
        throw std::invalid_argument("doubling_ratio: radius must be positive");
    const int n = frame.dim();
    const auto inner_frame = select_maximal(frame, x, r).indices;
    const auto outer_frame = select_maximal(frame, x, 2 * r).indices;

    DoublingEstimate est;
    est.samples = opt.samples;
    ball_box(frame, outer_frame, x, 2 * r, opt.direction_samples, opt.inflate, opt.seed, est.box_lo, est.box_hi);
    est.box_volume = (est.box_hi - est.box_lo).prod();
    const Eigen::VectorXd mid = 0.5 * (est.box_lo + est.box_hi);
    const Eigen::VectorXd half = 0.5 * (est.box_hi - est.box_lo);

    struct Counts {
        std::size_t inner = 0, outer = 0, both = 0;
        bool touched = false;
    };
    std::vector<Counts> per_chunk(chunk_count(opt.samples, kSampleChunk));
    for_each_chunk(opt.samples, kSampleChunk, opt.workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
        auto rng = chunk_engine(opt.seed, c);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Counts cnt;
        Eigen::VectorXd y(n);
        for (std::size_t s = begin; s < end; ++s) {
            for (int i = 0; i < n; ++i)
                y[i] = est.box_lo[i] + unit(rng) * (est.box_hi[i] - est.box_lo[i]);
            auto u_out = frame_coordinates(frame, outer_frame, x, y);
            bool in_outer = u_out && frame_weighted_norm(frame, outer_frame, *u_out, 2 * r) <= 1.0;
            bool in_inner = false;
            if (inner_frame == outer_frame)
                in_inner = u_out && frame_weighted_norm(frame, inner_frame, *u_out, r) <= 1.0;
            else
                in_inner = member(frame, inner_frame, x, y, r);
            cnt.outer += in_outer;
            cnt.inner += in_inner;
            cnt.both += in_outer && in_inner;
            if (in_outer && ((y - mid).cwiseAbs().cwiseQuotient(half)).maxCoeff() > 0.98)
                cnt.touched = true;
        }
        per_chunk[c] = cnt;
    });
    std::size_t both = 0;
    for (const auto& c : per_chunk) {
        est.inner += c.inner;
        est.outer += c.outer;
        both += c.both;
        est.box_touched = est.box_touched || c.touched;
    }
    if (est.inner == 0)
        throw std::runtime_error("doubling_ratio: no sample landed in the inner ball");
    const double scale = est.box_volume / static_cast<double>(opt.samples);
    est.volume_r = scale * static_cast<double>(est.inner);
    est.volume_2r = scale * static_cast<double>(est.outer);
    est.ratio = static_cast<double>(est.outer) / static_cast<double>(est.inner);
    auto [pl, ph] = wilson_interval(both, est.outer);
    est.ci_low = ph > 0 ? 1.0 / ph : 0.0;
    est.ci_high = pl > 0 ? 1.0 / pl : std::numeric_limits<double>::infinity();
    return est;
}

std::vector<PoincareResult> poincare_check(const CommutatorFrame& frame, const std::vector<Polynomial>& fs,
                                           const Eigen::VectorXd& x, double r, const PoincareOptions& opt)
{
    if (!(r > 0) || !(opt.enlarge >= 1))
        throw std::invalid_argument("poincare_check: need r > 0 and enlarge >= 1");
    const int n = frame.dim();
    const auto& sys = frame.system();
    const int m = sys.fields_count();
    const double big = opt.enlarge * r;
    const auto inner_frame = select_maximal(frame, x, r).indices;
    const auto outer_frame = select_maximal(frame, x, big).indices;

    // r X_j f for every f and j.
    std::vector<std::vector<Polynomial>> grads;
    for (const auto& f : fs) {
        if (f.nvars() != n)
            throw std::invalid_argument("poincare_check: polynomial in the wrong number of variables");
        std::vector<Polynomial> row;
        for (int j = 1; j <= m; ++j)
            row.push_back(sys.horizontal_derivative(j, f) * from_double(r));
        grads.push_back(std::move(row));
    }

    Eigen::VectorXd lo, hi;
    ball_box(frame, outer_frame, x, big, opt.direction_samples, opt.inflate, opt.seed, lo, hi);
    const double box_volume = (hi - lo).prod();

    struct Chunk {
        std::vector<Eigen::VectorXd> inner_points;
        std::vector<double> rhs;
        std::size_t outer = 0;
    };
    std::vector<Chunk> chunks(chunk_count(opt.samples, kSampleChunk));
    for_each_chunk(opt.samples, kSampleChunk, opt.workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
        auto rng = chunk_engine(opt.seed, c);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Chunk ch;
        ch.rhs.assign(fs.size(), 0.0);
        Eigen::VectorXd y(n);
        for (std::size_t s = begin; s < end; ++s) {
            for (int i = 0; i < n; ++i)
                y[i] = lo[i] + unit(rng) * (hi[i] - lo[i]);
            auto u = frame_coordinates(frame, outer_frame, x, y);
            if (!u || frame_weighted_norm(frame, outer_frame, *u, big) > 1.0)
                continue;
            ++ch.outer;
            for (std::size_t k = 0; k < fs.size(); ++k)
                for (const auto& g : grads[k])
                    ch.rhs[k] += std::abs(g.evaluate(y));
            bool in_inner = inner_frame == outer_frame ? frame_weighted_norm(frame, inner_frame, *u, r) <= 1.0
                                                       : member(frame, inner_frame, x, y, r);
            if (in_inner)
                ch.inner_points.push_back(y);
        }
        chunks[c] = std::move(ch);
    });

    const double scale = box_volume / static_cast<double>(opt.samples);
    std::vector<PoincareResult> out(fs.size());
    std::vector<const Eigen::VectorXd*> inner;
    std::size_t outer = 0;
    for (const auto& ch : chunks) {
        outer += ch.outer;
        for (const auto& p : ch.inner_points)
            inner.push_back(&p);
    }
    if (inner.empty())
        throw std::runtime_error("poincare_check: no sample landed in the ball");
    for (std::size_t k = 0; k < fs.size(); ++k) {
        std::vector<double> vals;
        vals.reserve(inner.size());
        for (const auto* p : inner)
            vals.push_back(fs[k].evaluate(*p));
        double mean = 0.0;
        for (double v : vals)
            mean += v;
        mean /= static_cast<double>(vals.size());
        double osc = 0.0;
        for (double v : vals)
            osc += std::abs(v - mean);
        double rhs = 0.0;
        for (const auto& ch : chunks)
            rhs += ch.rhs[k];
        out[k].lhs = scale * osc;
        out[k].rhs = scale * rhs;
        out[k].ratio = out[k].rhs > 0 ? out[k].lhs / out[k].rhs : std::numeric_limits<double>::infinity();
        out[k].inner = inner.size();
        out[k].outer = outer;
    }
    return out;
}

std::vector<Polynomial> poincare_suite(int nvars)
{
    auto v = [nvars](int i) { return Polynomial::variable(nvars, i); };
    if (nvars == 2) {
        auto x = v(0), y = v(1);
        return {x, y, x * x, x * y, y * y, x * x * y, x * y * y, x * x * x - y, x + y * y, x * x + y * y};
    }
    if (nvars < 2)
        throw std::invalid_argument("poincare_suite: need at least two variables");
    auto x = v(0), y = v(1), z = v(2);
    return {x, y, z, x * x, x * y, z * z, x * z, y * z + x, x * x * x - z, x * y * z};
}

}  // namespace liebox
