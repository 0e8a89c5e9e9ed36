#include "liebox/metric.hpp"

#include "liebox/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace liebox {

std::string to_string(DistanceKind k)
{
    switch (k) {
    case DistanceKind::fl:
        return "fl";
    case DistanceKind::cc:
        return "cc";
    case DistanceKind::rho:
        return "rho";
    }
    return "?";
}

DistanceKind parse_distance_kind(const std::string& s)
{
    if (s == "fl")
        return DistanceKind::fl;
    if (s == "cc")
        return DistanceKind::cc;
    if (s == "rho")
        return DistanceKind::rho;
    throw std::invalid_argument("unknown distance kind '" + s + "' (fl, cc, rho)");
}

std::string to_string(DistanceStatus s)
{
    switch (s) {
    case DistanceStatus::ok:
        return "ok";
    case DistanceStatus::identical:
        return "identical";
    case DistanceStatus::budget_exhausted:
        return "budget_exhausted";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void project_l1(Eigen::VectorXd& v)
{
    if (v.lpNorm<1>() <= 1.0)
        return;
    std::vector<double> u(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        u[static_cast<std::size_t>(i)] = std::abs(v[i]);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        double t = (cum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0)
            theta = t;
    }
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = std::copysign(std::max(std::abs(v[i]) - theta, 0.0), v[i]);
}

void project_blocks(Eigen::VectorXd& v, int width)
{
    for (Eigen::Index start = 0; start < v.size(); start += width) {
        auto block = v.segment(start, width);
        double nrm = block.norm();
        if (nrm > 1.0)
            block /= nrm;
    }
}

// One path class with a fixed segment layout; parameters beta live in the
// unit l1 ball (fl) or a product of unit l2 balls (cc, rho).
class PathProblem {
public:
    PathProblem(const CommutatorFrame& frame, DistanceKind kind, const Eigen::VectorXd& y)
        : frame_(frame), sys_(frame.system()), kind_(kind), y_(y)
    {
        if (kind_ == DistanceKind::fl)
            width_ = 1;
        else if (kind_ == DistanceKind::cc)
            width_ = sys_.fields_count();
        else
            width_ = frame_.size();
    }

    void set_fl_segments(int count)
    {
        fields_.clear();
        const int m = sys_.fields_count();
        for (int j = 0; j < count; ++j)
            fields_.push_back(j % m + 1);
    }
    void set_durations(std::vector<double> d) { durations_ = std::move(d); }
    const std::vector<double>& durations() const { return durations_; }

    int segments() const
    {
        return kind_ == DistanceKind::fl ? static_cast<int>(fields_.size()) : static_cast<int>(durations_.size());
    }
    int dims() const { return segments() * width_; }

    double weight(int k, double r) const
    {
        if (kind_ == DistanceKind::rho)
            return std::pow(r, frame_.degree(k + 1));
        return r;
    }

    void project(Eigen::VectorXd& beta) const
    {
        if (kind_ == DistanceKind::fl)
            project_l1(beta);
        else
            project_blocks(beta, width_);
    }

    /// Same physical path at radius r_to.
    Eigen::VectorXd rescale(const Eigen::VectorXd& beta, double r_from, double r_to) const
    {
        Eigen::VectorXd out = beta;
        for (Eigen::Index i = 0; i < out.size(); ++i)
            out[i] *= weight(static_cast<int>(i % width_), r_from) / weight(static_cast<int>(i % width_), r_to);
        project(out);
        return out;
    }

    /// Endpoint and d endpoint / d beta; false if a flow failed.
    bool eval(const Eigen::VectorXd& beta, double r, const Eigen::VectorXd& x, Eigen::VectorXd& end,
              Eigen::MatrixXd* jac) const
    {
        const int n = sys_.dim();
        const int segs = segments();
        std::vector<Eigen::MatrixXd> dpoint(static_cast<std::size_t>(segs));
        std::vector<Eigen::MatrixXd> dparam(static_cast<std::size_t>(segs));
        Eigen::VectorXd p = x;
        try {
            for (int j = 0; j < segs; ++j) {
                if (kind_ == DistanceKind::fl) {
                    const int k = fields_[static_cast<std::size_t>(j)];
                    const double tau = r * beta[j];
                    if (!jac) {
                        p = sys_.flow(k, tau, p);
                        continue;
                    }
                    std::vector<double> u(static_cast<std::size_t>(sys_.fields_count()), 0.0);
                    u[static_cast<std::size_t>(k - 1)] = 1.0;
                    auto fs = flow_with_sensitivity(sys_.compiled(), u, tau, p, sys_.flow_options());
                    p = fs.point;
                    dpoint[static_cast<std::size_t>(j)] = fs.d_point;
                    dparam[static_cast<std::size_t>(j)] = r * sys_.compiled().evaluate(k - 1, p);
                } else {
                    const CompiledFamily& fam = kind_ == DistanceKind::cc ? sys_.compiled() : frame_.compiled();
                    std::vector<double> u(static_cast<std::size_t>(width_));
                    for (int k = 0; k < width_; ++k)
                        u[static_cast<std::size_t>(k)] = beta[j * width_ + k] * weight(k, r);
                    const double dt = durations_[static_cast<std::size_t>(j)];
                    if (!jac) {
                        p = flow(fam, u, dt, p, sys_.flow_options());
                        continue;
                    }
                    auto fs = flow_with_sensitivity(fam, u, dt, p, sys_.flow_options());
                    p = fs.point;
                    dpoint[static_cast<std::size_t>(j)] = fs.d_point;
                    Eigen::MatrixXd dc = fs.d_coeffs;
                    for (int k = 0; k < width_; ++k)
                        dc.col(k) *= weight(k, r);
                    dparam[static_cast<std::size_t>(j)] = dc;
                }
            }
        } catch (const std::exception&) {
            return false;
        }
        end = p;
        if (jac) {
            jac->resize(n, dims());
            Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
            for (int j = segs - 1; j >= 0; --j) {
                jac->middleCols(j * width_, width_) = g * dparam[static_cast<std::size_t>(j)];
                g = g * dpoint[static_cast<std::size_t>(j)];
            }
        }
        return end.allFinite();
    }

    ControlPath to_path(const Eigen::VectorXd& beta, double r) const
    {
        ControlPath path;
        path.kind = kind_;
        path.r = r;
        if (kind_ == DistanceKind::fl) {
            path.fields = fields_;
            for (int j = 0; j < segments(); ++j)
                path.times.push_back(r * beta[j]);
        } else {
            path.durations = durations_;
            for (int j = 0; j < segments(); ++j)
                path.controls.push_back(beta.segment(j * width_, width_));
        }
        return path;
    }

private:
    const CommutatorFrame& frame_;
    const VectorFieldSystem& sys_;
    DistanceKind kind_;
    Eigen::VectorXd y_;
    int width_ = 1;
    std::vector<int> fields_;
    std::vector<double> durations_;
};

struct Solver {
    const PathProblem& prob;
    const Eigen::VectorXd& x;
    const Eigen::VectorXd& y;
    const DistanceOptions& opt;
    double tol;

    // Projected Levenberg-Marquardt from beta0; returns the final residual.
    double polish(Eigen::VectorXd& beta, double r) const
    {
        prob.project(beta);
        Eigen::VectorXd end;
        Eigen::MatrixXd jac;
        if (!prob.eval(beta, r, x, end, &jac))
            return kInf;
        Eigen::VectorXd res = end - y;
        double cost = res.squaredNorm();
        double mu = 1e-3 * std::max(1e-12, (jac.transpose() * jac).diagonal().maxCoeff());
        int stall = 0;
        for (int it = 0; it < opt.lm_iterations; ++it) {
            if (std::sqrt(cost) <= tol)
                break;
            const Eigen::MatrixXd h = jac.transpose() * jac;
            const Eigen::VectorXd g = jac.transpose() * res;
            Eigen::MatrixXd a = h;
            a.diagonal().array() += mu;
            Eigen::VectorXd cand = beta - a.ldlt().solve(g);
            prob.project(cand);
            Eigen::VectorXd cend;
            Eigen::MatrixXd cjac;
            bool ok = prob.eval(cand, r, x, cend, &cjac);
            double ccost = ok ? (cend - y).squaredNorm() : kInf;
            if (ccost < cost) {
                stall = ccost > 0.999 * cost ? stall + 1 : 0;
                beta = cand;
                res = cend - y;
                cost = ccost;
                jac = cjac;
                mu = std::max(mu / 3.0, 1e-15);
                if (stall >= 8)
                    break;
            } else {
                mu *= 4.0;
                if (mu > 1e12)
                    break;
            }
        }
        return std::sqrt(cost);
    }

    Eigen::VectorXd random_start(std::mt19937_64& rng) const
    {
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::VectorXd b(prob.dims());
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b[i] = normal(rng);
        if (b.size() == 0)
            return b;
        if (prob.dims() == prob.segments()) {
            b *= unit(rng) / std::max(1e-300, b.lpNorm<1>());
        } else {
            const int width = prob.dims() / std::max(1, prob.segments());
            for (Eigen::Index s = 0; s < b.size(); s += width) {
                auto blk = b.segment(s, width);
                blk *= unit(rng) / std::max(1e-300, blk.norm());
            }
        }
        return b;
    }

    /// Tries the warm starts, then `restarts` random ones.
    std::optional<Eigen::VectorXd> feasible(double r, const std::vector<Eigen::VectorXd>& warm, int restarts,
                                            std::uint64_t stream) const
    {
        for (auto b : warm) {
            if (b.size() != prob.dims())
                continue;
            if (polish(b, r) <= tol)
                return b;
        }
        if (restarts > 0) {
            auto rng = chunk_engine(opt.seed, stream);
            for (int s = 0; s < restarts; ++s) {
                auto b = random_start(rng);
                if (polish(b, r) <= tol)
                    return b;
            }
        }
        return std::nullopt;
    }
};

struct Certificate {
    double r = kInf;
    Eigen::VectorXd beta;
    std::vector<double> durations;  // cc / rho
};

struct BudgetResult {
    Certificate best;
    std::vector<FeasibilityStep> trace;
};

double feasibility_tol(const DistanceOptions& opt, const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    return opt.feasibility_abs + opt.feasibility_rel * (y - x).norm();
}

// Bisection below a feasible (hi, beta_hi).
void bisect(const Solver& solver, Certificate& cert, std::vector<FeasibilityStep>& trace, std::uint64_t stream)
{
    double lo = 0.0;
    for (int it = 0; it < solver.opt.bisection_iterations; ++it) {
        if (cert.r - lo <= solver.opt.bisection_rel_gap * cert.r)
            break;
        const double mid = 0.5 * (lo + cert.r);
        auto warm = solver.prob.rescale(cert.beta, cert.r, mid);
        auto found = solver.feasible(mid, {warm}, 1, stream * 1000 + static_cast<std::uint64_t>(it));
        trace.push_back({mid, found.has_value()});
        if (found) {
            cert.r = mid;
            cert.beta = *found;
        } else {
            lo = mid;
        }
    }
}

// No seed: grow r geometrically from a scale guess until a random start hits.
std::optional<Certificate> initial_search(const Solver& solver, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                          int step, std::vector<FeasibilityStep>& trace, std::uint64_t stream)
{
    const double e = (y - x).norm();
    double r = std::max(e, std::pow(e, 1.0 / step));
    for (int k = 0; k < 6; ++k, r *= 2.0) {
        auto found = solver.feasible(r, {}, solver.opt.starts, stream * 1000 + 900 + static_cast<std::uint64_t>(k));
        trace.push_back({r, found.has_value()});
        if (found)
            return Certificate{r, *found, solver.prob.durations()};
    }
    return std::nullopt;
}

std::vector<double> uniform_durations(int k) { return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k); }

// Splits the longest piece in two equal halves, keeping the path.
void split_longest(std::vector<double>& durations, Eigen::VectorXd& beta, int width)
{
    auto it = std::max_element(durations.begin(), durations.end());
    const auto j = static_cast<Eigen::Index>(it - durations.begin());
    const double half = *it / 2.0;
    *it = half;
    durations.insert(it + 1, half);
    Eigen::VectorXd out(beta.size() + width);
    out << beta.head((j + 1) * width), beta.segment(j * width, width), beta.tail(beta.size() - (j + 1) * width);
    beta = out;
}

// cc path from an fl path: duration |tau_j| / T, control T sign(tau_j) e_k.
std::optional<Certificate> fl_to_cc(const ControlPath& fl, int m)
{
    double total = 0.0;
    for (double t : fl.times)
        total += std::abs(t);
    if (!(total > 0) || !(fl.r > 0))
        return std::nullopt;
    Certificate c;
    c.r = fl.r;
    std::vector<Eigen::VectorXd> blocks;
    for (std::size_t j = 0; j < fl.times.size(); ++j) {
        if (fl.times[j] == 0.0)
            continue;
        c.durations.push_back(std::abs(fl.times[j]) / total);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
        b[fl.fields[j] - 1] = std::copysign(total / fl.r, fl.times[j]);
        blocks.push_back(b);
    }
    c.beta.resize(static_cast<Eigen::Index>(blocks.size()) * m);
    for (std::size_t j = 0; j < blocks.size(); ++j)
        c.beta.segment(static_cast<Eigen::Index>(j) * m, m) = blocks[j];
    return c;
}

// rho path from a cc path: single letter words carry the cc controls.
Certificate cc_to_rho(const Certificate& cc, int m, int q)
{
    Certificate c;
    c.r = cc.r;
    c.durations = cc.durations;
    const auto pieces = static_cast<Eigen::Index>(cc.durations.size());
    c.beta = Eigen::VectorXd::Zero(pieces * q);
    for (Eigen::Index j = 0; j < pieces; ++j)
        c.beta.segment(j * q, m) = cc.beta.segment(j * m, m);
    return c;
}

struct KindRun {
    DistanceEstimate estimate;
    std::vector<Certificate> per_budget;  // best certificate after each budget
};

DistanceEstimate finish(const PathProblem& prob, const Certificate& best, const CommutatorFrame& frame,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& y, DistanceEstimate est)
{
    if (!std::isfinite(best.r)) {
        est.value = kInf;
        est.status = DistanceStatus::budget_exhausted;
        return est;
    }
    est.value = best.r;
    est.status = DistanceStatus::ok;
    est.path = prob.to_path(best.beta, best.r);
    est.residual = (path_endpoint(frame, est.path, x) - y).norm();
    return est;
}

KindRun run_fl(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
               const DistanceOptions& opt)
{
    KindRun run;
    const double tol = feasibility_tol(opt, x, y);
    Certificate best;
    PathProblem prob(frame, DistanceKind::fl, y);
    for (int mu = 1; mu <= opt.budget; ++mu) {
        prob.set_fl_segments(mu);
        Solver solver{prob, x, y, opt, tol};
        const std::uint64_t stream = 100 + static_cast<std::uint64_t>(mu);
        Certificate cur;
        if (std::isfinite(best.r)) {
            Eigen::VectorXd padded(mu);
            padded << best.beta, 0.0;
            auto ok = solver.feasible(best.r, {padded}, 0, stream);
            if (ok)
                cur = Certificate{best.r, *ok, {}};
        }
        if (!std::isfinite(cur.r)) {
            auto found = initial_search(solver, x, y, frame.system().step(), run.estimate.trace, stream);
            if (found)
                cur = *found;
        }
        if (std::isfinite(cur.r)) {
            bisect(solver, cur, run.estimate.trace, stream);
            if (cur.r <= best.r) {
                best = cur;
            }
        }
        if (std::isfinite(best.r) && best.beta.size() < mu) {
            Eigen::VectorXd padded = Eigen::VectorXd::Zero(mu);
            padded.head(best.beta.size()) = best.beta;
            best.beta = padded;
        }
        run.per_budget.push_back(best);
        run.estimate.per_budget.push_back(best.r);
    }
    prob.set_fl_segments(static_cast<int>(best.beta.size() > 0 ? best.beta.size() : opt.budget));
    run.estimate = finish(prob, best, frame, x, y, std::move(run.estimate));
    return run;
}

KindRun run_pieces(DistanceKind kind, const CommutatorFrame& frame, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, const DistanceOptions& opt, const std::vector<Certificate>& seeds)
{
    KindRun run;
    const double tol = feasibility_tol(opt, x, y);
    const int width = kind == DistanceKind::cc ? frame.system().fields_count() : frame.size();
    Certificate best;
    PathProblem prob(frame, kind, y);
    for (int k = 1; k <= opt.budget; ++k) {
        const std::uint64_t stream = (kind == DistanceKind::cc ? 200 : 300) + static_cast<std::uint64_t>(k);
        std::vector<Certificate> candidates;
        if (std::isfinite(best.r)) {
            Certificate c = best;
            while (static_cast<int>(c.durations.size()) < k)
                split_longest(c.durations, c.beta, width);
            candidates.push_back(c);
        }
        if (static_cast<std::size_t>(k) <= seeds.size() && std::isfinite(seeds[static_cast<std::size_t>(k - 1)].r)) {
            Certificate c = seeds[static_cast<std::size_t>(k - 1)];
            if (static_cast<int>(c.durations.size()) <= k) {
                while (static_cast<int>(c.durations.size()) < k)
                    split_longest(c.durations, c.beta, width);
                candidates.push_back(c);
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Certificate& a, const Certificate& b) { return a.r < b.r; });

        Certificate cur;
        for (const auto& c : candidates) {
            prob.set_durations(c.durations);
            Solver solver{prob, x, y, opt, tol};
            auto ok = solver.feasible(c.r, {c.beta}, 0, stream);
            if (ok) {
                cur = Certificate{c.r, *ok, c.durations};
                break;
            }
        }
        if (!std::isfinite(cur.r)) {
            prob.set_durations(uniform_durations(k));
            Solver solver{prob, x, y, opt, tol};
            auto found = initial_search(solver, x, y, frame.system().step(), run.estimate.trace, stream);
            if (found)
                cur = *found;
        }
        if (std::isfinite(cur.r)) {
            prob.set_durations(cur.durations);
            Solver solver{prob, x, y, opt, tol};
            bisect(solver, cur, run.estimate.trace, stream);
            if (cur.r <= best.r)
                best = cur;
        }
        run.per_budget.push_back(best);
        run.estimate.per_budget.push_back(best.r);
    }
    if (std::isfinite(best.r))
        prob.set_durations(best.durations);
    run.estimate = finish(prob, best, frame, x, y, std::move(run.estimate));
    return run;
}

std::vector<Certificate> cc_seeds_from(const KindRun& fl, int m)
{
    std::vector<Certificate> out;
    for (const auto& c : fl.per_budget) {
        if (!std::isfinite(c.r)) {
            out.emplace_back();
            continue;
        }
        ControlPath p;
        p.kind = DistanceKind::fl;
        p.r = c.r;
        for (Eigen::Index j = 0; j < c.beta.size(); ++j) {
            p.fields.push_back(static_cast<int>(j % m) + 1);
            p.times.push_back(c.r * c.beta[j]);
        }
        auto conv = fl_to_cc(p, m);
        out.push_back(conv ? *conv : Certificate{});
    }
    return out;
}

std::vector<Certificate> rho_seeds_from(const KindRun& cc, int m, int q)
{
    std::vector<Certificate> out;
    for (const auto& c : cc.per_budget)
        out.push_back(std::isfinite(c.r) ? cc_to_rho(c, m, q) : Certificate{});
    return out;
}

DistanceEstimate identical_estimate(DistanceKind kind)
{
    DistanceEstimate e;
    e.value = 0.0;
    e.status = DistanceStatus::identical;
    e.path.kind = kind;
    return e;
}

void check_points(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    if (x.size() != frame.dim() || y.size() != frame.dim())
        throw std::invalid_argument("distance: point dimension mismatch");
    const auto& dom = frame.system().flow_options().domain;
    if (!dom.contains(x, frame.dim()) || !dom.contains(y, frame.dim()))
        throw DomainEscape("distance: point outside the domain box");
}

}  // namespace

Eigen::VectorXd path_endpoint(const CommutatorFrame& frame, const ControlPath& path, const Eigen::VectorXd& x)
{
    const auto& sys = frame.system();
    Eigen::VectorXd p = x;
    if (path.kind == DistanceKind::fl) {
        for (std::size_t j = 0; j < path.times.size(); ++j)
            if (path.times[j] != 0.0)
                p = sys.flow(path.fields[j], path.times[j], p);
        return p;
    }
    const bool cc = path.kind == DistanceKind::cc;
    const CompiledFamily& fam = cc ? sys.compiled() : frame.compiled();
    for (std::size_t j = 0; j < path.durations.size(); ++j) {
        const auto& b = path.controls[j];
        std::vector<double> u(static_cast<std::size_t>(b.size()));
        for (Eigen::Index k = 0; k < b.size(); ++k)
            u[static_cast<std::size_t>(k)] =
                b[k] * (cc ? path.r : std::pow(path.r, frame.degree(static_cast<int>(k) + 1)));
        p = flow(fam, u, path.durations[j], p, sys.flow_options());
    }
    return p;
}

DistanceEstimate fl_distance(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const DistanceOptions& opt)
{
    check_points(frame, x, y);
    if (x == y)
        return identical_estimate(DistanceKind::fl);
    return run_fl(frame, x, y, opt).estimate;
}

DistanceTriple distance_triple(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                               const DistanceOptions& opt)
{
    check_points(frame, x, y);
    if (x == y)
        return {identical_estimate(DistanceKind::fl), identical_estimate(DistanceKind::cc),
                identical_estimate(DistanceKind::rho)};
    const int m = frame.system().fields_count();
    auto fl = run_fl(frame, x, y, opt);
    auto cc = run_pieces(DistanceKind::cc, frame, x, y, opt, cc_seeds_from(fl, m));
    auto rho = run_pieces(DistanceKind::rho, frame, x, y, opt, rho_seeds_from(cc, m, frame.size()));
    return {std::move(fl.estimate), std::move(cc.estimate), std::move(rho.estimate)};
}

DistanceEstimate cc_distance(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const DistanceOptions& opt)
{
    check_points(frame, x, y);
    if (x == y)
        return identical_estimate(DistanceKind::cc);
    const int m = frame.system().fields_count();
    auto fl = run_fl(frame, x, y, opt);
    return run_pieces(DistanceKind::cc, frame, x, y, opt, cc_seeds_from(fl, m)).estimate;
}

DistanceEstimate rho_distance(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              const DistanceOptions& opt)
{
    return distance_triple(frame, x, y, opt).rho;
}

DistanceEstimate distance(DistanceKind kind, const CommutatorFrame& frame, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y, const DistanceOptions& opt)
{
    switch (kind) {
    case DistanceKind::fl:
        return fl_distance(frame, x, y, opt);
    case DistanceKind::cc:
        return cc_distance(frame, x, y, opt);
    case DistanceKind::rho:
        return rho_distance(frame, x, y, opt);
    }
    throw std::invalid_argument("distance: bad kind");
}

std::optional<Eigen::VectorXd> frame_coordinates(const CommutatorFrame& frame, std::span<const int> indices,
                                                 const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                                 double give_up_norm)
{
    const int n = frame.dim();
    if (static_cast<int>(indices.size()) != n)
        throw std::invalid_argument("frame_coordinates: frame must have n entries");
    const auto& sys = frame.system();
    const CompiledFamily& fam = frame.compiled();
    const double tol = 1e-13 + 1e-10 * (y - x).norm();

    Eigen::MatrixXd cols(n, n);
    for (int k = 0; k < n; ++k)
        cols.col(k) = fam.evaluate(indices[static_cast<std::size_t>(k)] - 1, x);
    auto lu = cols.fullPivLu();
    if (lu.rank() < n)
        return std::nullopt;
    Eigen::VectorXd u = lu.solve(y - x);

    std::vector<double> full(static_cast<std::size_t>(frame.size()), 0.0);
    auto residual_at = [&](const Eigen::VectorXd& v, Eigen::MatrixXd* jac) -> std::optional<Eigen::VectorXd> {
        for (int k = 0; k < n; ++k)
            full[static_cast<std::size_t>(indices[static_cast<std::size_t>(k)] - 1)] = v[k];
        try {
            if (!jac)
                return flow(fam, full, 1.0, x, sys.flow_options()) - y;
            auto fs = flow_with_sensitivity(fam, full, 1.0, x, sys.flow_options());
            jac->resize(n, n);
            for (int k = 0; k < n; ++k)
                jac->col(k) = fs.d_coeffs.col(indices[static_cast<std::size_t>(k)] - 1);
            return fs.point - y;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };

    Eigen::MatrixXd jac;
    auto res = residual_at(u, &jac);
    for (int it = 0; it < 30 && res; ++it) {
        double nrm = res->norm();
        if (nrm <= tol)
            return u;
        if (u.norm() > give_up_norm)
            return std::nullopt;
        auto jlu = jac.fullPivLu();
        if (jlu.rank() < n)
            return std::nullopt;
        Eigen::VectorXd step = jlu.solve(*res);
        double damp = 1.0;
        std::optional<Eigen::VectorXd> next;
        Eigen::VectorXd cand;
        for (int h = 0; h < 12; ++h, damp *= 0.5) {
            cand = u - damp * step;
            next = residual_at(cand, nullptr);
            if (next && next->norm() < nrm)
                break;
            next.reset();
        }
        if (!next)
            return std::nullopt;
        u = cand;
        res = residual_at(u, &jac);
    }
    if (res && res->norm() <= tol)
        return u;
    return std::nullopt;
}

double frame_weighted_norm(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& u,
                           double r)
{
    double s = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        double v = u[static_cast<Eigen::Index>(k)] / std::pow(r, frame.degree(indices[k]));
        s += v * v;
    }
    return std::sqrt(s);
}

Eigen::VectorXd frame_move(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& b, double r)
{
    std::vector<double> full(static_cast<std::size_t>(frame.size()), 0.0);
    for (std::size_t k = 0; k < indices.size(); ++k)
        full[static_cast<std::size_t>(indices[k] - 1)] +=
            b[static_cast<Eigen::Index>(k)] * std::pow(r, frame.degree(indices[k]));
    return flow(frame.compiled(), full, 1.0, x, frame.system().flow_options());
}

FeffermanPhongReport fefferman_phong_check(DistanceKind kind, const CommutatorFrame& frame,
                                           const std::vector<Eigen::VectorXd>& centers,
                                           const std::vector<Eigen::VectorXd>& directions,
                                           const std::vector<double>& scales, const DistanceOptions& opt)
{
    FeffermanPhongReport rep;
    const double inv_s = 1.0 / frame.system().step();
    double lo = kInf, hi = 0.0;
    for (double sc : scales) {
        ScaleRatio row{sc, 0.0};
        for (const auto& c : centers)
            for (const auto& dir : directions) {
                Eigen::VectorXd y = c + sc * dir.normalized();
                auto est = distance(kind, frame, c, y, opt);
                if (est.status == DistanceStatus::budget_exhausted) {
                    ++rep.exhausted;
                    continue;
                }
                row.max_ratio = std::max(row.max_ratio, est.value / std::pow((y - c).norm(), inv_s));
            }
        rep.scales.push_back(row);
        rep.sup_ratio = std::max(rep.sup_ratio, row.max_ratio);
        lo = std::min(lo, row.max_ratio);
        hi = std::max(hi, row.max_ratio);
    }
    rep.variation = lo > 0 ? hi / lo : kInf;
    return rep;
}

}  // namespace liebox
