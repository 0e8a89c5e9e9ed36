#include "liebox/vfield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace liebox {

std::vector<FlowStep> inverse_steps(std::span<const FlowStep> steps)
{
    std::vector<FlowStep> out;
    out.reserve(steps.size());
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        out.push_back({it->field, -it->time});
    return out;
}

PolyMap commutator_coeffs_uncached(const std::vector<PolyMap>& fields, const Word& w)
{
    if (w.empty())
        throw std::invalid_argument("commutator_coeffs: empty word");
    w.check_alphabet(static_cast<int>(fields.size()));
    const int n = fields.front().dim();
    const int len = static_cast<int>(w.size());
    PolyMap total(n);
    for (const auto& entry : pi_table(len).support()) {
        Word sw = apply_perm(entry.sigma, w);
        PolyMap g = fields[static_cast<std::size_t>(sw.back() - 1)];
        for (int i = len - 2; i >= 0; --i)
            g = directional_derivative(fields[static_cast<std::size_t>(sw[static_cast<std::size_t>(i)] - 1)], g);
        total += g * Rational(entry.coefficient);
    }
    return total;
}

VectorFieldSystem::VectorFieldSystem(std::string name, std::vector<PolyMap> fields, int step, FlowOptions options)
    : name_(std::move(name)), step_(step), fields_(std::move(fields)), options_(options)
{
    if (fields_.empty())
        throw std::invalid_argument("VectorFieldSystem: no fields");
    n_ = fields_.front().dim();
    for (const auto& f : fields_) {
        if (f.dim() != n_)
            throw std::invalid_argument("VectorFieldSystem: fields of different dimension");
        for (const auto& c : f.components())
            if (c.nvars() != n_)
                throw std::invalid_argument("VectorFieldSystem: component in the wrong number of variables");
    }
    if (step_ < 1 || step_ > kDefaultMaxPiOrder)
        throw std::invalid_argument("VectorFieldSystem: step out of range");
    compiled_ = CompiledFamily(fields_);

    // Every word up to the step, shortest first.
    const int m = fields_count();
    std::vector<Word> level{Word{}};
    for (int len = 1; len <= step_; ++len) {
        std::vector<Word> next;
        for (const auto& prefix : level)
            for (int a = 1; a <= m; ++a) {
                Word w = prefix;
                w.push_back(a);
                cache_.emplace(w, commutator_coeffs_uncached(fields_, w));
                next.push_back(std::move(w));
            }
        level = std::move(next);
    }
}

const PolyMap& VectorFieldSystem::field(int j) const
{
    if (j < 1 || j > fields_count())
        throw std::out_of_range("field index " + std::to_string(j) + " out of range");
    return fields_[static_cast<std::size_t>(j - 1)];
}

Polynomial VectorFieldSystem::horizontal_derivative(int j, const Polynomial& g) const
{
    return directional_derivative(field(j), g);
}

PolyMap VectorFieldSystem::horizontal_derivative(int j, const PolyMap& g) const
{
    return directional_derivative(field(j), g);
}

const PolyMap& VectorFieldSystem::commutator_coeffs(const Word& w) const
{
    if (static_cast<int>(w.size()) > step_)
        throw std::out_of_range("commutator_coeffs: |w| = " + std::to_string(w.size()) + " exceeds step " +
                                std::to_string(step_));
    auto it = cache_.find(w);
    if (it == cache_.end())
        throw std::invalid_argument("commutator_coeffs: word " + w.str() + " not over the field alphabet");
    return it->second;
}

Polynomial VectorFieldSystem::sharp_derivative(const Word& w, const Polynomial& psi) const
{
    return directional_derivative(commutator_coeffs(w), psi);
}

Polynomial VectorFieldSystem::nested_derivative(const Word& w, const Polynomial& psi) const
{
    w.check_alphabet(fields_count());
    Polynomial total(n_);
    for (const auto& entry : pi_table(static_cast<int>(w.size())).support()) {
        Word sw = apply_perm(entry.sigma, w);
        Polynomial g = psi;
        for (std::size_t i = sw.size(); i-- > 0;)
            g = horizontal_derivative(sw[i], g);
        total += g * Rational(entry.coefficient);
    }
    return total;
}

PolyMap VectorFieldSystem::ad_coeffs(const PolyMap& z, const Word& w) const
{
    const PolyMap& fw = commutator_coeffs(w);
    return directional_derivative(z, fw) - directional_derivative(fw, z);
}

Eigen::VectorXd VectorFieldSystem::ad(int z, const Word& w, const Eigen::VectorXd& x) const
{
    if (z == 0)
        throw std::invalid_argument("ad: field index 0");
    PolyMap zf = field(std::abs(z));
    if (z < 0)
        zf *= Rational(-1);
    return ad(zf, w, x);
}

Eigen::VectorXd VectorFieldSystem::ad(const PolyMap& z, const Word& w, const Eigen::VectorXd& x) const
{
    return ad_coeffs(z, w).evaluate(x);
}

Eigen::VectorXd VectorFieldSystem::flow(int j, double t, const Eigen::VectorXd& x) const
{
    if (j == 0 || std::abs(j) > fields_count())
        throw std::out_of_range("flow: field index " + std::to_string(j) + " out of range");
    return liebox::flow(compiled_, std::abs(j) - 1, j < 0 ? -t : t, x, options_);
}

Eigen::VectorXd VectorFieldSystem::compose(std::span<const FlowStep> steps, const Eigen::VectorXd& x) const
{
    Eigen::VectorXd p = x;
    for (const auto& s : steps)
        if (s.time != 0.0)
            p = flow(s.field, s.time, p);
    return p;
}

Eigen::VectorXd flow_field(const PolyMap& f, double t, const Eigen::VectorXd& x, const FlowOptions& opt)
{
    CompiledFamily fam({f});
    return flow(fam, 0, t, x, opt);
}

Eigen::VectorXd delta(const VectorFieldSystem& sys, const Word& j, double t, const Eigen::VectorXd& x)
{
    std::vector<FlowStep> steps;
    for (std::size_t i = j.size(); i-- > 0;)
        steps.push_back({j[i], t});
    return sys.compose(steps, x);
}

double bracket_via_flows(const VectorFieldSystem& sys, const Word& w, const Polynomial& psi,
                         const Eigen::VectorXd& x, double t)
{
    if (!(t > 0))
        throw std::invalid_argument("bracket_via_flows: t must be positive");
    if (static_cast<int>(w.size()) > sys.step())
        throw std::out_of_range("bracket_via_flows: word longer than the step");
    w.check_alphabet(sys.fields_count());
    const int len = static_cast<int>(w.size());
    double sum = 0.0;
    for (const auto& entry : pi_table(len).support()) {
        // Delta^{sigma_l(w)...sigma_1(w)}: sigma_1(w) acts first.
        Word sw = apply_perm(entry.sigma, w);
        sum += entry.coefficient * psi.evaluate(delta(sys, sw.reversed(), t, x));
    }
    return sum / std::pow(t, len);
}

ConvergenceFit bracket_limit_fit(const VectorFieldSystem& sys, const Word& w, const Polynomial& psi,
                                 const Eigen::VectorXd& x, std::span<const double> ts)
{
    ConvergenceFit fit;
    fit.exact = sys.sharp_derivative(w, psi).evaluate(x);
    for (double t : ts) {
        double q = bracket_via_flows(sys, w, psi, x, t);
        fit.steps.push_back(t);
        fit.values.push_back(q);
        fit.errors.push_back(std::abs(q - fit.exact));
    }
    std::tie(fit.slope, fit.intercept) = loglog_fit(fit.steps, fit.errors);
    return fit;
}

namespace {

Eigen::VectorXd gradient(const Polynomial& psi, const Eigen::VectorXd& y)
{
    Eigen::VectorXd g(psi.nvars());
    for (int i = 0; i < psi.nvars(); ++i)
        g[i] = psi.derivative(i).evaluate(y);
    return g;
}

}  // namespace

ConjugatedCheck conjugated_derivative_check(const VectorFieldSystem& sys, int z, const Word& w,
                                            const Polynomial& psi, const Eigen::VectorXd& y, double t, double h)
{
    if (z == 0 || std::abs(z) > sys.fields_count())
        throw std::out_of_range("conjugated_derivative_check: field index out of range");
    if (static_cast<int>(w.size()) > sys.step() - 1)
        throw std::out_of_range("conjugated_derivative_check: |w| must not exceed step - 1");
    if (!(h > 0))
        throw std::invalid_argument("conjugated_derivative_check: h must be positive");

    const Eigen::VectorXd grad_psi = gradient(psi, y);
    const PolyMap& fw = sys.commutator_coeffs(w);
    std::vector<double> minus_z(static_cast<std::size_t>(sys.fields_count()), 0.0);
    minus_z[static_cast<std::size_t>(std::abs(z) - 1)] = z > 0 ? -1.0 : 1.0;

    // X_w(psi o e^{-sZ})(p) = grad psi(y)^T D e^{-sZ}(p) f_w(p), p = e^{sZ} y.
    auto pulled_back = [&](double s, const Eigen::VectorXd& v_at_p, const Eigen::VectorXd& p) {
        auto back = flow_with_sensitivity(sys.compiled(), minus_z, s, p, sys.flow_options());
        return grad_psi.dot(back.d_point * v_at_p);
    };
    auto g = [&](double s) {
        Eigen::VectorXd p = sys.flow(z, s, y);
        return pulled_back(s, fw.evaluate(p), p);
    };

    auto central = [&](double step) { return (g(t + step) - g(t - step)) / (2.0 * step); };
    ConjugatedCheck out;
    out.lhs = (4.0 * central(h / 2) - central(h)) / 3.0;
    Eigen::VectorXd p = sys.flow(z, t, y);
    out.rhs = pulled_back(t, sys.ad(z, w, p), p);
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

TaylorCheck taylor_composed_flows(const VectorFieldSystem& sys, const Polynomial& psi, const Word& j,
                                  const Eigen::VectorXd& x, double t, int order)
{
    if (order < 1)
        throw std::invalid_argument("taylor_composed_flows: order must be at least 1");
    // polynomial fields are smooth, so any order is meaningful; the cap only
    // bounds the number of derivative terms
    if (order > 12)
        throw std::out_of_range("taylor_composed_flows: order above 12");
    j.check_alphabet(sys.fields_count());
    const std::size_t q = j.size();

    TaylorCheck out;
    out.value = psi.evaluate(delta(sys, j, t, x));

    // Sum over k in N^q with |k| <= order - 1 of
    // X_{j_q}^{k_q} ... X_{j_1}^{k_1} psi (x) t^{|k|} / k!.
    std::function<void(std::size_t, int, const Polynomial&, double)> walk =
        [&](std::size_t slot, int used, const Polynomial& g, double weight) {
            if (slot == q) {
                out.partial_sum += weight * g.evaluate(x);
                return;
            }
            Polynomial cur = g;
            double wk = weight;
            for (int k = 0; used + k <= order - 1; ++k) {
                if (k > 0) {
                    cur = sys.horizontal_derivative(j[slot], cur);
                    wk *= t / k;
                }
                walk(slot + 1, used + k, cur, wk);
                if (cur.is_zero())
                    break;
            }
        };
    walk(0, 0, psi, 1.0);
    out.remainder = std::abs(out.value - out.partial_sum);
    return out;
}

std::pair<double, double> loglog_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("loglog_fit: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0))
            continue;
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2)
        return {std::nan(""), std::nan("")};
    double denom = n * sxx - sx * sx;
    if (denom == 0)
        return {std::nan(""), std::nan("")};
    double slope = (n * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / n};
}

std::vector<double> geometric_samples(double lo, double hi, int n)
{
    if (n < 2 || !(lo > 0) || !(hi > lo))
        throw std::invalid_argument("geometric_samples: need n >= 2 and 0 < lo < hi");
    std::vector<double> out;
    const double ratio = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::exp(ratio * i));
    out.back() = hi;
    return out;
}

}  // namespace liebox
