#include "liebox/approx_exp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liebox {

CommutatorFrame::CommutatorFrame(VectorFieldSystem system) : system_(std::move(system))
{
    const int m = system_.fields_count();
    std::vector<Word> level{Word{}};
    for (int len = 1; len <= system_.step(); ++len) {
        std::vector<Word> next;
        for (const auto& prefix : level)
            for (int a = 1; a <= m; ++a) {
                Word w = prefix;
                w.push_back(a);
                next.push_back(w);
            }
        // prefixes are visited in lex order, so `next` is lex ordered too
        words_.insert(words_.end(), next.begin(), next.end());
        level = std::move(next);
    }
    std::vector<PolyMap> maps;
    for (const auto& w : words_)
        maps.push_back(system_.commutator_coeffs(w));
    compiled_ = CompiledFamily(maps);
}

int CommutatorFrame::index_of(const Word& w) const
{
    auto it = std::find(words_.begin(), words_.end(), w);
    if (it == words_.end())
        throw std::invalid_argument("word " + w.str() + " is not in the commutator family");
    return static_cast<int>(it - words_.begin()) + 1;
}

int CommutatorFrame::degree(std::span<const int> indices) const
{
    int total = 0;
    for (int i : indices)
        total += degree(i);
    return total;
}

std::vector<FlowStep> c_steps(const Word& w, double tau)
{
    if (w.empty())
        throw std::invalid_argument("c_steps: empty word");
    if (w.size() == 1)
        return {{w[0], tau}};
    // C(w_1..w_l) = C(w_2..)^{-1} e^{-tau X_{w_1}} C(w_2..) e^{tau X_{w_1}}
    auto inner = c_steps(w.subword(1, w.size() - 1), tau);
    std::vector<FlowStep> out{{w[0], tau}};
    out.insert(out.end(), inner.begin(), inner.end());
    out.push_back({w[0], -tau});
    auto inv = inverse_steps(inner);
    out.insert(out.end(), inv.begin(), inv.end());
    return out;
}

Eigen::VectorXd c_map(const VectorFieldSystem& sys, double tau, const Word& w, const Eigen::VectorXd& x)
{
    if (!(tau >= 0))
        throw std::invalid_argument("c_map: tau must be nonnegative");
    w.check_alphabet(sys.fields_count());
    auto steps = c_steps(w, tau);
    return sys.compose(steps, x);
}

std::vector<FlowStep> exp_ap_steps(double t, const Word& w, double r)
{
    if (!std::isfinite(t))
        throw std::invalid_argument("exp_ap: non-finite time");
    const double tau = std::pow(std::abs(t), 1.0 / static_cast<double>(w.size())) * r;
    auto steps = c_steps(w, tau);
    return t >= 0 ? steps : inverse_steps(steps);
}

Eigen::VectorXd exp_ap(const VectorFieldSystem& sys, double t, const Word& w, const Eigen::VectorXd& x)
{
    w.check_alphabet(sys.fields_count());
    auto steps = exp_ap_steps(t, w);
    return sys.compose(steps, x);
}

double box_norm(std::span<const double> h, std::span<const int> degrees)
{
    if (h.size() != degrees.size())
        throw std::invalid_argument("box_norm: size mismatch");
    double out = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j)
        out = std::max(out, std::pow(std::abs(h[j]), 1.0 / degrees[j]));
    return out;
}

bool in_box(std::span<const double> h, std::span<const int> degrees, double eps)
{
    return box_norm(h, degrees) < eps;
}

std::vector<FlowStep> e_map_steps(const CommutatorFrame& frame, std::span<const int> indices, double r,
                                  std::span<const double> h)
{
    if (indices.size() != h.size())
        throw std::invalid_argument("e_map: frame and coordinates differ in length");
    if (!(r > 0))
        throw std::invalid_argument("e_map: radius must be positive");
    std::vector<FlowStep> out;
    for (std::size_t k = indices.size(); k-- > 0;) {
        if (h[k] == 0.0)
            continue;
        auto part = exp_ap_steps(h[k], frame.word(indices[k]), r);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

Eigen::VectorXd e_map(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x,
                      double r, std::span<const double> h)
{
    auto steps = e_map_steps(frame, indices, r, h);
    return frame.system().compose(steps, x);
}

EJacobian jacobian_e(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x,
                     double r, std::span<const double> h, double rel_step)
{
    const int n = frame.dim();
    if (static_cast<int>(indices.size()) != n)
        throw std::invalid_argument("jacobian_e: frame must have n entries");
    EJacobian out;
    out.point = e_map(frame, indices, x, r, h);
    out.jacobian.resize(n, n);
    std::vector<double> hp(h.begin(), h.end());
    for (int k = 0; k < n; ++k) {
        const double d = rel_step * std::max(1.0, std::abs(h[static_cast<std::size_t>(k)]));
        const double saved = hp[static_cast<std::size_t>(k)];
        hp[static_cast<std::size_t>(k)] = saved + d;
        Eigen::VectorXd plus = e_map(frame, indices, x, r, hp);
        hp[static_cast<std::size_t>(k)] = saved - d;
        Eigen::VectorXd minus = e_map(frame, indices, x, r, hp);
        hp[static_cast<std::size_t>(k)] = saved;
        out.jacobian.col(k) = (plus - minus) / (2.0 * d);
    }
    out.det = out.jacobian.determinant();
    return out;
}

}  // namespace liebox
