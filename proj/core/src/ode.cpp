#include "liebox/ode.hpp"

#include <vector>

namespace liebox {

Eigen::VectorXd flow(const CompiledFamily& family, std::span<const double> u, double t, const Eigen::VectorXd& x,
                     const FlowOptions& opt)
{
    if (x.size() != family.dim())
        throw std::invalid_argument("flow: point dimension mismatch");
    const Eigen::MatrixXd c = family.combine(u);
    Eigen::VectorXd vals;
    Eigen::VectorXd y = x;
    integrate(
        [&](const Eigen::VectorXd& p, Eigen::VectorXd& dp) {
            family.monomials(p, vals);
            dp.noalias() = c * vals;
        },
        t, y, opt, family.dim());
    return y;
}

Eigen::VectorXd flow(const CompiledFamily& family, int k, double t, const Eigen::VectorXd& x,
                     const FlowOptions& opt)
{
    std::vector<double> u(static_cast<std::size_t>(family.size()), 0.0);
    u.at(static_cast<std::size_t>(k)) = 1.0;
    return flow(family, u, t, x, opt);
}

FlowSensitivity flow_with_sensitivity(const CompiledFamily& family, std::span<const double> u, double t,
                                      const Eigen::VectorXd& x, const FlowOptions& opt)
{
    const int n = family.dim();
    const int K = family.size();
    if (x.size() != n)
        throw std::invalid_argument("flow_with_sensitivity: point dimension mismatch");
    const Eigen::MatrixXd c = family.combine(u);

    // State layout: [y (n) | vec(Dx) (n*n) | vec(Du) (n*K)], column major.
    Eigen::VectorXd state = Eigen::VectorXd::Zero(n + n * n + n * K);
    state.head(n) = x;
    Eigen::Map<Eigen::MatrixXd>(state.data() + n, n, n).setIdentity();

    Eigen::VectorXd vals;
    Eigen::MatrixXd grads;
    integrate(
        [&](const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
            Eigen::VectorXd p = s.head(n);
            family.monomials_with_gradient(p, vals, grads);
            const Eigen::MatrixXd jac = c * grads;  // DF(p)
            ds.resize(s.size());
            ds.head(n).noalias() = c * vals;
            Eigen::Map<const Eigen::MatrixXd> dx(s.data() + n, n, n);
            Eigen::Map<Eigen::MatrixXd>(ds.data() + n, n, n).noalias() = jac * dx;
            Eigen::Map<const Eigen::MatrixXd> du(s.data() + n + n * n, n, K);
            Eigen::Map<Eigen::MatrixXd> ddu(ds.data() + n + n * n, n, K);
            ddu.noalias() = jac * du;
            for (int k = 0; k < K; ++k)
                ddu.col(k).noalias() += family.coefficients(k) * vals;
        },
        t, state, opt, n);

    FlowSensitivity out;
    out.point = state.head(n);
    out.d_point = Eigen::Map<const Eigen::MatrixXd>(state.data() + n, n, n);
    out.d_coeffs = Eigen::Map<const Eigen::MatrixXd>(state.data() + n + n * n, n, K);
    return out;
}

}  // namespace liebox
