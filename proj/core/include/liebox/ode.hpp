#pragma once

// Adaptive Dormand-Prince 5(4) integration of autonomous ODEs, and flows of
// linear combinations of compiled polynomial fields, optionally carrying the
// first variations with respect to the start point and to the coefficients.

#include "liebox/polynomial.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace liebox {

/// Trajectory left the confinement box.
class DomainEscape : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive step fell below the representable minimum, or too many steps.
class StepUnderflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DomainBox {
    double lower = -10.0;
    double upper = 10.0;

    bool contains(const Eigen::VectorXd& y, int dims) const
    {
        for (int i = 0; i < dims; ++i)
            if (!(y[i] >= lower && y[i] <= upper))
                return false;
        return true;
    }
};

struct FlowOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double horizon = 10.0;  // largest admissible |t| for one flow
    DomainBox domain;
    int max_steps = 200000;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DP54 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Integrates y' = rhs(y) from 0 to t_end in place. `rhs(y, dy)` writes the
/// derivative. The first `confined_dims` components must stay in `domain`.
/// Returns the number of accepted steps.
template <class Rhs>
int integrate(Rhs&& rhs, double t_end, Eigen::VectorXd& y, const FlowOptions& opt, int confined_dims)
{
    using T = detail::DP54;
    if (!std::isfinite(t_end))
        throw std::invalid_argument("integrate: non-finite time");
    if (std::abs(t_end) > opt.horizon)
        throw std::invalid_argument("integrate: |t| = " + std::to_string(std::abs(t_end)) + " exceeds horizon " +
                                    std::to_string(opt.horizon));
    if (!opt.domain.contains(y, confined_dims))
        throw DomainEscape("integrate: start point outside the domain box");
    if (t_end == 0.0)
        return 0;

    const Eigen::Index n = y.size();
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);
    const double dir = t_end > 0 ? 1.0 : -1.0;
    double t = 0.0;
    double h = t_end;  // polynomial flows of low degree are often exact in one step
    int steps = 0;
    int attempts = 0;
    rhs(y, k1);
    while (dir * (t_end - t) > 0) {
        if (++attempts > opt.max_steps)
            throw StepUnderflow("integrate: step budget exhausted");
        if (dir * (t + h - t_end) > 0)
            h = t_end - t;
        tmp = y + h * T::a21 * k1;
        rhs(tmp, k2);
        tmp = y + h * (T::a31 * k1 + T::a32 * k2);
        rhs(tmp, k3);
        tmp = y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
        rhs(tmp, k4);
        tmp = y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
        rhs(tmp, k5);
        tmp = y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5);
        rhs(tmp, k6);
        ynew = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
        rhs(ynew, k7);
        err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);

        double ratio = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            ratio = std::max(ratio, std::abs(err[i]) / scale);
        }
        if (!std::isfinite(ratio))
            ratio = 1e10;
        if (ratio <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;
            ++steps;
            if (!opt.domain.contains(y, confined_dims))
                throw DomainEscape("integrate: trajectory left the domain box");
        }
        double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
        h *= factor;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
            throw StepUnderflow("integrate: step size underflow");
    }
    return steps;
}

/// e^{t F} x for F = sum_k u_k F_k.
Eigen::VectorXd flow(const CompiledFamily& family, std::span<const double> u, double t, const Eigen::VectorXd& x,
                     const FlowOptions& opt = {});

/// Flow of the single member k of the family.
Eigen::VectorXd flow(const CompiledFamily& family, int k, double t, const Eigen::VectorXd& x,
                     const FlowOptions& opt = {});

struct FlowSensitivity {
    Eigen::VectorXd point;
    Eigen::MatrixXd d_point;   // d endpoint / d x        (n x n)
    Eigen::MatrixXd d_coeffs;  // d endpoint / d u_k      (n x K)
};

/// Flow of sum_k u_k F_k for time t together with its first variations.
FlowSensitivity flow_with_sensitivity(const CompiledFamily& family, std::span<const double> u, double t,
                                      const Eigen::VectorXd& x, const FlowOptions& opt = {});

}  // namespace liebox
