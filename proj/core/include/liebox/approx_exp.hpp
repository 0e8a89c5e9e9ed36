#pragma once

// The commutator family P = {Y_1..Y_q} = {X_w : 1 <= |w| <= s}, approximate
// exponentials C_tau / exp_ap built from plain flows of the generators, the
// almost exponential map E_{I,x,r}, box norms and the Jacobian of E.

#include "liebox/vfield.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace liebox {

/// Words ordered by (length, lexicographic); public indices are 1-based.
class CommutatorFrame {
public:
    CommutatorFrame() = default;
    explicit CommutatorFrame(VectorFieldSystem system);

    const VectorFieldSystem& system() const noexcept { return system_; }
    int dim() const noexcept { return system_.dim(); }
    int size() const noexcept { return static_cast<int>(words_.size()); }

    const Word& word(int j) const { return words_.at(static_cast<std::size_t>(j - 1)); }
    int degree(int j) const { return static_cast<int>(word(j).size()); }
    /// g_j with Y_j = g_j . grad.
    const PolyMap& coeffs(int j) const { return system_.commutator_coeffs(word(j)); }
    /// 1-based index of w; throws if w is not in the family.
    int index_of(const Word& w) const;

    /// n x q matrix of columns Y_j(x).
    Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const { return compiled_.evaluate_all(x); }
    /// All g_j compiled over one monomial basis, member j-1 is Y_j.
    const CompiledFamily& compiled() const noexcept { return compiled_; }

    /// Sum of degrees over a tuple of indices.
    int degree(std::span<const int> indices) const;

private:
    VectorFieldSystem system_;
    std::vector<Word> words_;
    CompiledFamily compiled_;
};

/// C_tau(X_{w_1},...,X_{w_l}) as plain flows in application order.
std::vector<FlowStep> c_steps(const Word& w, double tau);
Eigen::VectorXd c_map(const VectorFieldSystem& sys, double tau, const Word& w, const Eigen::VectorXd& x);

/// exp_ap(t X_w): C_{t^{1/l}} for t >= 0, the inverse of C_{|t|^{1/l}} for
/// t < 0. With scale r the flows use tau = |t|^{1/l} r, which realizes
/// exp_ap(t r^l X_w).
std::vector<FlowStep> exp_ap_steps(double t, const Word& w, double r = 1.0);
Eigen::VectorXd exp_ap(const VectorFieldSystem& sys, double t, const Word& w, const Eigen::VectorXd& x);

/// max_j |h_j|^{1/l_{i_j}}.
double box_norm(std::span<const double> h, std::span<const int> degrees);
/// Strict membership ||h||_I < eps.
bool in_box(std::span<const double> h, std::span<const int> degrees, double eps);

/// E_{I,x,r}(h) = exp_ap(h_1 Y~_{i_1}) ... exp_ap(h_n Y~_{i_n})(x); h_n acts first.
std::vector<FlowStep> e_map_steps(const CommutatorFrame& frame, std::span<const int> indices, double r,
                                  std::span<const double> h);
Eigen::VectorXd e_map(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x,
                      double r, std::span<const double> h);

struct EJacobian {
    Eigen::VectorXd point;
    Eigen::MatrixXd jacobian;
    double det = 0.0;
};

/// Central differences with delta_k = rel_step * max(1, |h_k|).
EJacobian jacobian_e(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x,
                     double r, std::span<const double> h, double rel_step = 1e-5);

}  // namespace liebox
