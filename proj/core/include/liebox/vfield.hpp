#pragma once

// Polynomial vector-field systems X_j = f_j . grad on R^n: exact horizontal
// derivatives, commutator coefficients f_w, flows and composed flows, and
// numeric instance checks of the derivative formulas along flows.

#include "liebox/ode.hpp"
#include "liebox/perm_words.hpp"
#include "liebox/polynomial.hpp"

#include <Eigen/Dense>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace liebox {

/// One flow in a composition: e^{time * X_field}, field 1-based.
struct FlowStep {
    int field;
    double time;
};

/// Reverses the order and negates every time.
std::vector<FlowStep> inverse_steps(std::span<const FlowStep> steps);

class VectorFieldSystem {
public:
    VectorFieldSystem() = default;
    VectorFieldSystem(std::string name, std::vector<PolyMap> fields, int step, FlowOptions options = {});

    const std::string& name() const noexcept { return name_; }
    int dim() const noexcept { return n_; }
    int fields_count() const noexcept { return static_cast<int>(fields_.size()); }
    int step() const noexcept { return step_; }
    const FlowOptions& flow_options() const noexcept { return options_; }
    void set_flow_options(const FlowOptions& o) { options_ = o; }

    /// f_j, j 1-based.
    const PolyMap& field(int j) const;
    const std::vector<PolyMap>& fields() const noexcept { return fields_; }
    const CompiledFamily& compiled() const noexcept { return compiled_; }

    /// X_j g = f_j . grad g.
    Polynomial horizontal_derivative(int j, const Polynomial& g) const;
    PolyMap horizontal_derivative(int j, const PolyMap& g) const;

    /// f_w = sum_sigma pi(sigma) X_{sigma_1(w)} ... X_{sigma_{l-1}(w)} f_{sigma_l(w)};
    /// cached for every |w| <= step.
    const PolyMap& commutator_coeffs(const Word& w) const;

    /// X_w^# psi = f_w . grad psi.
    Polynomial sharp_derivative(const Word& w, const Polynomial& psi) const;
    /// X_w psi = sum_sigma pi(sigma) X_{sigma_1(w)} ... X_{sigma_l(w)} psi.
    Polynomial nested_derivative(const Word& w, const Polynomial& psi) const;

    /// (Z . grad) f_w - (f_w . grad) f_Z as an exact map.
    PolyMap ad_coeffs(const PolyMap& z, const Word& w) const;
    /// Same, for Z = sign(z) X_{|z|}, evaluated at x.
    Eigen::VectorXd ad(int z, const Word& w, const Eigen::VectorXd& x) const;
    Eigen::VectorXd ad(const PolyMap& z, const Word& w, const Eigen::VectorXd& x) const;

    /// e^{t Z} x for Z = sign(j) X_{|j|}.
    Eigen::VectorXd flow(int j, double t, const Eigen::VectorXd& x) const;
    /// Applies the steps in the listed order (first entry acts first).
    Eigen::VectorXd compose(std::span<const FlowStep> steps, const Eigen::VectorXd& x) const;

private:
    std::string name_;
    int n_ = 0;
    int step_ = 0;
    std::vector<PolyMap> fields_;
    FlowOptions options_;
    CompiledFamily compiled_;
    std::map<Word, PolyMap> cache_;
};

/// f_w from the pi-weighted formula for an arbitrary word, without caching.
PolyMap commutator_coeffs_uncached(const std::vector<PolyMap>& fields, const Word& w);

/// Flow of an arbitrary polynomial field.
Eigen::VectorXd flow_field(const PolyMap& f, double t, const Eigen::VectorXd& x, const FlowOptions& opt = {});

/// Delta^{j_1...j_q} x = e^{t X_{j_1}} ... e^{t X_{j_q}} x, so j_q acts first.
Eigen::VectorXd delta(const VectorFieldSystem& sys, const Word& j, double t, const Eigen::VectorXd& x);

/// (1/t^l) sum_sigma pi(sigma) psi(Delta^{sigma_l(w)...sigma_1(w)} x).
double bracket_via_flows(const VectorFieldSystem& sys, const Word& w, const Polynomial& psi,
                         const Eigen::VectorXd& x, double t);

struct ConvergenceFit {
    std::vector<double> steps;
    std::vector<double> values;
    std::vector<double> errors;
    double exact = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
};

/// Quotients at the given t, errors against f_w . grad psi (x), log-log slope.
ConvergenceFit bracket_limit_fit(const VectorFieldSystem& sys, const Word& w, const Polynomial& psi,
                                 const Eigen::VectorXd& x, std::span<const double> ts);

struct ConjugatedCheck {
    double lhs = 0.0;  // d/dt of X_w(psi o e^{-tZ})(e^{tZ} y)
    double rhs = 0.0;  // ad_Z X_w (psi o e^{-tZ})(e^{tZ} y)
    double residual = 0.0;
};

/// Central difference in t with step h, Richardson-extrapolated, against the
/// ad side. Z = sign(z) X_{|z|}.
ConjugatedCheck conjugated_derivative_check(const VectorFieldSystem& sys, int z, const Word& w,
                                            const Polynomial& psi, const Eigen::VectorXd& y, double t, double h);

struct TaylorCheck {
    double value = 0.0;        // psi(Delta x)
    double partial_sum = 0.0;  // terms with |k| <= l - 1
    double remainder = 0.0;
};

/// Taylor expansion of psi(Delta^{j_1..j_q} x) in t up to total order l - 1.
TaylorCheck taylor_composed_flows(const VectorFieldSystem& sys, const Polynomial& psi, const Word& j,
                                  const Eigen::VectorXd& x, double t, int order);

/// Least-squares slope and intercept of log(y) against log(x); pairs with
/// y <= 0 are skipped.
std::pair<double, double> loglog_fit(std::span<const double> x, std::span<const double> y);

/// n geometric samples from lo to hi inclusive.
std::vector<double> geometric_samples(double lo, double hi, int n);

}  // namespace liebox
