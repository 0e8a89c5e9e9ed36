#pragma once

// Frame determinants lambda_I, the scaled tuple Lambda(x,r), eta-maximal frame
// selection, the ball-box inclusion experiment, frame coefficients of a
// vector, and Monte Carlo doubling / Poincare harnesses.

#include "liebox/approx_exp.hpp"
#include "liebox/metric.hpp"
#include "liebox/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace liebox {

class HormanderViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// det[Y_{i_1}(x), ..., Y_{i_n}(x)], exact.
Rational lambda_I(const CommutatorFrame& frame, std::span<const int> indices, std::span<const Rational> x);
/// Same at a double point (converted exactly to rationals first).
double lambda_I(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x);

struct LambdaEntry {
    std::vector<int> indices;  // i_1 < ... < i_n
    double lambda = 0.0;       // lambda_I(x)
    int degree = 0;            // l(I)
    double scaled = 0.0;       // lambda_I(x) r^{l(I)}
};

/// Entries over increasing index tuples with lambda_I(x) != 0, in
/// enumeration order. top_k > 0 keeps the top_k largest |scaled| entries.
std::vector<LambdaEntry> lambda_vector(const CommutatorFrame& frame, const Eigen::VectorXd& x, double r,
                                       std::size_t top_k = 0);
/// Euclidean norm of Lambda over all ordered n-tuples (each increasing tuple
/// stands for n! signed copies, tuples with repeats vanish).
double lambda_norm(const CommutatorFrame& frame, const Eigen::VectorXd& x, double r);
/// nu(A) estimated as the minimum of |Lambda(x,1)| over the sample points.
double nu(const CommutatorFrame& frame, const std::vector<Eigen::VectorXd>& samples);

struct MaximalTriple {
    std::vector<int> indices;
    Eigen::VectorXd x;
    double r = 0.0;
    double eta = 0.5;
    double lambda = 0.0;
    double score = 0.0;      // |lambda_I(x)| r^{l(I)}
    double max_score = 0.0;  // max over all frames
    double runner_up = 0.0;  // best score among the other frames
    bool certified = false;  // score > eta * max_score
};

/// argmax of |lambda_I(x)| r^{l(I)}, lowest enumeration index on ties.
MaximalTriple select_maximal(const CommutatorFrame& frame, const Eigen::VectorXd& x, double r, double eta = 0.5);

struct InclusionOptions {
    double eps = 0.3;
    double c = 0.05;
    int samples = 200;
    std::uint64_t seed = 1;
    double box_bound = 0.5;
    int newton_iterations = 50;
    double newton_tol = 1e-8;  // times r
    int collision_pairs = 200;
};

struct InclusionReport {
    int targets = 0;
    int solved = 0;         // converged with ||h||_I < eps
    int diverged = 0;
    double solve_fraction = 0.0;
    double max_residual = 0.0;
    double max_box_norm = 0.0;
    double rho_bound = 0.0;  // c eps^s r
    int collisions = 0;
    double min_separation_ratio = 0.0;
};

/// Targets y = exp(sum b_k rho0^{l_k} Y_{i_k})(x) with |b| <= 1 and
/// rho0 < c eps^s r, so a rho path certifies rho(x,y) < c eps^s r; each is
/// solved E(h) = y by damped Newton from h = 0.
InclusionReport inclusion_check(const CommutatorFrame& frame, const MaximalTriple& triple,
                                const InclusionOptions& opt = {});

struct NewtonResult {
    std::vector<double> h;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};
NewtonResult solve_e_map(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x,
                         double r, const Eigen::VectorXd& y, int max_iterations = 50, double tol = 1e-8);

struct FrameExpansion {
    Eigen::VectorXd coefficients;  // one per family member used
    std::vector<int> indices;      // which members (1-based)
    double residual = 0.0;
    bool in_span = true;
};

/// Min-norm xi with sum_j Y_j(x) xi_j = v over `indices` (all of P when empty).
FrameExpansion express_in_frame(const CommutatorFrame& frame, const Eigen::VectorXd& v, const Eigen::VectorXd& x,
                                std::vector<int> indices = {}, double tol = 1e-8);

struct AdBoundReport {
    double max_coefficient = 0.0;  // sup of |b|_inf along the samples
    double max_residual = 0.0;
};

/// Frame coefficients of ad_Z X_w along t -> e^{tZ} x, Z = sign(z) X_{|z|}.
AdBoundReport ad_frame_bound(const CommutatorFrame& frame, int z, const Word& w, const Eigen::VectorXd& x,
                             const std::vector<double>& times);

struct BallMembership {
    std::vector<int> indices;  // frame used at this radius
    double r = 0.0;
};

struct DoublingOptions {
    std::size_t samples = 1000000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    int direction_samples = 2000;
    double inflate = 1.25;
};

struct DoublingEstimate {
    std::size_t samples = 0;
    std::size_t inner = 0;  // in B(x,r)
    std::size_t outer = 0;  // in B(x,2r)
    double box_volume = 0.0;
    double volume_r = 0.0;
    double volume_2r = 0.0;
    double ratio = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool box_touched = false;  // an outer-ball sample hit the edge band of the box
    Eigen::VectorXd box_lo;
    Eigen::VectorXd box_hi;
};

/// |B(x,2r)| / |B(x,r)| for the single-segment rho estimator; only rho
/// membership is implemented for volume work.
DoublingEstimate doubling_ratio(const CommutatorFrame& frame, const Eigen::VectorXd& x, double r,
                                const DoublingOptions& opt = {});

struct PoincareOptions {
    double enlarge = 2.0;
    std::size_t samples = 200000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    int direction_samples = 2000;
    double inflate = 1.25;
};

struct PoincareResult {
    double lhs = 0.0;  // integral over B(x,r) of |f - f_B|
    double rhs = 0.0;  // sum_j integral over B(x,Cr) of |r X_j f|
    double ratio = 0.0;
    std::size_t inner = 0;
    std::size_t outer = 0;
};

/// Shared sample stream for every f in the list.
std::vector<PoincareResult> poincare_check(const CommutatorFrame& frame, const std::vector<Polynomial>& fs,
                                           const Eigen::VectorXd& x, double r, const PoincareOptions& opt = {});

/// The fixed ten-polynomial suite in three variables used by the harness.
std::vector<Polynomial> poincare_suite(int nvars);

}  // namespace liebox
