#pragma once

// Upper-bound estimators for three control distances between x and y.
//
//   fl   inf r: y = e^{tau_1 X_{k_1}} ... x with sum |tau_j| <= r
//   cc   inf r: piecewise constant gamma' = sum_k c_k X_k, |c| <= r, t in [0,1]
//   rho  inf r: piecewise constant gamma' = sum_j b_j r^{l_j} Y_j, |b| <= 1
//
// For a fixed r the path parameters are scaled into a compact set (an l1 ball
// for fl, products of l2 balls otherwise) and a projected Levenberg-Marquardt
// search looks for an exact hit; r itself is found by bisection. Every value
// returned comes with a path that reaches y, so it bounds the distance from
// above. cc is seeded with the fl path and rho with the cc path, and each
// budget is seeded with the previous one, which makes the ordering
// rho <= cc <= fl and monotonicity in the budget hold by construction.

#include "liebox/approx_exp.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace liebox {

enum class DistanceKind { fl, cc, rho };
std::string to_string(DistanceKind k);
DistanceKind parse_distance_kind(const std::string& s);

enum class DistanceStatus {
    ok,
    identical,         // x == y
    budget_exhausted,  // no connecting path found within the budget
};
std::string to_string(DistanceStatus s);

struct ControlPath {
    DistanceKind kind = DistanceKind::fl;
    double r = 0.0;
    // fl: one signed time per segment on field fields[j] (1-based)
    std::vector<int> fields;
    std::vector<double> times;
    // cc / rho: piece durations (sum 1) and unit-ball controls b
    std::vector<double> durations;
    std::vector<Eigen::VectorXd> controls;

    std::size_t segments() const { return kind == DistanceKind::fl ? times.size() : durations.size(); }
};

/// Endpoint of the path from x.
Eigen::VectorXd path_endpoint(const CommutatorFrame& frame, const ControlPath& path, const Eigen::VectorXd& x);

struct DistanceOptions {
    int budget = 8;           // fl segments / cc and rho pieces
    int bisection_iterations = 40;
    double bisection_rel_gap = 1e-6;
    int starts = 4;           // random restarts when the warm start fails
    int lm_iterations = 80;
    double feasibility_abs = 1e-9;
    double feasibility_rel = 1e-7;
    std::uint64_t seed = 1;
};

struct FeasibilityStep {
    double r;
    bool feasible;
};

struct DistanceEstimate {
    double value = 0.0;  // +inf when budget_exhausted
    DistanceStatus status = DistanceStatus::ok;
    ControlPath path;
    double residual = 0.0;
    std::vector<FeasibilityStep> trace;
    std::vector<double> per_budget;  // best value after each budget 1..B
};

DistanceEstimate fl_distance(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const DistanceOptions& opt = {});
/// Seeded internally by the fl estimate.
DistanceEstimate cc_distance(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const DistanceOptions& opt = {});
/// Seeded internally by the cc estimate.
DistanceEstimate rho_distance(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              const DistanceOptions& opt = {});

struct DistanceTriple {
    DistanceEstimate fl;
    DistanceEstimate cc;
    DistanceEstimate rho;
};
/// All three with shared seeding.
DistanceTriple distance_triple(const CommutatorFrame& frame, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                               const DistanceOptions& opt = {});

DistanceEstimate distance(DistanceKind kind, const CommutatorFrame& frame, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y, const DistanceOptions& opt = {});

/// Single constant-velocity rho move along the frame `indices`: solves
/// exp(sum_k u_k Y_{i_k})(x) = y by Newton. Returns u, or nullopt when the
/// solve fails. y is in the rho ball of radius r when
/// sum_k (u_k / r^{l_k})^2 <= 1.
std::optional<Eigen::VectorXd> frame_coordinates(const CommutatorFrame& frame, std::span<const int> indices,
                                                 const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                                 double give_up_norm = 1e3);
/// sqrt(sum_k (u_k / r^{l_k})^2).
double frame_weighted_norm(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& u,
                           double r);
/// exp(sum_k b_k r^{l_k} Y_{i_k})(x).
Eigen::VectorXd frame_move(const CommutatorFrame& frame, std::span<const int> indices, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& b, double r);

struct ScaleRatio {
    double scale;
    double max_ratio;
};

struct FeffermanPhongReport {
    std::vector<ScaleRatio> scales;
    double sup_ratio = 0.0;
    double variation = 0.0;  // max over scales / min over scales
    int exhausted = 0;       // pairs with no path found
};

/// sup over pairs (x, x + scale * u) of d(x,y) / |x - y|^{1/s}, per scale.
FeffermanPhongReport fefferman_phong_check(DistanceKind kind, const CommutatorFrame& frame,
                                           const std::vector<Eigen::VectorXd>& centers,
                                           const std::vector<Eigen::VectorXd>& directions,
                                           const std::vector<double>& scales, const DistanceOptions& opt = {});

}  // namespace liebox
