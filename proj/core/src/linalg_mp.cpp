#include "liebox/linalg_mp.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <stdexcept>

namespace liebox {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;
using QuadMatrix = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using QuadVector = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

void require_finite(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const char* who)
{
    if (!A.allFinite() || !b.allFinite())
        throw std::invalid_argument(std::string(who) + ": non-finite input");
    if (A.rows() != b.size())
        throw std::invalid_argument(std::string(who) + ": A has " + std::to_string(A.rows()) + " rows, b has " +
                                    std::to_string(b.size()));
}

}  // namespace

Eigen::VectorXd tychonoff_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double lambda)
{
    require_finite(A, b, "tychonoff_solve");
    if (!(lambda > 0) || !std::isfinite(lambda))
        throw std::invalid_argument("tychonoff_solve: lambda must be positive and finite");
    const QuadMatrix Aq = A.cast<Quad>();
    const QuadVector bq = b.cast<Quad>();
    const Quad l = lambda;
    QuadMatrix M = Aq.transpose() * Aq;
    M.diagonal().array() += l * l;
    const QuadVector rhs = Aq.transpose() * bq;
    Eigen::LLT<QuadMatrix> llt(M);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("tychonoff_solve: factorization failed");
    const QuadVector x = llt.solve(rhs);
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(x[i]);
    return out;
}

MinNormResult min_norm_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double rel_tol)
{
    require_finite(A, b, "min_norm_solve");
    MinNormResult out;
    if (A.size() == 0) {
        out.x = Eigen::VectorXd::Zero(A.cols());
        out.residual = b.norm();
        return out;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(rel_tol);
    out.x = svd.solve(b);
    out.rank = static_cast<int>(svd.rank());
    out.threshold = rel_tol * (svd.singularValues().size() ? svd.singularValues()[0] : 0.0);
    out.residual = (A * out.x - b).norm();
    return out;
}

ControlRecovery recover_controls(const std::vector<Eigen::MatrixXd>& fields,
                                 const std::vector<Eigen::VectorXd>& velocities, double tol)
{
    if (fields.size() != velocities.size())
        throw std::invalid_argument("recover_controls: sample count mismatch");
    ControlRecovery out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        auto sol = min_norm_solve(fields[i], velocities[i]);
        const double scale = std::max(1.0, velocities[i].norm());
        out.max_norm = std::max(out.max_norm, sol.x.norm());
        out.max_residual = std::max(out.max_residual, sol.residual);
        if (sol.residual > tol * scale)
            out.horizontal = false;
        out.controls.push_back(std::move(sol.x));
        out.residuals.push_back(sol.residual);
    }
    return out;
}

}  // namespace liebox
