#pragma once

// Small text formats used on the command line: polynomial expressions such
// as "x1*x3 - 1/2*x2^2", numeric CSV matrices, and index lists.

#include "liebox/polynomial.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace liebox::cli {

/// Sum of terms; a term is an optional rational factor times x<i>[^k]
/// factors, i 1-based. Throws std::invalid_argument on bad input.
Polynomial parse_polynomial(const std::string& text, int nvars);

/// Rows of comma separated numbers; blank lines and '#' lines are skipped.
Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);

Eigen::VectorXd to_vector(const std::vector<double>& v);

}  // namespace liebox::cli
