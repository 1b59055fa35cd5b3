#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace leslie1d {

/// Thomas algorithm. lower[0] and upper[n-1] are ignored.
/// Throws std::runtime_error on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Block Thomas algorithm for 2x2 blocks.
std::vector<Eigen::Vector2d> solve_block_tridiagonal(std::span<const Eigen::Matrix2d> lower,
                                                     std::span<const Eigen::Matrix2d> diag,
                                                     std::span<const Eigen::Matrix2d> upper,
                                                     std::span<const Eigen::Vector2d> rhs);

}  // namespace leslie1d
