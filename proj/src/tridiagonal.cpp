#include "leslie1d/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace leslie1d {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n), d(n), x(n);
    double piv = diag[0];
    if (piv == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[0] = n > 1 ? upper[0] / piv : 0.0;
    d[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i] * c[i - 1];
        if (piv == 0.0 || !std::isfinite(piv)) throw std::runtime_error("solve_tridiagonal: zero pivot");
        c[i] = i + 1 < n ? upper[i] / piv : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / piv;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

std::vector<Eigen::Vector2d> solve_block_tridiagonal(std::span<const Eigen::Matrix2d> lower,
                                                     std::span<const Eigen::Matrix2d> diag,
                                                     std::span<const Eigen::Matrix2d> upper,
                                                     std::span<const Eigen::Vector2d> rhs) {
    const std::size_t n = diag.size();
    std::vector<Eigen::Matrix2d> c(n);
    std::vector<Eigen::Vector2d> d(n), x(n);
    auto invert = [](const Eigen::Matrix2d& m) {
        if (std::abs(m.determinant()) < 1e-300) throw std::runtime_error("solve_block_tridiagonal: singular pivot");
        return Eigen::Matrix2d(m.inverse());
    };
    Eigen::Matrix2d inv = invert(diag[0]);
    c[0] = n > 1 ? Eigen::Matrix2d(inv * upper[0]) : Eigen::Matrix2d::Zero();
    d[0] = inv * rhs[0];
    for (std::size_t i = 1; i < n; ++i) {
        inv = invert(diag[i] - lower[i] * c[i - 1]);
        c[i] = i + 1 < n ? Eigen::Matrix2d(inv * upper[i]) : Eigen::Matrix2d::Zero();
        d[i] = inv * (rhs[i] - lower[i] * d[i - 1]);
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

}  // namespace leslie1d
