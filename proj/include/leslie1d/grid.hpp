#pragma once

#include <span>
#include <vector>

namespace leslie1d {

/// Uniform node grid on [0,1] with both endpoints included.
class Grid1D {
public:
    explicit Grid1D(int num_cells);

    int num_cells() const { return num_cells_; }
    int num_nodes() const { return num_cells_ + 1; }
    double dx() const { return dx_; }
    double x(int i) const { return x_[static_cast<std::size_t>(i)]; }
    std::span<const double> nodes() const { return x_; }
    /// Composite trapezoid weights; dx/2 at the endpoints.
    std::span<const double> weights() const { return w_; }

    double integrate(std::span<const double> f) const;

private:
    int num_cells_;
    double dx_;
    std::vector<double> x_;
    std::vector<double> w_;
};

/// Node derivative, centered inside and one-sided second order at the ends.
std::vector<double> gradient(std::span<const double> f, const Grid1D& grid);

/// Node derivative of the director angle; zero at the ends (Neumann).
std::vector<double> director_gradient(std::span<const double> n, const Grid1D& grid);

/// Second difference with even ghost reflection at the ends.
std::vector<double> director_laplacian(std::span<const double> n, const Grid1D& grid);

/// (f[i+1] - f[i]) / dx for each cell.
std::vector<double> face_differences(std::span<const double> f, const Grid1D& grid);

}  // namespace leslie1d
