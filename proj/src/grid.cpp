#include "leslie1d/grid.hpp"

#include <stdexcept>
#include <string>

namespace leslie1d {

Grid1D::Grid1D(int num_cells) : num_cells_(num_cells), dx_(0.0) {
    if (num_cells < 8) throw std::invalid_argument("Grid1D needs at least 8 cells, got " + std::to_string(num_cells));
    dx_ = 1.0 / num_cells;
    x_.resize(static_cast<std::size_t>(num_cells) + 1);
    w_.assign(x_.size(), dx_);
    for (int i = 0; i <= num_cells; ++i) x_[static_cast<std::size_t>(i)] = i * dx_;
    x_.back() = 1.0;
    w_.front() = w_.back() = 0.5 * dx_;
}

double Grid1D::integrate(std::span<const double> f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * f[i];
    return s;
}

std::vector<double> gradient(std::span<const double> f, const Grid1D& grid) {
    const std::size_t m = f.size();
    const double inv2h = 0.5 / grid.dx();
    std::vector<double> g(m);
    for (std::size_t i = 1; i + 1 < m; ++i) g[i] = (f[i + 1] - f[i - 1]) * inv2h;
    g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
    g[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) * inv2h;
    return g;
}

std::vector<double> director_gradient(std::span<const double> n, const Grid1D& grid) {
    const std::size_t m = n.size();
    const double inv2h = 0.5 / grid.dx();
    std::vector<double> g(m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i) g[i] = (n[i + 1] - n[i - 1]) * inv2h;
    return g;
}

std::vector<double> director_laplacian(std::span<const double> n, const Grid1D& grid) {
    const std::size_t m = n.size();
    const double inv = 1.0 / (grid.dx() * grid.dx());
    std::vector<double> l(m);
    for (std::size_t i = 1; i + 1 < m; ++i) l[i] = (n[i + 1] - 2.0 * n[i] + n[i - 1]) * inv;
    l[0] = 2.0 * (n[1] - n[0]) * inv;
    l[m - 1] = 2.0 * (n[m - 2] - n[m - 1]) * inv;
    return l;
}

std::vector<double> face_differences(std::span<const double> f, const Grid1D& grid) {
    std::vector<double> d(f.size() - 1);
    const double inv = 1.0 / grid.dx();
    for (std::size_t i = 0; i + 1 < f.size(); ++i) d[i] = (f[i + 1] - f[i]) * inv;
    return d;
}

}  // namespace leslie1d
