#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "leslie1d/grid.hpp"
#include "leslie1d/leslie_coefficients.hpp"

namespace leslie1d {

/// Free local values standing for fields and derivatives at a point.
struct KinematicSample {
    double n = 0, n_x = 0, n_xx = 0;
    double u_x = 0, u_xx = 0, v_x = 0, v_xx = 0;
    double ndot = 0, ndot_x = 0;
};

struct StressSample {
    Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    Eigen::Vector2d lambda_n = Eigen::Vector2d::Zero();
};

/// Builds the full planar Leslie stress, kinematic transport g and lambda n
/// from the tensor definitions, without using the reduced flux formulas.
StressSample assemble_stress(const KinematicSample& s, const LeslieSet& c);

/// Smooth fields with analytic derivatives:
///   u = sum a_k sin(k pi x), v = sum b_k sin(k pi x),
///   n = n0 + sum e_k cos(k pi x), ndot = sum m_k cos(k pi x).
struct TrigProfile {
    std::vector<double> u_modes, v_modes, n_modes, ndot_modes;
    double n_offset = 0.0;

    KinematicSample evaluate(double x) const;
    static TrigProfile random(std::mt19937_64& rng);
};

/// Max over nodes of |d/dx (sigma11, sigma21) - (J1, J2)|, relative to max |J|.
/// The left side is a three-level Richardson extrapolation of central differences.
double check_divergence_identity(const LeslieSet& c, const TrigProfile& profile, const Grid1D& grid,
                                 double base_step = 1e-3);

/// Tangential projection of the vector director equation minus the scalar form.
double check_director_identity(const KinematicSample& s, const LeslieSet& c);

/// Component of the vector director residual along (cos n, sin n).
double director_normal_component(const KinematicSample& s, const LeslieSet& c);

/// Direct dissipation density for (u_x, v_x, ndot, n) = (a, b, m, n).
double direct_dissipation_density(double a, double b, double m, double n, const LeslieSet& c);

/// The five completed-square pieces. `isotropic_weight` multiplies (alpha4+alpha7) a^2
/// in the second piece; 1 is the algebraically correct value.
std::array<double, 5> completed_squares_density(double a, double b, double m, double n, const LeslieSet& c,
                                                double isotropic_weight = 1.0);

/// Direct form minus the completed-square sum.
double check_energy_identity(double a, double b, double m, double n, const LeslieSet& c,
                             double isotropic_weight = 1.0);

/// Expanded sum-of-squares form of y^T A(n) y.
double quadratic_form_expansion(const LeslieSet& c, double n, double y1, double y2);

struct IdentityCheck {
    std::string name;
    long samples = 0;
    double max_residual = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string note;
};

struct IdentitySuiteOptions {
    std::uint64_t seed = 20240607;
    long samples = 10000;
    int coefficient_sets = 20;
    int profiles = 5;
    /// Test-only mutation: flips the sign of gamma2 in the scalar director form.
    bool corrupt_director_sign = false;
};

std::vector<IdentityCheck> run_identity_suite(const IdentitySuiteOptions& opts);

std::string format_identity_table(const std::vector<IdentityCheck>& checks);

}  // namespace leslie1d
