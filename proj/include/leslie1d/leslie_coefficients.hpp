#pragma once

#include <array>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace leslie1d {

/// Leslie viscosities alpha[0..8] and the adiabatic exponent of p = rho^gamma.
struct LeslieSet {
    std::array<double, 9> alpha{};
    double gamma_ad = 2.0;

    double operator[](int i) const { return alpha.at(static_cast<std::size_t>(i)); }

    /// alpha2 = -1, alpha3 = alpha4 = 1, the rest zero. A(n) is the identity.
    static LeslieSet reference_example();
};

struct ConstraintCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;
};

struct ValidationReport {
    std::vector<ConstraintCheck> checks;
    bool valid = false;

    /// Name of the first failing check, empty when valid.
    std::string first_failure() const;
    std::string to_text() const;
};

// "valid" requires strict inequalities to clear this margin.
inline constexpr double kStrictMargin = 1e-10;

ValidationReport validate(const LeslieSet& c);

class InvalidCoefficients : public std::invalid_argument {
public:
    explicit InvalidCoefficients(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

struct DerivedViscosities {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    /// Lower bound on the eigenvalues of sym A(n), uniform in n.
    double lambda_lo = 0.0;
    /// Upper bound on the eigenvalues of sym A(n), uniform in n.
    double lambda_hi = 0.0;
    /// Closed-form lower bound from completing squares.
    double lambda_closed_form = 0.0;
};

/// Throws InvalidCoefficients when validate fails.
DerivedViscosities derive_viscosities(const LeslieSet& c);

struct DissipationMatrix {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    double quadratic_form(double y1, double y2) const {
        return y1 * (a11 * y1 + a12 * y2) + y2 * (a21 * y1 + a22 * y2);
    }
    double det() const { return a11 * a22 - a12 * a21; }
};

DissipationMatrix dissipation_matrix(const LeslieSet& c, double n);

/// Entrywise d/dn of A(n).
DissipationMatrix dissipation_matrix_derivative(const LeslieSet& c, double n);

class SingularDissipationMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed-form 2x2 inverse. Throws SingularDissipationMatrix if |det| < 1e-14.
DissipationMatrix inverse_dissipation_matrix(const LeslieSet& c, double n);

/// Smallest and largest eigenvalue of the symmetric part.
std::pair<double, double> symmetric_eigenvalues(const DissipationMatrix& a);

/// Rejection sampler over valid sets satisfying Parodi's relation by construction.
LeslieSet random_valid_set(std::mt19937_64& rng);

}  // namespace leslie1d
