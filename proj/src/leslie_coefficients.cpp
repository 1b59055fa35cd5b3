#include "leslie1d/leslie_coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace leslie1d {

LeslieSet LeslieSet::reference_example() {
    LeslieSet c;
    c.alpha = {0.0, 0.0, -1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0};
    c.gamma_ad = 2.0;
    return c;
}

std::string ValidationReport::first_failure() const {
    for (const auto& ck : checks) {
        if (!ck.pass) return ck.name;
    }
    return {};
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    os.precision(6);
    for (const auto& ck : checks) {
        os << (ck.pass ? "PASS  " : "FAIL  ") << ck.name << "  margin=" << ck.margin + 0.0 << '\n';
    }
    os << (valid ? "coefficients valid" : "coefficients INVALID") << '\n';
    return os.str();
}

namespace {

ConstraintCheck strict(std::string name, double margin) {
    return {std::move(name), margin > kStrictMargin, margin};
}

// "lhs > mid >= 0": the strict part needs the margin, the closed part only sign.
ConstraintCheck chained(std::string name, double strict_margin, double closed_margin) {
    const bool ok = strict_margin > kStrictMargin && closed_margin >= -1e-12;
    return {std::move(name), ok, std::min(strict_margin, closed_margin)};
}

}  // namespace

ValidationReport validate(const LeslieSet& c) {
    const auto& a = c.alpha;
    ValidationReport r;

    const double parodi = (a[2] + a[3]) - (a[6] - a[5]);
    const double scale = std::max({1.0, std::abs(a[2]) + std::abs(a[3]), std::abs(a[5]) + std::abs(a[6])});
    r.checks.push_back({"alpha2+alpha3 = alpha6-alpha5", std::abs(parodi) <= 1e-12 * scale, -std::abs(parodi)});

    const double g1 = a[3] - a[2];
    const double g2 = a[6] - a[5];
    r.checks.push_back(strict("alpha4 > 0", a[4]));
    r.checks.push_back(strict("2alpha1+3alpha4+2alpha5+2alpha6 > 0", 2 * a[1] + 3 * a[4] + 2 * a[5] + 2 * a[6]));
    r.checks.push_back(strict("gamma1 = alpha3-alpha2 > 0", g1));
    r.checks.push_back(strict("2alpha4+alpha5+alpha6 > 0", 2 * a[4] + a[5] + a[6]));

    if (g1 > 0.0) {
        const double q = g2 * g2 / g1;
        const double s = a[2] + a[3] + g2;
        r.checks.push_back(strict("4gamma1(2alpha4+alpha5+alpha6) > (alpha2+alpha3+gamma2)^2",
                                  4 * g1 * (2 * a[4] + a[5] + a[6]) - s * s));
        const double mid7 = a[1] + q;
        r.checks.push_back(chained("alpha4+alpha7 > alpha1+gamma2^2/gamma1 >= 0", a[4] + a[7] - mid7, mid7));
        const double mid8 = a[0] + a[1] + a[5] + a[6] + a[8];
        r.checks.push_back(chained("2alpha4+alpha5+alpha6-gamma2^2/gamma1 > alpha0+alpha1+alpha5+alpha6+alpha8 >= 0",
                                   2 * a[4] + a[5] + a[6] - q - mid8, mid8));
    } else {
        const double bad = -std::numeric_limits<double>::infinity();
        r.checks.push_back({"4gamma1(2alpha4+alpha5+alpha6) > (alpha2+alpha3+gamma2)^2", false, bad});
        r.checks.push_back({"alpha4+alpha7 > alpha1+gamma2^2/gamma1 >= 0", false, bad});
        r.checks.push_back({"2alpha4+alpha5+alpha6-gamma2^2/gamma1 > alpha0+alpha1+alpha5+alpha6+alpha8 >= 0", false, bad});
    }
    r.checks.push_back(strict("gamma_ad > 1", c.gamma_ad - 1.0));

    r.valid = std::all_of(r.checks.begin(), r.checks.end(), [](const auto& ck) { return ck.pass; });
    return r;
}

InvalidCoefficients::InvalidCoefficients(ValidationReport report)
    : std::invalid_argument("invalid Leslie coefficients: " + report.first_failure()),
      report_(std::move(report)) {}

DissipationMatrix dissipation_matrix(const LeslieSet& c, double n) {
    const auto& a = c.alpha;
    const double cs = std::cos(n), sn = std::sin(n);
    const double c2 = cs * cs, s2 = sn * sn, cxs = cs * sn;
    DissipationMatrix m;
    m.a11 = (a[0] + a[5] + a[6] + a[8]) * c2 + a[1] * c2 * c2 + (a[4] + a[7]);
    m.a12 = a[0] * cxs + a[1] * c2 * cxs + 0.5 * (a[2] + a[3] + a[5] + a[6]) * cxs;
    m.a21 = a[1] * c2 * cxs + (a[6] + a[8]) * cxs;
    m.a22 = a[1] * c2 * s2 + 0.5 * (-a[2] + a[5]) * c2 + 0.5 * (a[3] + a[6]) * s2 + 0.5 * a[4];
    return m;
}

DissipationMatrix dissipation_matrix_derivative(const LeslieSet& c, double n) {
    const auto& a = c.alpha;
    const double cs = std::cos(n), sn = std::sin(n);
    const double c2 = cs * cs, s2 = sn * sn, cxs = cs * sn;
    const double d_c2 = -2.0 * cxs;
    const double d_c4 = -4.0 * c2 * cxs;
    const double d_cxs = c2 - s2;
    const double d_c3s = c2 * c2 - 3.0 * c2 * s2;
    const double d_c2s2 = 2.0 * cxs * (c2 - s2);
    const double d_s2 = 2.0 * cxs;
    DissipationMatrix m;
    m.a11 = (a[0] + a[5] + a[6] + a[8]) * d_c2 + a[1] * d_c4;
    m.a12 = a[0] * d_cxs + a[1] * d_c3s + 0.5 * (a[2] + a[3] + a[5] + a[6]) * d_cxs;
    m.a21 = a[1] * d_c3s + (a[6] + a[8]) * d_cxs;
    m.a22 = a[1] * d_c2s2 + 0.5 * (-a[2] + a[5]) * d_c2 + 0.5 * (a[3] + a[6]) * d_s2;
    return m;
}

DissipationMatrix inverse_dissipation_matrix(const LeslieSet& c, double n) {
    const DissipationMatrix m = dissipation_matrix(c, n);
    const double det = m.det();
    if (!(std::abs(det) >= 1e-14)) {
        throw SingularDissipationMatrix("dissipation matrix is singular (det = " + std::to_string(det) + ")");
    }
    return {m.a22 / det, -m.a12 / det, -m.a21 / det, m.a11 / det};
}

std::pair<double, double> symmetric_eigenvalues(const DissipationMatrix& a) {
    const double off = 0.5 * (a.a12 + a.a21);
    const double mean = 0.5 * (a.a11 + a.a22);
    const double half = 0.5 * (a.a11 - a.a22);
    const double r = std::hypot(half, off);
    return {mean - r, mean + r};
}

namespace {

// Trig-polynomial coefficients of one entry: const + c2 cos2n + s2 sin2n + c4 cos4n + s4 sin4n.
struct TrigEntry {
    double k = 0, c2 = 0, s2 = 0, c4 = 0, s4 = 0;
    double derivative_bound() const {
        return 2.0 * (std::abs(c2) + std::abs(s2)) + 4.0 * (std::abs(c4) + std::abs(s4));
    }
    double sup_bound() const {
        return std::abs(k) + std::abs(c2) + std::abs(s2) + std::abs(c4) + std::abs(s4);
    }
};

struct SymmetricTrig {
    TrigEntry s11, s12, s22;
};

SymmetricTrig symmetric_part_expansion(const LeslieSet& c) {
    const auto& a = c.alpha;
    const double p = a[0] + a[5] + a[6] + a[8];
    const double r = a[0] + 0.5 * (a[2] + a[3] + a[5] + a[6]);
    SymmetricTrig t;
    t.s11 = {p / 2 + 3 * a[1] / 8 + a[4] + a[7], p / 2 + a[1] / 2, 0.0, a[1] / 8, 0.0};
    // A12 and A21 are pure sine series; the symmetric part averages them.
    const double a12_s2 = r / 2 + a[1] / 4, a21_s2 = a[1] / 4 + (a[6] + a[8]) / 2;
    t.s12 = {0.0, 0.0, 0.5 * (a12_s2 + a21_s2), 0.0, a[1] / 8};
    t.s22 = {a[1] / 8 + (-a[2] + a[5]) / 4 + (a[3] + a[6]) / 4 + a[4] / 2,
             (-a[2] + a[5]) / 4 - (a[3] + a[6]) / 4, 0.0, -a[1] / 8, 0.0};
    return t;
}

}  // namespace

DerivedViscosities derive_viscosities(const LeslieSet& c) {
    ValidationReport report = validate(c);
    if (!report.valid) throw InvalidCoefficients(std::move(report));

    const auto& a = c.alpha;
    DerivedViscosities d;
    d.gamma1 = a[3] - a[2];
    d.gamma2 = a[6] - a[5];
    const double q = d.gamma2 * d.gamma2 / d.gamma1;
    const double first = (a[4] + a[7]) - 0.25 * (a[1] + q);
    const double second = (2 * a[4] + a[5] + a[6] - q) - (a[0] + a[1] + a[5] + a[6] + a[8]);
    d.lambda_closed_form = std::min(first, 0.25 * second);

    // Sampled extremes, widened by a Lipschitz bound on the symmetric part so
    // they hold between samples too.
    constexpr int kSamples = 1024;
    const double h = std::numbers::pi / kSamples;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < kSamples; ++k) {
        const auto [e_min, e_max] = symmetric_eigenvalues(dissipation_matrix(c, k * h));
        lo = std::min(lo, e_min);
        hi = std::max(hi, e_max);
    }
    const SymmetricTrig t = symmetric_part_expansion(c);
    const double b11 = t.s11.derivative_bound(), b12 = t.s12.derivative_bound(), b22 = t.s22.derivative_bound();
    const double lip = std::sqrt(b11 * b11 + 2 * b12 * b12 + b22 * b22);
    const double slack = lip * h / 2;
    const double gershgorin = std::max(t.s11.sup_bound() + t.s12.sup_bound(), t.s12.sup_bound() + t.s22.sup_bound());

    d.lambda_lo = std::max(d.lambda_closed_form, lo - slack);
    d.lambda_hi = std::min(hi + slack, gershgorin);
    return d;
}

LeslieSet random_valid_set(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        LeslieSet c;
        auto& a = c.alpha;
        a[2] = uni(-2.0, 0.5);
        a[3] = a[2] + uni(0.2, 3.0);
        a[5] = uni(-1.0, 1.0);
        a[6] = a[5] + a[2] + a[3];
        a[4] = uni(0.2, 2.0);
        a[1] = uni(-0.5, 1.0);
        a[0] = uni(-1.0, 1.0);
        a[7] = uni(0.0, 3.0);
        a[8] = uni(-1.0, 1.0);
        c.gamma_ad = uni(1.2, 3.0);
        if (validate(c).valid) return c;
    }
    throw std::runtime_error("random_valid_set: sampler failed to find a valid set");
}

}  // namespace leslie1d
