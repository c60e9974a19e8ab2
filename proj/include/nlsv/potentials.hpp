#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlsv/grid.hpp"

namespace nlsv {

enum class PotentialKind { zero, algebraic, gaussian, poschl_teller, sech2_scaled };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// Analytic external potential V(x).
///
///   zero          V = 0
///   algebraic     V = q (1 + y^2)^(-s/2)
///   gaussian      V = q exp(-y^2 / (2 sigma^2))
///   poschl_teller V = -nu (nu + 1)/2 sech^2(y)   (reflectionless for integer nu)
///   sech2_scaled  V = -beta sech^2(y)
///
/// with y = x - center.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::zero;
    double q = 0.0;
    double s = 3.0;
    double sigma = 1.0;
    double beta = 0.0;
    double nu = 1.0;
    double center = 0.0;

    static PotentialSpec zero();
    static PotentialSpec algebraic(double q, double s, double center = 0.0);
    static PotentialSpec gaussian(double q, double sigma, double center = 0.0);
    static PotentialSpec sech2(double beta, double center = 0.0);
    static PotentialSpec poschl_teller(double nu, double center = 0.0);
    /// Stand-in for q*delta(x - center): unit-mass Gaussian of width sigma <= 0.05.
    static PotentialSpec delta_approximation(double q, double sigma = 0.05, double center = 0.0);

    /// Throws InvalidInput on non-finite parameters, sigma <= 0 or s <= 0.
    void validate() const;

    double operator()(double x) const noexcept;
    /// sup_x |V(x)|
    double sup_norm() const noexcept;
    /// True when the kind decays faster than any power of x.
    bool super_algebraic() const noexcept;
    /// Half-width beyond which |V| < tol.
    double support_radius(double tol) const;
    bool is_delta_approximation() const noexcept;

    std::string describe() const;

    bool operator==(const PotentialSpec&) const = default;
};

struct SampledPotential {
    PotentialSpec spec;
    Grid grid;
    std::vector<double> values;
};

SampledPotential sample_potential(const PotentialSpec& spec, const Grid& grid);

/// Sentinel for decay_fit on super-algebraically decaying potentials.
inline constexpr double kSuperAlgebraic = std::numeric_limits<double>::infinity();

/// Least-squares estimate of s in |V| ~ <x>^{-s}, fitted on |x - center| in [L/8, 3L/8].
/// Returns kSuperAlgebraic when the fitted slope exceeds `slope_cap` or the local
/// slope steepens across the window (exponential decay).
double decay_fit(const PotentialSpec& spec, const Grid& grid, double slope_cap = 20.0);

struct AdmissibilityTolerances {
    double resonance_threshold = 1e-4;
    double edge_tolerance = 1e-5;
    double negative_threshold = 1e-6;
};

struct AdmissibilityReport {
    double decay_parameter_estimate = 0.0;
    int bound_state_count = 0;
    std::vector<double> bound_state_energies;
    bool resonance_detected = false;
    double wronskian_at_zero = 0.0;
    bool resonance_stable = true;
    double phi_l1 = 0.0;
    double phi_linf = 0.0;
    bool inconclusive = false;
    std::string note;
    bool admissible = false;
};

AdmissibilityReport check_admissibility(const PotentialSpec& spec, const Grid& grid,
                                        const AdmissibilityTolerances& tol = {});

}  // namespace nlsv
