#pragma once

#include <optional>
#include <vector>

#include "nlsv/grid.hpp"
#include "nlsv/potentials.hpp"

namespace nlsv {

// Stationary scattering for H = -1/2 d^2/dx^2 + V.

enum class JostSign { plus = +1, minus = -1 };

struct JostOptions {
    /// |V| at the initialization edge must not exceed this.
    double edge_tolerance = 1e-5;
};

/// Jost solution f_+/- on a grid together with its x-derivative.
///
/// f_+ ~ exp(+i lambda x) as x -> +inf is integrated leftwards from x_max;
/// f_- ~ exp(-i lambda x) as x -> -inf is integrated rightwards from x_min.
struct JostSolution {
    double lambda = 0.0;
    JostSign sign = JostSign::plus;
    Grid grid;
    std::vector<Complex> f;
    std::vector<Complex> df;
    /// Asymptotic-amplitude state at the far edge: f = a e^{i lambda x} + b e^{-i lambda x}.
    /// For lambda == 0 these hold (f, f') at the far edge instead.
    Complex far_a;
    Complex far_b;
    /// Estimate of the error from neglecting V beyond the initialization edge.
    double truncation_estimate = 0.0;
};

JostSolution jost(const PotentialSpec& V, const Grid& grid, double lambda, JostSign sign,
                  const JostOptions& opts = {});

/// ||-1/2 f'' + V f - 1/2 lambda^2 f||_2 / ||f||_2 over the interior, from a
/// fourth-order three-point stencil that vanishes identically on free waves.
double jost_ode_residual(const JostSolution& sol, const PotentialSpec& V);

struct WronskianValue {
    Complex value;     // spatial median of the pointwise Wronskian
    double spread = 0; // spatial standard deviation
};

/// W = f_+ f_-' - f_- f_+'. Throws AccuracyError when the pointwise value is not
/// constant to rel_tol*|W| + abs_tol.
WronskianValue wronskian(const JostSolution& plus, const JostSolution& minus,
                         double rel_tol = 1e-6, double abs_tol = 1e-8);

struct ResonanceVerdict {
    bool resonance = false;
    double w0_abs = 0.0;
    double w0_abs_doubled = 0.0;
    /// False when the verdicts on the grid and on the doubled domain disagree.
    bool stable = true;
};

ResonanceVerdict detect_resonance(const PotentialSpec& V, const Grid& grid, double threshold = 1e-4,
                                  const JostOptions& opts = {});

struct ScatteringCoefficients {
    double lambda = 0.0;
    Complex T;           // -2 i lambda / W
    Complex R;           // b / a from matching f_+ at the far edge
    Complex W;
    Complex T_matching;  // 1 / a
    double wronskian_spread = 0.0;
    double truncation_estimate = 0.0;

    double unitarity_defect() const;
    double consistency_defect() const;
};

ScatteringCoefficients scattering_coefficients(const PotentialSpec& V, const Grid& grid, double lambda,
                                               const JostOptions& opts = {});

/// Grid suited to scattering sweeps up to lambda_max: half-width covers |V| >= edge_tol,
/// and the step keeps 2*lambda_max*dx <= 0.25.
Grid scattering_grid(const PotentialSpec& V, double lambda_max, double edge_tolerance = 1e-5);

struct BoundState {
    double energy = 0.0;  // -lambda_bs
    Field phi;            // real, L2-normalized, positive at its peak
    double residual = 0.0; // ||H phi - energy phi||_2
};

struct BoundStateOptions {
    double negative_threshold = 1e-6;
    /// Allowed eigenvalue shift when the finite-difference grid is doubled.
    double refinement_tolerance = 1e-2;
    /// Polish the ground state against the Fourier-spectral H used by the propagator.
    bool spectral_refine = true;
    double residual_tolerance = 1e-8;
};

/// Eigenvalues below -threshold of the Dirichlet second-order finite-difference H
/// (n x n symmetric tridiagonal), ascending. Sturm-sequence bisection.
std::vector<double> fd_negative_eigenvalues(const std::vector<double>& potential, double dx,
                                            double threshold);

/// Normalized eigenvector of the same tridiagonal matrix for eigenvalue `energy`.
std::vector<double> fd_eigenvector(const std::vector<double>& potential, double dx, double energy);

std::vector<BoundState> bound_states(const PotentialSpec& V, const Grid& grid,
                                     const BoundStateOptions& opts = {});

/// H f with the Fourier-spectral Laplacian.
Field apply_hamiltonian(const Field& f, const SampledPotential& V);

struct Projection {
    Complex a;
    Field continuum;
};

/// P_d f = <f, phi> phi, P_c f = f - P_d f. Without a bound state a = 0.
Projection project(const Field& f, const std::optional<BoundState>& bound_state);

}  // namespace nlsv
