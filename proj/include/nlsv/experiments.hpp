#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nlsv/potentials.hpp"
#include "nlsv/propagator.hpp"

namespace nlsv {

// Fast-soliton transmission experiment: a boosted sech starting at x0 < 0 crosses a
// localized potential; the error against the free soliton is tracked over the
// horizon (1 - delta) log v.

struct PhaseTimes {
    double t1 = 0.0;     // |x0|/v - v^-delta   end of the pre-interaction phase
    double t2 = 0.0;     // |x0|/v + v^-delta   end of the interaction phase
    double t3 = 0.0;     // t2 + (1 - delta) log v
    double t_end = 0.0;  // (1 - delta) log v   error horizon
};

/// Throws InvalidInput unless v > 1, x0 < 0, 0 < delta < 1 and t1 >= 0.
PhaseTimes phase_times(double v, double x0, double delta);

struct GridRule {
    /// k_max >= resolution_factor * (v + 3 mu)
    double resolution_factor = 4.0;
    /// Free space (in units of 1/mu) kept between the soliton path and each edge.
    double margin = 30.0;
    /// Half-width kept around the potential center.
    double potential_halfwidth = 5.0;
    std::size_t min_n = 256;
};

struct DtRule {
    double phase_cap = 0.1;
    /// dt = max_stable_dt / refine
    double refine = 1.0;
    /// Explicit step; must satisfy the phase cap.
    std::optional<double> dt;
};

struct ExperimentConfig {
    PotentialSpec potential;
    double delta = 0.6;
    std::vector<double> velocities;
    /// x0 = -x0_factor * v^(1 - delta)
    double x0_factor = 2.0;
    double mu = 1.0;
    GridRule grid;
    DtRule dt_rule;
    /// Upper bound on the time between error observations, also capped at v^-delta / 20.
    double observe_interval = 0.01;
    bool override_admissibility = false;
    std::string out_dir = "out";

    /// Decay exponent entering the delta range; +inf for super-algebraic potentials.
    double decay_parameter() const;
    double x0_for(double v) const;
    /// Throws InvalidInput on a delta outside (1/2, s/(1+s)), an x0 factor below 1,
    /// nonpositive velocities, or an invalid potential.
    void validate() const;
};

/// Grid covering the soliton path over [0, t_end] and the potential core.
Grid run_grid(const PotentialSpec& V, const SolitonParams& sol, double t_end, const GridRule& rule);

struct TransmissionRun {
    double v = 0.0;
    double x0 = 0.0;
    PhaseTimes phases;
    Grid grid{-1.0, 1.0, 16};
    double dt = 0.0;
    long steps = 0;
    ObserverSeries series;
    /// Peak ||u - u1|| over [0, T1], [T1, T2], [T2, T_end]; NaN for an empty window.
    std::array<double, 3> phase_peaks{};
    double sup_error = 0.0;
    /// Same run with V = 0 on the same grid and time step.
    double floor_error = 0.0;
    double max_edge_mass_fraction = 0.0;
    bool edge_violation = false;
    bool admissibility_overridden = false;
};

struct RunOptions {
    bool compute_floor = true;
    bool record_snapshots = false;
    /// Ground state for the |<u, phi>| observer; computed on the run grid when absent.
    std::optional<BoundState> bound_state;
};

/// Runs one velocity. Throws InvalidInput when the potential is inadmissible and no
/// override is set; never throws on edge-mass violation (flag in the result).
TransmissionRun transmission_run(const ExperimentConfig& config, double v, const RunOptions& opts = {},
                                 std::vector<Field>* snapshots = nullptr);

struct ForcingProfile {
    std::vector<double> times;
    std::vector<double> norms;     // ||V u1(t)||_2
    std::vector<double> envelope;  // C <x0 + v t - c>^-s
    double exponent = 0.0;
    double constant = 0.0;         // sup_t norms / <x0 + v t - c>^-s
};

ForcingProfile forcing_profile(const PotentialSpec& V, const SolitonParams& sol, const std::vector<double>& times,
                               const Grid& grid, double exponent);

struct LemmaCheck {
    std::vector<double> ys;
    std::vector<double> ratios;
    double sup_ratio = 0.0;
    double sup_ratio_doubled = 0.0;
    bool stable = false;
    bool inconclusive = false;
};

/// ||exp(-|x - y|) <x>^-s||_2 / <y>^-s over the y grid by adaptive Gauss-Kronrod on
/// [-window, window], repeated on the doubled window. s must exceed 1/2.
LemmaCheck lemma_error_check(double s, const std::vector<double>& ys, double window = 0.0);

/// Single ratio at y for a given quadrature half-window.
double lemma_ratio(double s, double y, double window);

/// Least-squares slope of log(err) against log(v).
double loglog_slope(const std::vector<double>& vs, const std::vector<double>& errs);

struct ScalingPoint {
    double v = 0.0;
    double error = 0.0;
    double floor = 0.0;
    std::array<double, 3> phase_peaks{};
    bool above_floor = false;
    bool edge_ok = true;
};

struct ScalingResult {
    std::vector<ScalingPoint> points;
    double slope = 0.0;
    double bound_slope = 0.0;   // -(2 delta - 1)
    bool strictly_decreasing = false;
    bool gates_ok = false;
    bool pass = false;
    std::vector<TransmissionRun> runs;
};

/// PASS iff every run passes the edge and floor gates, E(v) is strictly decreasing
/// and the fitted slope is <= -(2 delta - 1) + 0.1.
ScalingResult evaluate_scaling(const std::vector<double>& vs, const std::vector<double>& errors,
                               const std::vector<double>& floors, double delta);

/// Runs each velocity as an independent job on up to `jobs` threads; results keep input order.
std::vector<TransmissionRun> run_velocities(const ExperimentConfig& config, const std::vector<double>& vs, int jobs);

/// Needs >= 4 velocities spanning >= 8x. Runs are executed on up to `jobs` threads.
ScalingResult scaling_study(const ExperimentConfig& config, int jobs = 1);

}  // namespace nlsv
