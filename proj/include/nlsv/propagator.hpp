#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nlsv/fourier.hpp"
#include "nlsv/grid.hpp"
#include "nlsv/potentials.hpp"
#include "nlsv/scattering.hpp"

namespace nlsv {

// Time evolution of  i u_t = -1/2 u_xx + V u - |u|^2 u.

/// Boosted soliton u1 = mu exp(i x v + i mu^2 t/2 - i t v^2/2) sech(mu (x - x0 - v t)).
struct SolitonParams {
    double v = 0.0;
    double x0 = 0.0;
    double mu = 1.0;

    void validate() const;
};

/// Samples the exact soliton at time t. Throws InvalidRun when `check_support` is set
/// and the envelope exceeds 1e-12 at either grid edge.
Field soliton(const SolitonParams& p, double t, const Grid& grid, bool check_support = true);

/// Largest soliton envelope value at the grid edges at time t.
double soliton_edge_tail(const SolitonParams& p, double t, const Grid& grid);

/// Strang split-step Fourier stepper: half kinetic, full potential+nonlinear, half kinetic.
class SplitStepPropagator {
public:
    SplitStepPropagator(const SampledPotential& V, double dt);

    double dt() const noexcept { return dt_; }
    const Grid& grid() const noexcept { return V_.grid; }

    /// Advances u by one step in place. Throws NumericalBreakdown on non-finite output;
    /// `step_index` is reported in the exception.
    void step(Field& u, long step_index = -1);

private:
    void half_kinetic(std::span<Complex> u);

    SampledPotential V_;
    double dt_;
    FourierTransform fft_;
    std::vector<Complex> kinetic_half_;
};

/// One Strang step (convenience wrapper; builds a propagator per call).
Field step(const Field& u, const SampledPotential& V, double dt);

/// E = int 1/4 |u_x|^2 + 1/2 V |u|^2 - 1/4 |u|^4 dx with spectral u_x.
double energy(const Field& u, const SampledPotential& V);

/// Same functional with the potential term written as 1/2 |V u|^2; not conserved by the flow.
double energy_vu_squared_variant(const Field& u, const SampledPotential& V);

/// M = int |u|^2 dx
double mass(const Field& u);

struct StepperConfig {
    double dt = 1e-3;
    /// Observe every this many steps (the final step is always observed).
    long observe_every = 1;
    /// Cap on dt * (v^2/2 + ||V||_inf + mu^2), radians per substep.
    double phase_cap = 0.1;
    double edge_fraction = 0.05;
    /// Relative edge mass above which the run is flagged invalid.
    double edge_mass_tolerance = 1e-8;

    void validate() const;
};

/// dt <= phase_cap / (v^2/2 + ||V||_inf + mu^2)
double max_stable_dt(double v, double mu, double v_sup, double phase_cap = 0.1);

/// Throws InvalidInput when dt violates the phase cap for the given data.
void check_time_step(double dt, double v, double mu, double v_sup, double phase_cap = 0.1);

/// Throws InvalidInput unless k_max >= 4 (v + 3 mu).
void check_resolution(const Grid& grid, double v, double mu);

struct ObserverSeries {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> energy;
    std::vector<double> err_l2;   // ||u - u1||, NaN without a reference soliton
    std::vector<double> a_abs;    // |<u, phi>|, NaN without a bound state
    std::vector<double> edge_mass;
};

struct Observers {
    std::optional<SolitonParams> reference;
    std::optional<BoundState> bound_state;
    bool record_snapshots = false;
    std::function<void(double t, const Field& u)> on_sample;
};

struct EvolveResult {
    Field final_state;
    ObserverSeries series;
    std::vector<Field> snapshots;
    long steps = 0;
    double dt = 0.0;
    /// Largest relative edge mass seen at any observation.
    double max_edge_mass_fraction = 0.0;
    bool edge_violation = false;
};

/// Evolves u0 over [0, t_end] with ceil(t_end / config.dt) equal steps.
/// Does not throw on edge-mass violation; the flag is set in the result.
EvolveResult evolve(const Field& u0, const SampledPotential& V, double t_end, const StepperConfig& config,
                    const Observers& observers = {});

struct BoundModeResidual {
    double max_residual = 0.0;
    double max_amplitude = 0.0;
    /// Central-difference truncation bound cadence^2 max|a'''| / 6 plus a roundoff term.
    double floor = 0.0;
    double relative() const { return max_amplitude > 0 ? max_residual / max_amplitude : 0.0; }
};

/// Checks i a' = -lambda_bs a - <|u|^2 u, phi> along snapshots with a = <u, phi>.
/// Snapshots must be at uniform cadence; at least 3 are required (5 for the floor estimate).
/// The floor covers the central difference only. The splitting adds a frequency defect
/// of relative size ~(dt / cadence)^2, so use cadences spanning many steps.
BoundModeResidual bound_mode_residual(const std::vector<double>& times, const std::vector<Field>& snapshots,
                                      const Field& phi, double lambda_bs);

}  // namespace nlsv
