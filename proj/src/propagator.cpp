#include "nlsv/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlsv/errors.hpp"

namespace nlsv {

namespace {
constexpr Complex kI{0.0, 1.0};

double sech(double x) {
    const double ax = std::abs(x);
    if (ax > 700.0) return 0.0;
    const double e = std::exp(-ax);
    return 2.0 * e / (1.0 + e * e);
}
}  // namespace

void SolitonParams::validate() const {
    if (!std::isfinite(v) || !std::isfinite(x0)) throw InvalidInput("soliton: v and x0 must be finite");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("soliton: mu must be > 0");
}

double soliton_edge_tail(const SolitonParams& p, double t, const Grid& grid) {
    const double c = p.x0 + p.v * t;
    return p.mu * std::max(sech(p.mu * (grid.x_min() - c)), sech(p.mu * (grid.x_max() - c)));
}

Field soliton(const SolitonParams& p, double t, const Grid& grid, bool check_support) {
    p.validate();
    if (check_support) {
        const double tail = soliton_edge_tail(p, t, grid);
        if (tail > 1e-12) {
            std::ostringstream os;
            os << "soliton: envelope " << tail << " at the grid edge at t = " << t << " (needs <= 1e-12)";
            throw InvalidRun(os.str());
        }
    }
    const double center = p.x0 + p.v * t;
    const double phase_t = 0.5 * p.mu * p.mu * t - 0.5 * t * p.v * p.v;
    Field out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.x(j);
        out[j] = p.mu * sech(p.mu * (x - center)) * std::polar(1.0, x * p.v + phase_t);
    }
    return out;
}

SplitStepPropagator::SplitStepPropagator(const SampledPotential& V, double dt)
    : V_(V), dt_(dt), fft_(V.grid.size()), kinetic_half_(V.grid.size()) {
    if (!std::isfinite(dt) || dt == 0.0) throw InvalidInput("propagator: dt must be finite and nonzero");
    for (std::size_t j = 0; j < kinetic_half_.size(); ++j) {
        const double k = V.grid.k(j);
        kinetic_half_[j] = std::polar(1.0, -0.5 * dt * 0.5 * k * k);
    }
}

void SplitStepPropagator::half_kinetic(std::span<Complex> u) {
    fft_.forward(u);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= kinetic_half_[j];
    fft_.inverse(u);
}

void SplitStepPropagator::step(Field& u, long step_index) {
    if (!(u.grid() == V_.grid)) throw InvalidInput("propagator: field and potential grids differ");
    auto values = u.values();
    half_kinetic(values);
    // |u| is invariant under this substep, so the pointwise phase is exact.
    for (std::size_t j = 0; j < values.size(); ++j)
        values[j] *= std::polar(1.0, -dt_ * (V_.values[j] - std::norm(values[j])));
    half_kinetic(values);
    if (!u.all_finite()) throw NumericalBreakdown("propagator: non-finite field", step_index);
}

Field step(const Field& u, const SampledPotential& V, double dt) {
    Field out = u;
    SplitStepPropagator(V, dt).step(out);
    return out;
}

double mass(const Field& u) {
    const double n = l2_norm(u);
    return n * n;
}

namespace {
double energy_impl(const Field& u, const SampledPotential& V, bool vu_squared) {
    if (!(u.grid() == V.grid)) throw InvalidInput("energy: grid mismatch");
    const Field ux = spectral_derivative(u, 1);
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double rho = std::norm(u[j]);
        const double pot = vu_squared ? 0.5 * V.values[j] * V.values[j] * rho : 0.5 * V.values[j] * rho;
        sum += 0.25 * std::norm(ux[j]) + pot - 0.25 * rho * rho;
    }
    return u.grid().dx() * sum;
}
}  // namespace

double energy(const Field& u, const SampledPotential& V) { return energy_impl(u, V, false); }

double energy_vu_squared_variant(const Field& u, const SampledPotential& V) { return energy_impl(u, V, true); }

void StepperConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("stepper: dt must be > 0");
    if (observe_every < 1) throw InvalidInput("stepper: observe_every must be >= 1");
    if (!(phase_cap > 0.0)) throw InvalidInput("stepper: phase_cap must be > 0");
}

double max_stable_dt(double v, double mu, double v_sup, double phase_cap) {
    return phase_cap / (0.5 * v * v + v_sup + mu * mu);
}

void check_time_step(double dt, double v, double mu, double v_sup, double phase_cap) {
    const double limit = max_stable_dt(v, mu, v_sup, phase_cap);
    if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "dt = " << dt << " exceeds the phase-resolution limit " << limit << " = " << phase_cap
           << " / (v^2/2 + ||V||_inf + mu^2)";
        throw InvalidInput(os.str());
    }
}

void check_resolution(const Grid& grid, double v, double mu) {
    const double need = 4.0 * (std::abs(v) + 3.0 * mu);
    if (grid.k_max() < need) {
        std::ostringstream os;
        os << "grid resolves k_max = " << grid.k_max() << " but boosted data needs >= " << need;
        throw InvalidInput(os.str());
    }
}

EvolveResult evolve(const Field& u0, const SampledPotential& V, double t_end, const StepperConfig& config,
                    const Observers& observers) {
    config.validate();
    if (!(t_end >= 0.0)) throw InvalidInput("evolve: t_end must be >= 0");
    if (!u0.all_finite()) throw NumericalBreakdown("evolve: non-finite initial data", 0);

    const long steps = t_end == 0.0 ? 0 : static_cast<long>(std::ceil(t_end / config.dt - 1e-9));
    const double dt = steps > 0 ? t_end / static_cast<double>(steps) : config.dt;

    EvolveResult result{u0, {}, {}, steps, dt, 0.0, false};
    SplitStepPropagator prop(V, dt);
    const double m0 = mass(u0);

    auto observe = [&](double t, const Field& u) {
        auto& s = result.series;
        s.times.push_back(t);
        const double m = mass(u);
        s.mass.push_back(m);
        s.energy.push_back(energy(u, V));
        if (observers.reference) {
            Field diff = u;
            diff -= soliton(*observers.reference, t, u.grid(), false);
            s.err_l2.push_back(l2_norm(diff));
        } else {
            s.err_l2.push_back(std::numeric_limits<double>::quiet_NaN());
        }
        s.a_abs.push_back(observers.bound_state ? std::abs(inner_product(u, observers.bound_state->phi))
                                                : std::numeric_limits<double>::quiet_NaN());
        const double em = edge_mass(u, config.edge_fraction);
        s.edge_mass.push_back(em);
        if (m0 > 0) {
            result.max_edge_mass_fraction = std::max(result.max_edge_mass_fraction, em / m0);
            if (em > config.edge_mass_tolerance * m0) result.edge_violation = true;
        }
        if (observers.record_snapshots) result.snapshots.push_back(u);
        if (observers.on_sample) observers.on_sample(t, u);
    };

    Field& u = result.final_state;
    observe(0.0, u);
    for (long n = 1; n <= steps; ++n) {
        prop.step(u, n);
        if (n % config.observe_every == 0 || n == steps) observe(static_cast<double>(n) * dt, u);
    }
    return result;
}

BoundModeResidual bound_mode_residual(const std::vector<double>& times, const std::vector<Field>& snapshots,
                                      const Field& phi, double lambda_bs) {
    const auto m = snapshots.size();
    if (m < 3 || times.size() != m) throw InvalidInput("bound_mode_residual: need >= 3 snapshots with times");
    const double cadence = times[1] - times[0];
    for (std::size_t i = 1; i < m; ++i)
        if (std::abs((times[i] - times[i - 1]) - cadence) > 1e-9 * std::max(1.0, cadence))
            throw InvalidInput("bound_mode_residual: snapshots are not at uniform cadence");

    std::vector<Complex> a(m), nl(m);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Field& u = snapshots[i];
        a[i] = inner_product(u, phi);
        Field cubic = u;
        for (std::size_t j = 0; j < u.size(); ++j) cubic[j] *= std::norm(u[j]);
        nl[i] = inner_product(cubic, phi);
        scale = std::max(scale, l2_norm(u) * l2_norm(phi));
    }

    BoundModeResidual out;
    for (const auto& z : a) out.max_amplitude = std::max(out.max_amplitude, std::abs(z));
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const Complex da = (a[i + 1] - a[i - 1]) / (2.0 * cadence);
        out.max_residual = std::max(out.max_residual, std::abs(kI * da + lambda_bs * a[i] + nl[i]));
    }
    double third = 0.0;
    for (std::size_t i = 2; i + 2 < m; ++i) {
        const Complex d3 = (a[i + 2] - 2.0 * a[i + 1] + 2.0 * a[i - 1] - a[i - 2]) / (2.0 * cadence * cadence * cadence);
        third = std::max(third, std::abs(d3));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double roundoff = 10.0 * eps * std::sqrt(static_cast<double>(phi.size())) * scale / cadence;
    out.floor = cadence * cadence * third / 6.0 + roundoff;
    return out;
}

}  // namespace nlsv
