#include "nlsv/experiments.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlsv/errors.hpp"

namespace nlsv {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double japanese(double y) { return std::sqrt(1.0 + y * y); }
}  // namespace

PhaseTimes phase_times(double v, double x0, double delta) {
    if (!(v > 1.0)) throw InvalidInput("phase_times: v must exceed 1");
    if (!(x0 < 0.0)) throw InvalidInput("phase_times: x0 must be negative");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("phase_times: delta must lie in (0, 1)");
    const double pass = std::abs(x0) / v;
    const double half_width = std::pow(v, -delta);
    PhaseTimes pt;
    pt.t1 = pass - half_width;
    if (pt.t1 < -1e-12) {
        std::ostringstream os;
        os << "phase_times: T1 = " << pt.t1 << " < 0, the soliton starts inside the interaction window";
        throw InvalidInput(os.str());
    }
    pt.t1 = std::max(pt.t1, 0.0);
    pt.t2 = pass + half_width;
    pt.t_end = (1.0 - delta) * std::log(v);
    pt.t3 = pt.t2 + pt.t_end;
    return pt;
}

double ExperimentConfig::decay_parameter() const {
    if (potential.kind == PotentialKind::algebraic) return potential.s;
    return std::numeric_limits<double>::infinity();
}

double ExperimentConfig::x0_for(double v) const { return -x0_factor * std::pow(v, 1.0 - delta); }

void ExperimentConfig::validate() const {
    potential.validate();
    const double s = decay_parameter();
    const double upper = std::isinf(s) ? 1.0 : s / (1.0 + s);
    if (!(delta > 0.5 && delta < upper)) {
        std::ostringstream os;
        os << "delta = " << delta << " must lie strictly inside (1/2, s/(1+s)) = (0.5, " << upper << ")";
        throw InvalidInput(os.str());
    }
    if (!(x0_factor >= 1.0)) throw InvalidInput("x0 rule must place x0 <= -v^(1-delta) (factor >= 1)");
    if (!(mu > 0.0)) throw InvalidInput("mu must be > 0");
    for (double v : velocities)
        if (!(v > 1.0) || !std::isfinite(v)) throw InvalidInput("velocities must be finite and > 1");
    if (!(grid.resolution_factor > 0.0) || !(grid.margin > 0.0)) throw InvalidInput("invalid grid rule");
    if (!(dt_rule.phase_cap > 0.0) || !(dt_rule.refine >= 1.0)) throw InvalidInput("invalid dt rule");
    if (!(observe_interval > 0.0)) throw InvalidInput("observe_interval must be > 0");
}

Grid run_grid(const PotentialSpec& V, const SolitonParams& sol, double t_end, const GridRule& rule) {
    const double margin = rule.margin / sol.mu;
    const double start = sol.x0, stop = sol.x0 + sol.v * t_end;
    const double left = std::min({start, stop, V.center - rule.potential_halfwidth}) - margin;
    const double right = std::max({start, stop, V.center + rule.potential_halfwidth}) + margin;
    const double dx_max = std::numbers::pi / (rule.resolution_factor * (std::abs(sol.v) + 3.0 * sol.mu));
    const auto n = std::max(rule.min_n, next_power_of_two(static_cast<std::size_t>(std::ceil((right - left) / dx_max))));
    return Grid(left, right, n);
}

namespace {

void require_admissible(const ExperimentConfig& config) {
    if (config.override_admissibility) return;
    const Grid g = scattering_grid(config.potential, 1.0);
    const auto report = check_admissibility(config.potential, g);
    if (!report.admissible) {
        std::ostringstream os;
        os << "potential " << config.potential.describe() << " is not admissible";
        if (report.resonance_detected) os << " (zero-energy resonance, |W(0)| = " << report.wronskian_at_zero << ")";
        if (report.bound_state_count > 1) os << " (" << report.bound_state_count << " bound states)";
        if (report.inconclusive) os << " (" << report.note << ")";
        os << "; set override_admissibility to run anyway";
        throw InvalidInput(os.str());
    }
}

double window_peak(const ObserverSeries& s, double lo, double hi) {
    double peak = kNaN;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const double t = s.times[i];
        if (t < lo - 1e-12 || t > hi + 1e-12) continue;
        peak = std::isnan(peak) ? s.err_l2[i] : std::max(peak, s.err_l2[i]);
    }
    return peak;
}

double series_max(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, x);
    return m;
}

}  // namespace

TransmissionRun transmission_run(const ExperimentConfig& config, double v, const RunOptions& opts,
                                 std::vector<Field>* snapshots) {
    config.validate();
    require_admissible(config);

    TransmissionRun run;
    run.v = v;
    run.x0 = config.x0_for(v);
    run.phases = phase_times(v, run.x0, config.delta);
    run.admissibility_overridden = config.override_admissibility;

    const SolitonParams sol{v, run.x0, config.mu};
    run.grid = run_grid(config.potential, sol, run.phases.t_end, config.grid);
    check_resolution(run.grid, v, config.mu);

    const auto V = sample_potential(config.potential, run.grid);
    StepperConfig stepper;
    stepper.phase_cap = config.dt_rule.phase_cap;
    if (config.dt_rule.dt) {
        check_time_step(*config.dt_rule.dt, v, config.mu, config.potential.sup_norm(), stepper.phase_cap);
        stepper.dt = *config.dt_rule.dt;
    } else {
        stepper.dt = max_stable_dt(v, config.mu, config.potential.sup_norm(), stepper.phase_cap) / config.dt_rule.refine;
    }
    const double obs = std::min(config.observe_interval, std::pow(v, -config.delta) / 20.0);
    stepper.observe_every = std::max<long>(1, static_cast<long>(std::floor(obs / stepper.dt)));

    const Field u0 = soliton(sol, 0.0, run.grid);
    Observers observers;
    observers.reference = sol;
    observers.bound_state = opts.bound_state;
    if (!observers.bound_state && config.potential.kind != PotentialKind::zero) {
        auto states = bound_states(config.potential, run.grid);
        if (!states.empty()) observers.bound_state = std::move(states.front());
    }
    observers.record_snapshots = opts.record_snapshots;
    auto result = evolve(u0, V, run.phases.t_end, stepper, observers);
    soliton(sol, run.phases.t_end, run.grid);  // support check at the horizon

    run.dt = result.dt;
    run.steps = result.steps;
    run.series = std::move(result.series);
    run.max_edge_mass_fraction = result.max_edge_mass_fraction;
    run.edge_violation = result.edge_violation;
    run.sup_error = series_max(run.series.err_l2);
    run.phase_peaks = {window_peak(run.series, 0.0, run.phases.t1),
                       window_peak(run.series, run.phases.t1, std::min(run.phases.t2, run.phases.t_end)),
                       run.phases.t2 <= run.phases.t_end ? window_peak(run.series, run.phases.t2, run.phases.t_end)
                                                         : kNaN};
    if (snapshots) *snapshots = std::move(result.snapshots);

    if (opts.compute_floor) {
        const auto V0 = sample_potential(PotentialSpec::zero(), run.grid);
        Observers floor_obs;
        floor_obs.reference = sol;
        const auto floor = evolve(u0, V0, run.phases.t_end, stepper, floor_obs);
        run.floor_error = series_max(floor.series.err_l2);
    }
    return run;
}

ForcingProfile forcing_profile(const PotentialSpec& V, const SolitonParams& sol, const std::vector<double>& times,
                               const Grid& grid, double exponent) {
    const auto sampled = sample_potential(V, grid);
    ForcingProfile fp;
    fp.times = times;
    fp.exponent = exponent;
    std::vector<double> weights;
    for (double t : times) {
        Field u1 = soliton(sol, t, grid);
        for (std::size_t j = 0; j < u1.size(); ++j) u1[j] *= sampled.values[j];
        const double norm = l2_norm(u1);
        const double w = std::pow(japanese(sol.x0 + sol.v * t - V.center), -exponent);
        fp.norms.push_back(norm);
        weights.push_back(w);
        fp.constant = std::max(fp.constant, norm / w);
    }
    for (double w : weights) fp.envelope.push_back(fp.constant * w);
    return fp;
}

double lemma_ratio(double s, double y, double window) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double x) {
        const double g = std::exp(-std::abs(x - y)) * std::pow(japanese(x), -s);
        return g * g;
    };
    // Break at the kink x = y and at the weight's peak x = 0.
    std::vector<double> cuts{-window, window, y};
    if (std::abs(y) > 1e-12) cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        total += gauss_kronrod<double, 61>::integrate(integrand, cuts[i], cuts[i + 1], 20, 1e-13);
    }
    return std::sqrt(total) / std::pow(japanese(y), -s);
}

LemmaCheck lemma_error_check(double s, const std::vector<double>& ys, double window) {
    if (!(s > 0.5)) throw InvalidInput("lemma_error_check: s must exceed 1/2");
    if (ys.empty()) throw InvalidInput("lemma_error_check: empty y grid");
    double ymax = 0.0;
    for (double y : ys) {
        if (!std::isfinite(y)) throw InvalidInput("lemma_error_check: non-finite y");
        ymax = std::max(ymax, std::abs(y));
    }
    if (window <= 0.0) window = 2.0 * ymax + 20.0;

    LemmaCheck out;
    out.ys = ys;
    // exp(-|x-y|) must have decayed below ~e^-20 inside the window.
    out.inconclusive = window < ymax + 20.0;
    for (double y : ys) {
        const double r = lemma_ratio(s, y, window);
        out.ratios.push_back(r);
        out.sup_ratio = std::max(out.sup_ratio, r);
        out.sup_ratio_doubled = std::max(out.sup_ratio_doubled, lemma_ratio(s, y, 2.0 * window));
    }
    out.stable = std::isfinite(out.sup_ratio) &&
                 std::abs(out.sup_ratio_doubled - out.sup_ratio) <= 0.05 * out.sup_ratio;
    return out;
}

double loglog_slope(const std::vector<double>& vs, const std::vector<double>& errs) {
    if (vs.size() != errs.size() || vs.size() < 2) throw InvalidInput("loglog_slope: need >= 2 paired points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (!(vs[i] > 0) || !(errs[i] > 0)) throw InvalidInput("loglog_slope: values must be positive");
        const double lx = std::log(vs[i]), ly = std::log(errs[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingResult evaluate_scaling(const std::vector<double>& vs, const std::vector<double>& errors,
                               const std::vector<double>& floors, double delta) {
    ScalingResult r;
    r.bound_slope = -(2.0 * delta - 1.0);
    std::vector<double> fit_v, fit_e;
    r.gates_ok = true;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        ScalingPoint p;
        p.v = vs[i];
        p.error = errors[i];
        p.floor = floors.empty() ? 0.0 : floors[i];
        p.above_floor = p.error >= 10.0 * p.floor;
        if (p.above_floor) {
            fit_v.push_back(p.v);
            fit_e.push_back(p.error);
        } else {
            r.gates_ok = false;
        }
        r.points.push_back(p);
    }
    r.strictly_decreasing = true;
    for (std::size_t i = 1; i < errors.size(); ++i)
        if (!(errors[i] < errors[i - 1])) r.strictly_decreasing = false;
    r.slope = fit_v.size() >= 2 ? loglog_slope(fit_v, fit_e) : kNaN;
    r.pass = r.gates_ok && r.strictly_decreasing && r.slope <= r.bound_slope + 0.1;
    return r;
}

std::vector<TransmissionRun> run_velocities(const ExperimentConfig& config, const std::vector<double>& vs, int jobs) {
    std::vector<TransmissionRun> runs(vs.size());
    jobs = std::max(1, jobs);
    const auto width = static_cast<std::size_t>(jobs);
    for (std::size_t begin = 0; begin < vs.size(); begin += width) {
        std::vector<std::future<TransmissionRun>> batch;
        const std::size_t end = std::min(vs.size(), begin + width);
        for (std::size_t i = begin; i < end; ++i)
            batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                       [&config, v = vs[i]] { return transmission_run(config, v); }));
        for (std::size_t i = begin; i < end; ++i) runs[i] = batch[i - begin].get();
    }
    return runs;
}

ScalingResult scaling_study(const ExperimentConfig& config, int jobs) {
    config.validate();
    auto vs = config.velocities;
    std::sort(vs.begin(), vs.end());
    if (vs.size() < 4 || vs.back() < 8.0 * vs.front())
        throw InvalidInput("scaling_study: need >= 4 velocities spanning at least a factor 8");
    require_admissible(config);

    ExperimentConfig run_config = config;
    run_config.override_admissibility = true;  // checked once above
    auto runs = run_velocities(run_config, vs, jobs);
    for (auto& run : runs) run.admissibility_overridden = config.override_admissibility;

    std::vector<double> errors, floors;
    for (const auto& run : runs) {
        errors.push_back(run.sup_error);
        floors.push_back(run.floor_error);
    }
    auto result = evaluate_scaling(vs, errors, floors, config.delta);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        result.points[i].phase_peaks = runs[i].phase_peaks;
        result.points[i].edge_ok = !runs[i].edge_violation;
        if (runs[i].edge_violation) result.gates_ok = false;
    }
    result.pass = result.pass && result.gates_ok;
    result.runs = std::move(runs);
    return result;
}

}  // namespace nlsv
