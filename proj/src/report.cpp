#include "nlsv/report.hpp"

#include <cmath>
#include <cstdio>

#include "nlsv/errors.hpp"

namespace nlsv {

namespace {

// Shortest round-trip representation keeps CSVs byte-identical across runs.
std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::vector<double> log_space(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b > a) || n < 2) throw InvalidInput("log_space: need 0 < a < b and n >= 2");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1));
    out.back() = b;
    return out;
}

SpectralReport spectral_report(const PotentialSpec& V, const std::vector<double>& lambdas) {
    SpectralReport r;
    r.potential = V;
    double lmax = 1.0;
    for (double l : lambdas) lmax = std::max(lmax, l);
    r.grid = scattering_grid(V, lmax);
    r.admissibility = check_admissibility(V, r.grid);
    if (!r.admissibility.inconclusive)
        for (const auto& bs : bound_states(V, r.grid)) r.bound_state_residuals.push_back(bs.residual);
    for (double l : lambdas) {
        auto c = scattering_coefficients(V, r.grid, l);
        r.max_unitarity_defect = std::max(r.max_unitarity_defect, c.unitarity_defect());
        r.max_consistency_defect = std::max(r.max_consistency_defect, c.consistency_defect());
        r.sup_r_lambda = std::max(r.sup_r_lambda, std::abs(c.R) * l);
        r.sup_t_minus_one_lambda = std::max(r.sup_t_minus_one_lambda, std::abs(c.T - 1.0) * l);
        r.table.push_back(c);
    }
    return r;
}

Json to_json(const AdmissibilityReport& r) {
    return Json{{"decay_parameter_estimate", std::isinf(r.decay_parameter_estimate)
                                                 ? Json("super-algebraic")
                                                 : Json(r.decay_parameter_estimate)},
                {"bound_state_count", r.bound_state_count},
                {"bound_state_energies", r.bound_state_energies},
                {"resonance_detected", r.resonance_detected},
                {"wronskian_at_zero", r.wronskian_at_zero},
                {"resonance_stable", r.resonance_stable},
                {"phi_l1", r.phi_l1},
                {"phi_linf", r.phi_linf},
                {"inconclusive", r.inconclusive},
                {"note", r.note},
                {"admissible", r.admissible}};
}

Json to_json(const SpectralReport& r) {
    Json table = Json::array();
    for (const auto& c : r.table)
        table.push_back({{"lambda", c.lambda},
                         {"T", {c.T.real(), c.T.imag()}},
                         {"R", {c.R.real(), c.R.imag()}},
                         {"W", {c.W.real(), c.W.imag()}},
                         {"unitarity_defect", c.unitarity_defect()},
                         {"consistency_defect", c.consistency_defect()},
                         {"truncation_estimate", c.truncation_estimate}});
    return Json{{"potential", potential_to_json(r.potential)},
                {"description", r.potential.describe()},
                {"grid", {{"x_min", r.grid.x_min()}, {"x_max", r.grid.x_max()}, {"n", r.grid.size()}}},
                {"admissibility", to_json(r.admissibility)},
                {"bound_state_residuals", r.bound_state_residuals},
                {"max_unitarity_defect", r.max_unitarity_defect},
                {"max_consistency_defect", r.max_consistency_defect},
                {"sup_abs_R_times_lambda", r.sup_r_lambda},
                {"sup_abs_T_minus_1_times_lambda", r.sup_t_minus_one_lambda},
                {"coefficients", table}};
}

Json to_json(const PhaseTimes& p) {
    return Json{{"T1", p.t1}, {"T2", p.t2}, {"T3", p.t3}, {"T_end", p.t_end}};
}

Json to_json(const TransmissionRun& r) {
    Json peaks = Json::array();
    for (double p : r.phase_peaks) peaks.push_back(finite_or_null(p));
    return Json{{"v", r.v},
                {"x0", r.x0},
                {"phases", to_json(r.phases)},
                {"grid", {{"x_min", r.grid.x_min()}, {"x_max", r.grid.x_max()}, {"n", r.grid.size()}}},
                {"dt", r.dt},
                {"steps", r.steps},
                {"sup_error", r.sup_error},
                {"floor_error", r.floor_error},
                {"phase_peaks", peaks},
                {"max_edge_mass_fraction", r.max_edge_mass_fraction},
                {"edge_violation", r.edge_violation},
                {"admissibility_overridden", r.admissibility_overridden}};
}

Json to_json(const ScalingResult& r) {
    Json per_v = Json::array();
    for (const auto& p : r.points) {
        Json peaks = Json::array();
        for (double x : p.phase_peaks) peaks.push_back(finite_or_null(x));
        per_v.push_back({{"v", p.v},
                         {"error", p.error},
                         {"floor", p.floor},
                         {"above_floor", p.above_floor},
                         {"edge_ok", p.edge_ok},
                         {"phase_peaks", peaks}});
    }
    return Json{{"per_v_error", per_v},
                {"slope", finite_or_null(r.slope)},
                {"bound_slope", r.bound_slope},
                {"strictly_decreasing", r.strictly_decreasing},
                {"gates_ok", r.gates_ok},
                {"pass", r.pass}};
}

void write_spectral_csv(std::ostream& os, const std::vector<ScatteringCoefficients>& table) {
    os << "lambda,re_T,im_T,re_R,im_R,unitarity_defect\n";
    for (const auto& c : table)
        os << num(c.lambda) << ',' << num(c.T.real()) << ',' << num(c.T.imag()) << ',' << num(c.R.real()) << ','
           << num(c.R.imag()) << ',' << num(c.unitarity_defect()) << '\n';
}

void write_series_csv(std::ostream& os, const ObserverSeries& s) {
    os << "t,err_l2,mass,energy,a_abs,edge_mass\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
        os << num(s.times[i]) << ',' << num(s.err_l2[i]) << ',' << num(s.mass[i]) << ',' << num(s.energy[i]) << ','
           << num(s.a_abs[i]) << ',' << num(s.edge_mass[i]) << '\n';
}

void write_loglog_csv(std::ostream& os, const ScalingResult& r) {
    os << "log_v,log_err\n";
    for (const auto& p : r.points) os << num(std::log(p.v)) << ',' << num(std::log(p.error)) << '\n';
}

}  // namespace nlsv
