#include "nlsv/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlsv/errors.hpp"
#include "nlsv/scattering.hpp"

namespace nlsv {

std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::zero: return "zero";
        case PotentialKind::algebraic: return "algebraic";
        case PotentialKind::gaussian: return "gaussian";
        case PotentialKind::poschl_teller: return "poschl_teller";
        case PotentialKind::sech2_scaled: return "sech2_scaled";
    }
    return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
    if (name == "zero") return PotentialKind::zero;
    if (name == "algebraic") return PotentialKind::algebraic;
    if (name == "gaussian" || name == "delta") return PotentialKind::gaussian;
    if (name == "poschl_teller") return PotentialKind::poschl_teller;
    if (name == "sech2_scaled" || name == "sech2") return PotentialKind::sech2_scaled;
    throw InvalidInput("unknown potential kind '" + name + "'");
}

PotentialSpec PotentialSpec::zero() { return {}; }

PotentialSpec PotentialSpec::algebraic(double q, double s, double center) {
    PotentialSpec p;
    p.kind = PotentialKind::algebraic;
    p.q = q;
    p.s = s;
    p.center = center;
    return p;
}

PotentialSpec PotentialSpec::gaussian(double q, double sigma, double center) {
    PotentialSpec p;
    p.kind = PotentialKind::gaussian;
    p.q = q;
    p.sigma = sigma;
    p.center = center;
    return p;
}

PotentialSpec PotentialSpec::sech2(double beta, double center) {
    PotentialSpec p;
    p.kind = PotentialKind::sech2_scaled;
    p.beta = beta;
    p.center = center;
    return p;
}

PotentialSpec PotentialSpec::poschl_teller(double nu, double center) {
    PotentialSpec p;
    p.kind = PotentialKind::poschl_teller;
    p.nu = nu;
    p.center = center;
    return p;
}

PotentialSpec PotentialSpec::delta_approximation(double q, double sigma, double center) {
    if (!(sigma > 0.0 && sigma <= 0.05))
        throw InvalidInput("delta approximation needs 0 < sigma <= 0.05");
    return gaussian(q / (sigma * std::sqrt(2.0 * std::numbers::pi)), sigma, center);
}

void PotentialSpec::validate() const {
    for (double v : {q, s, sigma, beta, nu, center})
        if (!std::isfinite(v)) throw InvalidInput("potential: non-finite parameter");
    if (kind == PotentialKind::gaussian && !(sigma > 0.0)) throw InvalidInput("potential: sigma must be > 0");
    if (kind == PotentialKind::algebraic && !(s > 0.0)) throw InvalidInput("potential: s must be > 0");
    if (kind == PotentialKind::poschl_teller && !(nu >= 0.0)) throw InvalidInput("potential: nu must be >= 0");
}

double PotentialSpec::operator()(double x) const noexcept {
    const double y = x - center;
    switch (kind) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::algebraic: return q * std::pow(1.0 + y * y, -0.5 * s);
        case PotentialKind::gaussian: return q * std::exp(-y * y / (2.0 * sigma * sigma));
        case PotentialKind::poschl_teller: {
            const double c = 1.0 / std::cosh(y);
            return -0.5 * nu * (nu + 1.0) * c * c;
        }
        case PotentialKind::sech2_scaled: {
            const double c = 1.0 / std::cosh(y);
            return -beta * c * c;
        }
    }
    return 0.0;
}

double PotentialSpec::sup_norm() const noexcept {
    switch (kind) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::algebraic:
        case PotentialKind::gaussian: return std::abs(q);
        case PotentialKind::poschl_teller: return 0.5 * nu * (nu + 1.0);
        case PotentialKind::sech2_scaled: return std::abs(beta);
    }
    return 0.0;
}

bool PotentialSpec::super_algebraic() const noexcept { return kind != PotentialKind::algebraic; }

double PotentialSpec::support_radius(double tol) const {
    const double amp = sup_norm();
    if (amp <= tol) return 0.0;
    switch (kind) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::algebraic: return std::sqrt(std::max(0.0, std::pow(amp / tol, 2.0 / s) - 1.0));
        case PotentialKind::gaussian: return sigma * std::sqrt(2.0 * std::log(amp / tol));
        case PotentialKind::poschl_teller:
        case PotentialKind::sech2_scaled: return 0.5 * std::log(4.0 * amp / tol);
    }
    return 0.0;
}

bool PotentialSpec::is_delta_approximation() const noexcept {
    return kind == PotentialKind::gaussian && sigma <= 0.05;
}

std::string PotentialSpec::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    switch (kind) {
        case PotentialKind::zero: break;
        case PotentialKind::algebraic: os << "(q=" << q << ", s=" << s << ")"; break;
        case PotentialKind::gaussian:
            os << "(q=" << q << ", sigma=" << sigma << ")";
            if (is_delta_approximation()) os << " [delta approximation]";
            break;
        case PotentialKind::poschl_teller: os << "(nu=" << nu << ")"; break;
        case PotentialKind::sech2_scaled: os << "(beta=" << beta << ")"; break;
    }
    if (center != 0.0) os << " centered at " << center;
    return os.str();
}

SampledPotential sample_potential(const PotentialSpec& spec, const Grid& grid) {
    spec.validate();
    SampledPotential out{spec, grid, std::vector<double>(grid.size())};
    for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] = spec(grid.x(j));
    return out;
}

namespace {

struct LineFit {
    double slope = 0.0;
    std::size_t count = 0;
};

LineFit fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    return {denom > 0 ? (n * sxy - sx * sy) / denom : 0.0, xs.size()};
}

}  // namespace

double decay_fit(const PotentialSpec& spec, const Grid& grid, double slope_cap) {
    spec.validate();
    const double L = grid.length();
    const double lo = L / 8.0, mid = L / 4.0, hi = 3.0 * L / 8.0;

    std::vector<double> lx_all, ly_all, lx_in, ly_in, lx_out, ly_out;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double y = std::abs(grid.x(j) - spec.center);
        if (y < lo || y > hi) continue;
        const double v = std::abs(spec(grid.x(j)));
        if (v == 0.0) {
            if (spec.kind != PotentialKind::zero && spec.super_algebraic()) return kSuperAlgebraic;
            throw InvalidInput("decay_fit: potential vanishes on the fit window");
        }
        const double lx = 0.5 * std::log1p(y * y);
        const double ly = std::log(v);
        lx_all.push_back(lx);
        ly_all.push_back(ly);
        (y < mid ? lx_in : lx_out).push_back(lx);
        (y < mid ? ly_in : ly_out).push_back(ly);
    }
    if (lx_all.size() < 4 || lx_in.size() < 2 || lx_out.size() < 2)
        throw InvalidInput("decay_fit: fit window holds too few samples");

    const double s_all = -fit_slope(lx_all, ly_all).slope;
    const double s_in = -fit_slope(lx_in, ly_in).slope;
    const double s_out = -fit_slope(lx_out, ly_out).slope;
    if (s_all > slope_cap) return kSuperAlgebraic;
    // Power laws have a constant log-log slope; exponential tails steepen outwards.
    if (s_in > 0 && s_out / s_in > 1.25) return kSuperAlgebraic;
    return s_all;
}

AdmissibilityReport check_admissibility(const PotentialSpec& spec, const Grid& grid,
                                        const AdmissibilityTolerances& tol) {
    spec.validate();
    AdmissibilityReport report;

    const double edge = std::max(std::abs(spec(grid.x_min())), std::abs(spec(grid.x_max())));
    if (edge > tol.edge_tolerance) {
        report.inconclusive = true;
        std::ostringstream os;
        os << "|V| = " << edge << " at the domain edge exceeds " << tol.edge_tolerance
           << "; asymptotic matching is not valid";
        report.note = os.str();
        return report;
    }

    report.decay_parameter_estimate =
        spec.kind == PotentialKind::zero ? kSuperAlgebraic : decay_fit(spec, grid);

    BoundStateOptions bs_opts;
    bs_opts.negative_threshold = tol.negative_threshold;
    const auto states = bound_states(spec, grid, bs_opts);
    report.bound_state_count = static_cast<int>(states.size());
    for (const auto& st : states) report.bound_state_energies.push_back(st.energy);
    if (!states.empty()) {
        report.phi_l1 = lp_norm(states.front().phi, 1.0);
        report.phi_linf = lp_norm(states.front().phi, std::numeric_limits<double>::infinity());
    }

    JostOptions jopts;
    jopts.edge_tolerance = tol.edge_tolerance;
    const auto res = detect_resonance(spec, grid, tol.resonance_threshold, jopts);
    report.resonance_detected = res.resonance;
    report.wronskian_at_zero = res.w0_abs;
    report.resonance_stable = res.stable;
    if (!res.stable) {
        report.inconclusive = true;
        report.note = "zero-energy Wronskian verdict changes under domain doubling";
    }

    const bool phi_ok = std::isfinite(report.phi_l1) && std::isfinite(report.phi_linf);
    report.admissible = !report.inconclusive && report.bound_state_count <= 1 && !report.resonance_detected &&
                        report.decay_parameter_estimate > 2.0 && phi_ok;
    return report;
}

}  // namespace nlsv
