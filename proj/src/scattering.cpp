#include "nlsv/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlsv/errors.hpp"
#include "nlsv/fourier.hpp"

namespace nlsv {

namespace {

constexpr Complex kI{0.0, 1.0};

// Approximate integral of |V| (moment 0) or |y V| (moment 1) beyond distance r from the center.
double tail_integral(const PotentialSpec& V, double r, int moment) {
    r = std::max(r, 1.0);
    switch (V.kind) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::algebraic: {
            const double p = V.s - 1.0 - moment;
            if (p <= 0.0) return std::numeric_limits<double>::infinity();
            return std::abs(V.q) * std::pow(r, -p) / p;
        }
        case PotentialKind::gaussian: {
            const double edge = std::abs(V(V.center + r));
            return edge * V.sigma * V.sigma / r * (moment == 1 ? r : 1.0);
        }
        case PotentialKind::poschl_teller:
        case PotentialKind::sech2_scaled: {
            const double edge = std::abs(V(V.center + r));
            return 0.5 * edge * (moment == 1 ? r + 0.5 : 1.0);
        }
    }
    return 0.0;
}

using State = std::array<Complex, 2>;

// lambda != 0: state (a, b) with f = a e^{i l x} + b e^{-i l x}; exact when V == 0.
// lambda == 0: state (f, f').
State rhs(const PotentialSpec& V, double lambda, double x, const State& y) {
    const double v = V(x);
    if (lambda == 0.0) return {y[1], 2.0 * v * y[0]};
    const Complex e2 = std::polar(1.0, 2.0 * lambda * x);
    const Complex c = v / (kI * lambda);
    return {c * (y[0] + y[1] * std::conj(e2)), -c * (y[0] * e2 + y[1])};
}

State rk4_step(const PotentialSpec& V, double lambda, double x, double h, const State& y) {
    auto axpy = [](const State& s, double a, const State& k) {
        return State{s[0] + a * k[0], s[1] + a * k[1]};
    };
    const State k1 = rhs(V, lambda, x, y);
    const State k2 = rhs(V, lambda, x + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = rhs(V, lambda, x + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = rhs(V, lambda, x + h, axpy(y, h, k3));
    return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

void unpack(double lambda, double x, const State& y, Complex& f, Complex& df) {
    if (lambda == 0.0) {
        f = y[0];
        df = y[1];
        return;
    }
    const Complex e = std::polar(1.0, lambda * x);
    f = y[0] * e + y[1] * std::conj(e);
    df = kI * lambda * (y[0] * e - y[1] * std::conj(e));
}

}  // namespace

JostSolution jost(const PotentialSpec& V, const Grid& grid, double lambda, JostSign sign, const JostOptions& opts) {
    V.validate();
    if (!std::isfinite(lambda)) throw InvalidInput("jost: lambda must be finite");
    const bool plus = sign == JostSign::plus;
    const double start = plus ? grid.x_max() : grid.x_min();
    const double edge_v = std::abs(V(start));
    if (edge_v > opts.edge_tolerance) {
        std::ostringstream os;
        os << "jost: |V(" << start << ")| = " << edge_v << " exceeds edge tolerance " << opts.edge_tolerance;
        throw InvalidInput(os.str());
    }

    const std::size_t n = grid.size();
    const double h = grid.dx();
    JostSolution sol{lambda, sign, grid, std::vector<Complex>(n), std::vector<Complex>(n), {}, {}, 0.0};

    State y = lambda == 0.0 ? State{1.0, 0.0} : (plus ? State{1.0, 0.0} : State{0.0, 1.0});
    if (plus) {
        double x = grid.x_max();
        for (std::size_t step = 0; step < n; ++step) {
            const std::size_t j = n - 1 - step;
            y = rk4_step(V, lambda, x, -h, y);
            x = grid.x(j);
            unpack(lambda, x, y, sol.f[j], sol.df[j]);
            if (!std::isfinite(std::abs(y[0])) || !std::isfinite(std::abs(y[1])))
                throw NumericalBreakdown("jost: non-finite state", static_cast<long>(step));
        }
    } else {
        double x = grid.x_min();
        unpack(lambda, x, y, sol.f[0], sol.df[0]);
        for (std::size_t j = 1; j < n; ++j) {
            y = rk4_step(V, lambda, x, h, y);
            x = grid.x(j);
            unpack(lambda, x, y, sol.f[j], sol.df[j]);
            if (!std::isfinite(std::abs(y[0])) || !std::isfinite(std::abs(y[1])))
                throw NumericalBreakdown("jost: non-finite state", static_cast<long>(j));
        }
    }
    sol.far_a = y[0];
    sol.far_b = y[1];

    const double r = std::abs(start - V.center);
    sol.truncation_estimate =
        lambda == 0.0 ? tail_integral(V, r, 1) * 2.0 : tail_integral(V, r, 0) / std::abs(lambda);
    return sol;
}

double jost_ode_residual(const JostSolution& sol, const PotentialSpec& V) {
    const auto n = sol.f.size();
    const double h = sol.grid.dx();
    const double lh = sol.lambda * h;
    const double c = std::cos(lh);
    double res = 0.0, norm = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const Complex vm = V(sol.grid.x(j - 1)) * sol.f[j - 1];
        const Complex v0 = V(sol.grid.x(j)) * sol.f[j];
        const Complex vp = V(sol.grid.x(j + 1)) * sol.f[j + 1];
        // exact on e^{+-i lambda x}; the potential term carries the O(h^2) correction
        const Complex lhs = (sol.f[j + 1] - 2.0 * c * sol.f[j] + sol.f[j - 1]) / (h * h);
        const Complex rhs = (vm + 10.0 * v0 + vp) / 6.0 - lh * lh / 6.0 * v0;
        res += std::norm(0.5 * (lhs - rhs));
        norm += std::norm(sol.f[j]);
    }
    return norm > 0 ? std::sqrt(res / norm) : std::sqrt(res);
}

WronskianValue wronskian(const JostSolution& plus, const JostSolution& minus, double rel_tol, double abs_tol) {
    if (!(plus.grid == minus.grid) || plus.lambda != minus.lambda)
        throw InvalidInput("wronskian: solutions differ in grid or lambda");
    const auto n = plus.f.size();
    const std::size_t margin = n / 20;
    std::vector<double> re, im;
    std::vector<Complex> w;
    re.reserve(n);
    im.reserve(n);
    w.reserve(n);
    for (std::size_t j = margin; j < n - margin; ++j) {
        const Complex wj = plus.f[j] * minus.df[j] - minus.f[j] * plus.df[j];
        w.push_back(wj);
        re.push_back(wj.real());
        im.push_back(wj.imag());
    }
    auto median = [](std::vector<double>& v) {
        const auto mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
        double m = v[mid];
        if (v.size() % 2 == 0) {
            const double lower = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
            m = 0.5 * (m + lower);
        }
        return m;
    };
    Complex mean{};
    for (const auto& z : w) mean += z;
    mean /= static_cast<double>(w.size());
    double var = 0.0;
    for (const auto& z : w) var += std::norm(z - mean);
    WronskianValue out{{median(re), median(im)}, std::sqrt(var / static_cast<double>(w.size()))};
    if (out.spread > rel_tol * std::abs(out.value) + abs_tol) {
        std::ostringstream os;
        os << "wronskian: pointwise spread " << out.spread << " exceeds tolerance at lambda = " << plus.lambda;
        throw AccuracyError(os.str());
    }
    return out;
}

ResonanceVerdict detect_resonance(const PotentialSpec& V, const Grid& grid, double threshold,
                                  const JostOptions& opts) {
    auto w0 = [&](const Grid& g) {
        const auto fp = jost(V, g, 0.0, JostSign::plus, opts);
        const auto fm = jost(V, g, 0.0, JostSign::minus, opts);
        return std::abs(wronskian(fp, fm, 1e-6, 1e-8).value);
    };
    const double c = 0.5 * (grid.x_min() + grid.x_max());
    const double L = grid.length();
    const Grid doubled(c - L, c + L, 2 * grid.size());

    ResonanceVerdict v;
    v.w0_abs = w0(grid);
    v.w0_abs_doubled = w0(doubled);
    const bool small1 = v.w0_abs < threshold;
    const bool small2 = v.w0_abs_doubled < threshold;
    v.stable = small1 == small2;
    v.resonance = small1 && small2;
    return v;
}

double ScatteringCoefficients::unitarity_defect() const { return std::abs(std::norm(T) + std::norm(R) - 1.0); }

double ScatteringCoefficients::consistency_defect() const { return std::abs(T - T_matching); }

ScatteringCoefficients scattering_coefficients(const PotentialSpec& V, const Grid& grid, double lambda,
                                               const JostOptions& opts) {
    if (!(lambda > 0.0)) throw InvalidInput("scattering_coefficients: lambda must be > 0");
    const auto fp = jost(V, grid, lambda, JostSign::plus, opts);
    const auto fm = jost(V, grid, lambda, JostSign::minus, opts);
    const auto w = wronskian(fp, fm);
    if (std::abs(w.value) < 1e-12) throw AccuracyError("scattering_coefficients: degenerate Wronskian");

    ScatteringCoefficients sc;
    sc.lambda = lambda;
    sc.W = w.value;
    sc.wronskian_spread = w.spread;
    sc.T = -2.0 * kI * lambda / w.value;
    sc.T_matching = 1.0 / fp.far_a;
    sc.R = fp.far_b / fp.far_a;
    sc.truncation_estimate = std::max(fp.truncation_estimate, fm.truncation_estimate);
    return sc;
}

Grid scattering_grid(const PotentialSpec& V, double lambda_max, double edge_tolerance) {
    const double half = std::max(20.0, 1.1 * V.support_radius(edge_tolerance));
    double dx = 0.05;
    if (lambda_max > 0) dx = std::min(dx, 0.125 / lambda_max);
    const auto n = std::max<std::size_t>(16, next_power_of_two(static_cast<std::size_t>(std::ceil(2 * half / dx))));
    return Grid(V.center - half, V.center + half, n);
}

// ---------------------------------------------------------------------------
// Bound states

namespace {

struct Tridiagonal {
    std::vector<double> diag;
    double off;
};

Tridiagonal fd_hamiltonian(const std::vector<double>& potential, double dx) {
    Tridiagonal t{std::vector<double>(potential.size()), -0.5 / (dx * dx)};
    for (std::size_t j = 0; j < potential.size(); ++j) t.diag[j] = 1.0 / (dx * dx) + potential[j];
    return t;
}

// Number of eigenvalues strictly below sigma (Sturm sequence).
std::size_t count_below(const Tridiagonal& t, double sigma) {
    const double e2 = t.off * t.off;
    const double tiny = std::numeric_limits<double>::min() * 1e4;
    std::size_t count = 0;
    double q = t.diag[0] - sigma;
    for (std::size_t j = 0;;) {
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
        if (++j == t.diag.size()) break;
        q = t.diag[j] - sigma - e2 / q;
    }
    return count;
}

// Solve (T - sigma) x = b by the Thomas algorithm.
std::vector<double> solve_shifted(const Tridiagonal& t, double sigma, const std::vector<double>& b) {
    const auto n = b.size();
    std::vector<double> c(n), d(n);
    double denom = t.diag[0] - sigma;
    c[0] = t.off / denom;
    d[0] = b[0] / denom;
    for (std::size_t j = 1; j < n; ++j) {
        denom = t.diag[j] - sigma - t.off * c[j - 1];
        if (denom == 0.0) denom = 1e-300;
        c[j] = t.off / denom;
        d[j] = (b[j] - t.off * d[j - 1]) / denom;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) x[j] = d[j] - c[j] * x[j + 1];
    return x;
}

void normalize_positive_peak(std::vector<double>& v, double dx) {
    double sum = 0.0;
    std::size_t peak = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        sum += v[j] * v[j];
        if (std::abs(v[j]) > std::abs(v[peak])) peak = j;
    }
    const double scale = (v[peak] < 0 ? -1.0 : 1.0) / std::sqrt(sum * dx);
    for (auto& x : v) x *= scale;
}

double real_dot(std::span<const Complex> a, std::span<const Complex> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
    return s;
}

// Apply the spectral H - sigma in place of out.
class ShiftedHamiltonian {
public:
    ShiftedHamiltonian(const SampledPotential& V, double sigma)
        : V_(V), sigma_(sigma), fft_(V.grid.size()), half_k2_(V.grid.size()) {
        for (std::size_t j = 0; j < half_k2_.size(); ++j) half_k2_[j] = 0.5 * V.grid.k(j) * V.grid.k(j);
    }

    void apply(std::span<const Complex> in, std::span<Complex> out) {
        buf_.assign(in.begin(), in.end());
        fft_.forward(buf_);
        for (std::size_t j = 0; j < buf_.size(); ++j) buf_[j] *= half_k2_[j];
        fft_.inverse(buf_);
        for (std::size_t j = 0; j < buf_.size(); ++j) out[j] = buf_[j] + (V_.values[j] - sigma_) * in[j];
    }

    // Preconditioner (k^2/2 - sigma)^{-1}.
    void precondition(std::span<const Complex> in, std::span<Complex> out) {
        buf_.assign(in.begin(), in.end());
        fft_.forward(buf_);
        for (std::size_t j = 0; j < buf_.size(); ++j) buf_[j] /= half_k2_[j] - sigma_;
        fft_.inverse(buf_);
        std::copy(buf_.begin(), buf_.end(), out.begin());
    }

private:
    const SampledPotential& V_;
    double sigma_;
    FourierTransform fft_;
    std::vector<double> half_k2_;
    std::vector<Complex> buf_;
};

// Preconditioned CG for (H - sigma) x = b; returns false on loss of positive definiteness.
bool pcg_solve(ShiftedHamiltonian& A, std::span<const Complex> b, std::vector<Complex>& x, double rel_tol,
               int max_iter) {
    const auto n = b.size();
    x.assign(n, Complex{});
    std::vector<Complex> r(b.begin(), b.end()), z(n), p(n), Ap(n);
    A.precondition(r, z);
    p = z;
    double rz = real_dot(r, z);
    const double b_norm = std::sqrt(real_dot(b, b));
    for (int it = 0; it < max_iter; ++it) {
        A.apply(p, Ap);
        const double pAp = real_dot(p, Ap);
        if (!(pAp > 0.0)) return false;
        const double alpha = rz / pAp;
        for (std::size_t j = 0; j < n; ++j) {
            x[j] += alpha * p[j];
            r[j] -= alpha * Ap[j];
        }
        if (std::sqrt(real_dot(r, r)) <= rel_tol * b_norm) return true;
        A.precondition(r, z);
        const double rz_next = real_dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t j = 0; j < n; ++j) p[j] = z[j] + beta * p[j];
    }
    return true;
}

double residual_norm(const Field& phi, const SampledPotential& V, double energy) {
    Field r = apply_hamiltonian(phi, V);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= energy * phi[j];
    return l2_norm(r);
}

// Shifted inverse iteration on the spectral H, starting from the FD ground state.
void refine_ground_state(BoundState& state, const SampledPotential& V, double tol) {
    const double dx = V.grid.dx();
    double margin = std::max(1e-3, 0.02 * std::abs(state.energy));
    for (int attempt = 0; attempt < 6; ++attempt, margin *= 4.0) {
        const double sigma = state.energy - margin;
        ShiftedHamiltonian A(V, sigma);
        std::vector<Complex> phi(state.phi.values().begin(), state.phi.values().end()), next;
        bool spd = true;
        double energy = state.energy;
        double res = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 60 && res > 0.01 * tol; ++it) {
            if (!pcg_solve(A, phi, next, 1e-13, 1000)) {
                spd = false;
                break;
            }
            double norm = std::sqrt(dx * real_dot(next, next));
            for (auto& z : next) z = Complex(z.real() / norm, 0.0);
            phi.swap(next);
            Field f(V.grid, phi);
            const Field hf = apply_hamiltonian(f, V);
            energy = inner_product(hf, f).real();
            res = residual_norm(f, V, energy);
        }
        if (!spd) continue;
        std::vector<double> re(phi.size());
        for (std::size_t j = 0; j < phi.size(); ++j) re[j] = phi[j].real();
        normalize_positive_peak(re, dx);
        std::vector<Complex> values(re.begin(), re.end());
        state.phi = Field(V.grid, std::move(values));
        state.energy = energy;
        state.residual = residual_norm(state.phi, V, energy);
        return;
    }
    throw AccuracyError("bound_states: spectral refinement lost positive definiteness");
}

}  // namespace

std::vector<double> fd_negative_eigenvalues(const std::vector<double>& potential, double dx, double threshold) {
    const auto t = fd_hamiltonian(potential, dx);
    const double upper = -threshold;
    const std::size_t count = count_below(t, upper);
    std::vector<double> out;
    const double vmin = *std::min_element(potential.begin(), potential.end());
    for (std::size_t k = 0; k < count; ++k) {
        double lo = vmin - 1e-12, hi = upper;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (count_below(t, mid) > k ? hi : lo) = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

std::vector<double> fd_eigenvector(const std::vector<double>& potential, double dx, double energy) {
    const auto t = fd_hamiltonian(potential, dx);
    const auto n = potential.size();
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 + 0.3 * std::sin(0.7 * static_cast<double>(j));
    const double sigma = energy - 1e-10 * std::max(1.0, std::abs(energy));
    for (int it = 0; it < 4; ++it) {
        v = solve_shifted(t, sigma, v);
        normalize_positive_peak(v, dx);
    }
    return v;
}

std::vector<BoundState> bound_states(const PotentialSpec& V, const Grid& grid, const BoundStateOptions& opts) {
    const auto sampled = sample_potential(V, grid);
    const double dx = grid.dx();
    const auto energies = fd_negative_eigenvalues(sampled.values, dx, opts.negative_threshold);

    const Grid fine(grid.x_min(), grid.x_max(), 2 * grid.size());
    const auto fine_energies =
        fd_negative_eigenvalues(sample_potential(V, fine).values, fine.dx(), opts.negative_threshold);
    if (fine_energies.size() != energies.size())
        throw AccuracyError("bound_states: bound-state count changes under grid doubling");
    for (std::size_t k = 0; k < energies.size(); ++k) {
        if (std::abs(fine_energies[k] - energies[k]) > opts.refinement_tolerance) {
            std::ostringstream os;
            os << "bound_states: eigenvalue " << energies[k] << " shifts by "
               << std::abs(fine_energies[k] - energies[k]) << " under grid doubling";
            throw AccuracyError(os.str());
        }
    }

    std::vector<BoundState> out;
    for (const double e : energies) {
        const auto vec = fd_eigenvector(sampled.values, dx, e);
        BoundState st{e, Field(grid, std::vector<Complex>(vec.begin(), vec.end())), 0.0};
        st.residual = residual_norm(st.phi, sampled, e);
        out.push_back(std::move(st));
    }
    if (opts.spectral_refine && !out.empty()) {
        refine_ground_state(out.front(), sampled, opts.residual_tolerance);
        if (out.front().residual > opts.residual_tolerance) {
            std::ostringstream os;
            os << "bound_states: eigen-residual " << out.front().residual << " above "
               << opts.residual_tolerance;
            throw AccuracyError(os.str());
        }
    }
    return out;
}

Field apply_hamiltonian(const Field& f, const SampledPotential& V) {
    if (!(f.grid() == V.grid)) throw InvalidInput("apply_hamiltonian: grid mismatch");
    auto s = to_fourier(f);
    for (std::size_t j = 0; j < f.size(); ++j) s.coefficients[j] *= 0.5 * f.grid().k(j) * f.grid().k(j);
    Field out = from_fourier(s);
    for (std::size_t j = 0; j < f.size(); ++j) out[j] += V.values[j] * f[j];
    return out;
}

Projection project(const Field& f, const std::optional<BoundState>& bound_state) {
    if (!bound_state) return {Complex{}, f};
    const Complex a = inner_product(f, bound_state->phi);
    Field continuum = f;
    for (std::size_t j = 0; j < f.size(); ++j) continuum[j] -= a * bound_state->phi[j];
    return {a, std::move(continuum)};
}

}  // namespace nlsv
