// nlsv: command-line driver for the NLS-with-potential laboratory.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "nlsv/checks.hpp"
#include "nlsv/config.hpp"
#include "nlsv/errors.hpp"
#include "nlsv/manifest.hpp"
#include "nlsv/report.hpp"
#include "nlsv/svg_plot.hpp"

namespace {

using namespace nlsv;

enum Exit : int { ok = 0, invalid_input = 1, acceptance_failure = 2, breakdown = 3, invalid_run = 4 };

struct PotentialFlags {
    std::string kind = "zero";
    double q = 0.0, s = 3.0, sigma = 1.0, beta = 0.0, nu = 1.0, center = 0.0;

    void attach(CLI::App* app) {
        app->add_option("--kind", kind, "zero | algebraic | gaussian | sech2 | poschl_teller | delta");
        app->add_option("--q", q, "amplitude (algebraic, gaussian, delta)");
        app->add_option("--s", s, "algebraic decay exponent");
        app->add_option("--sigma", sigma, "gaussian width");
        app->add_option("--beta", beta, "sech2 depth");
        app->add_option("--nu", nu, "Poschl-Teller index");
        app->add_option("--center", center, "potential center");
    }

    Json to_json() const {
        return Json{{"kind", kind}, {"q", q}, {"s", s}, {"sigma", sigma}, {"beta", beta}, {"nu", nu}, {"center", center}};
    }

    PotentialSpec spec() const {
        if (kind == "delta") return PotentialSpec::delta_approximation(q, sigma > 0.05 ? 0.05 : sigma, center);
        return potential_from_json(to_json());
    }
};

/// --out beats NLSV_OUT_DIR, which beats the config value.
std::filesystem::path resolve_out_dir(const std::string& flag, const std::string& from_config) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("NLSV_OUT_DIR"); env && *env) return env;
    return from_config;
}

void write_text(RunManifest& m, const std::string& name, const std::string& text) {
    std::ofstream out(m.output(name));
    if (!out) throw InvalidInput("cannot write " + name);
    out << text;
}

std::string velocity_tag(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag, int jobs) {
    const Json raw = load_json_file(config_path);
    const auto config = experiment_config_from_json(raw);
    RunManifest manifest(resolve_out_dir(out_flag, config.out_dir), "simulate", raw);
    manifest.write_initial();
    try {
        const auto runs = run_velocities(config, config.velocities, jobs);
        Json summary{{"config_hash", manifest.config_hash()}, {"runs", Json::array()}};
        bool edge_ok = true;
        for (const auto& run : runs) {
            std::ostringstream csv;
            write_series_csv(csv, run.series);
            write_text(manifest, "series_v" + velocity_tag(run.v) + ".csv", csv.str());
            summary["runs"].push_back(to_json(run));
            edge_ok = edge_ok && !run.edge_violation;
            std::cout << "v=" << run.v << "  sup_err=" << run.sup_error << "  floor=" << run.floor_error
                      << "  steps=" << run.steps << (run.edge_violation ? "  EDGE-MASS VIOLATION" : "") << '\n';
        }
        write_text(manifest, "simulate.json", summary.dump(2) + "\n");
        manifest.set_criterion("edge_mass", edge_ok);
        const int code = edge_ok ? ok : invalid_run;
        if (!edge_ok) std::cerr << "run invalid: mass reached the domain edge band\n";
        manifest.finalize(edge_ok ? "ok" : "invalid_run", code);
        return code;
    } catch (...) {
        manifest.finalize("error", -1);
        throw;
    }
}

int cmd_study(const std::string& config_path, const std::string& out_flag, int jobs) {
    const Json raw = load_json_file(config_path);
    const auto config = experiment_config_from_json(raw);
    if (config.velocities.size() < 4) throw InvalidInput("study needs >= 4 velocities spanning at least a factor 8");
    RunManifest manifest(resolve_out_dir(out_flag, config.out_dir), "study", raw);
    manifest.write_initial();
    try {
        const auto result = scaling_study(config, jobs);
        for (const auto& run : result.runs) {
            std::ostringstream csv;
            write_series_csv(csv, run.series);
            write_text(manifest, "series_v" + velocity_tag(run.v) + ".csv", csv.str());
        }
        Json j = to_json(result);
        j["config_hash"] = manifest.config_hash();
        j["runs"] = Json::array();
        for (const auto& run : result.runs) j["runs"].push_back(to_json(run));
        write_text(manifest, "study.json", j.dump(2) + "\n");
        std::ostringstream ll;
        write_loglog_csv(ll, result);
        write_text(manifest, "loglog.csv", ll.str());

        PlotSeries measured{"E(v) measured", {}, {}, "#1f77b4", true, false};
        PlotSeries bound{"slope -(2 delta - 1)", {}, {}, "#d62728", false, true};
        for (const auto& p : result.points) {
            measured.x.push_back(p.v);
            measured.y.push_back(p.error);
            bound.x.push_back(p.v);
            bound.y.push_back(result.points.front().error * std::pow(p.v / result.points.front().v, result.bound_slope));
        }
        write_text(manifest, "scaling.svg", loglog_svg({measured, bound}, "sup-error vs velocity", "v", "E(v)"));

        for (const auto& p : result.points)
            std::cout << "v=" << p.v << "  E=" << p.error << "  floor=" << p.floor << '\n';
        std::cout << "slope=" << result.slope << "  bound_slope=" << result.bound_slope
                  << "  decreasing=" << result.strictly_decreasing << "  gates=" << result.gates_ok << "  "
                  << (result.pass ? "PASS" : "FAIL") << '\n';

        bool edge_ok = true;
        for (const auto& p : result.points) edge_ok = edge_ok && p.edge_ok;
        manifest.set_criterion("edge_mass", edge_ok);
        manifest.set_criterion("floor_gate", result.gates_ok);
        manifest.set_criterion("strictly_decreasing", result.strictly_decreasing);
        manifest.set_criterion("slope_bound", result.slope <= result.bound_slope + 0.1);
        const int code = !edge_ok ? invalid_run : result.pass ? ok : acceptance_failure;
        manifest.finalize(code == ok ? "pass" : code == invalid_run ? "invalid_run" : "fail", code);
        return code;
    } catch (...) {
        manifest.finalize("error", -1);
        throw;
    }
}

int cmd_spectral(const PotentialFlags& pf, double lmin, double lmax, int count, const std::string& out_flag) {
    const auto spec = pf.spec();
    const Json echo{{"potential", potential_to_json(spec)}, {"lambda_min", lmin}, {"lambda_max", lmax}, {"count", count}};
    RunManifest manifest(resolve_out_dir(out_flag, "out/spectral"), "spectral", echo);
    manifest.write_initial();
    if (count < 2) throw InvalidInput("--count must be >= 2");
    const auto report = spectral_report(spec, log_space(lmin, lmax, static_cast<std::size_t>(count)));
    std::ostringstream csv;
    write_spectral_csv(csv, report.table);
    write_text(manifest, "coefficients.csv", csv.str());
    write_text(manifest, "spectral_report.json", to_json(report).dump(2) + "\n");
    std::cout << to_json(report.admissibility).dump(2) << '\n'
              << "max unitarity defect " << report.max_unitarity_defect << ", max |T_W - T_match| "
              << report.max_consistency_defect << '\n';
    manifest.finalize("ok", ok);
    return ok;
}

int cmd_potential_report(const PotentialFlags& pf) {
    const auto spec = pf.spec();
    const Grid g = scattering_grid(spec, 1.0);
    const auto report = check_admissibility(spec, g);
    Json j{{"potential", potential_to_json(spec)}, {"description", spec.describe()}, {"admissibility", to_json(report)}};
    if (spec.is_delta_approximation()) j["note"] = "narrow Gaussian approximation of a delta potential";
    std::cout << j.dump(2) << '\n';
    return ok;
}

int cmd_check(const std::string& fault) {
    CheckOptions opts;
    if (fault == "energy") {
        opts.inject_energy_fault = true;
    } else if (!fault.empty()) {
        throw InvalidInput("unknown fault \"" + fault + "\" (known: energy)");
    }
    const auto results = run_invariant_suite(opts);
    std::cout << format_check_table(results);
    for (const auto& r : results)
        if (!r.passed) return acceptance_failure;
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral laboratory for the cubic NLS with an external potential"};
    app.require_subcommand(1);

    std::string config_path, out_dir, fault;
    int jobs = 1;
    PotentialFlags pf;
    double lmin = 0.5, lmax = 20.0;
    int count = 50;

    auto* simulate = app.add_subcommand("simulate", "transmission runs for every velocity in a config");
    simulate->add_option("config", config_path, "JSON run config")->required();
    simulate->add_option("--out", out_dir, "output directory (overrides NLSV_OUT_DIR and the config)");
    simulate->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

    auto* study = app.add_subcommand("study", "velocity sweep and log-log error slope");
    study->add_option("config", config_path, "JSON study config")->required();
    study->add_option("--out", out_dir, "output directory (overrides NLSV_OUT_DIR and the config)");
    study->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

    auto* spectral = app.add_subcommand("spectral", "transmission/reflection table and spectral report");
    pf.attach(spectral);
    spectral->add_option("--lambda-min", lmin, "smallest frequency");
    spectral->add_option("--lambda-max", lmax, "largest frequency");
    spectral->add_option("--count", count, "log-spaced frequencies");
    spectral->add_option("--out", out_dir, "output directory (overrides NLSV_OUT_DIR)");

    auto* check = app.add_subcommand("check", "invariant suite");
    check->add_option("--inject-fault", fault, "energy: use the 1/2 |V u|^2 energy variant");

    auto* preport = app.add_subcommand("potential-report", "admissibility report as JSON");
    pf.attach(preport);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid_input;
    }

    try {
        if (*simulate) return cmd_simulate(config_path, out_dir, jobs);
        if (*study) return cmd_study(config_path, out_dir, jobs);
        if (*spectral) return cmd_spectral(pf, lmin, lmax, count, out_dir);
        if (*check) return cmd_check(fault);
        if (*preport) return cmd_potential_report(pf);
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return invalid_input;
    } catch (const NumericalBreakdown& e) {
        std::cerr << "numerical breakdown";
        if (e.step() >= 0) std::cerr << " at step " << e.step();
        std::cerr << ": " << e.what() << '\n';
        return breakdown;
    } catch (const InvalidRun& e) {
        std::cerr << "invalid run: " << e.what() << '\n';
        return invalid_run;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << '\n';
        return breakdown;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return breakdown;
    }
    return invalid_input;
}
