#include "nlsv/config.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "nlsv/errors.hpp"

namespace nlsv {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InvalidInput(where + ": expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw InvalidInput(where + ": unknown key \"" + key + "\"");
}

double number(const Json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw InvalidInput("\"" + key + "\" must be a number");
    return j[key].get<double>();
}

}  // namespace

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput("config " + path.string() + ": " + e.what());
    }
}

PotentialSpec potential_from_json(const Json& j) {
    reject_unknown(j, {"kind", "q", "s", "sigma", "beta", "nu", "center"}, "potential");
    if (!j.contains("kind") || !j["kind"].is_string()) throw InvalidInput("potential: \"kind\" string required");
    PotentialSpec spec;
    spec.kind = potential_kind_from_string(j["kind"].get<std::string>());
    spec.q = number(j, "q", spec.q);
    spec.s = number(j, "s", spec.s);
    spec.sigma = number(j, "sigma", spec.sigma);
    spec.beta = number(j, "beta", spec.beta);
    spec.nu = number(j, "nu", spec.nu);
    spec.center = number(j, "center", spec.center);
    spec.validate();
    return spec;
}

Json potential_to_json(const PotentialSpec& spec) {
    Json j{{"kind", to_string(spec.kind)}, {"center", spec.center}};
    switch (spec.kind) {
        case PotentialKind::zero: break;
        case PotentialKind::algebraic: j["q"] = spec.q; j["s"] = spec.s; break;
        case PotentialKind::gaussian: j["q"] = spec.q; j["sigma"] = spec.sigma; break;
        case PotentialKind::poschl_teller: j["nu"] = spec.nu; break;
        case PotentialKind::sech2_scaled: j["beta"] = spec.beta; break;
    }
    return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
    reject_unknown(j,
                   {"potential", "delta", "velocities", "x0_rule", "mu", "grid", "dt_rule", "observe_interval",
                    "override_admissibility", "out_dir"},
                   "config");
    ExperimentConfig c;
    if (!j.contains("potential")) throw InvalidInput("config: \"potential\" required");
    c.potential = potential_from_json(j["potential"]);
    if (!j.contains("delta")) throw InvalidInput("config: \"delta\" required");
    c.delta = number(j, "delta", c.delta);
    if (!j.contains("velocities") || !j["velocities"].is_array() || j["velocities"].empty())
        throw InvalidInput("config: \"velocities\" must be a non-empty array");
    for (const auto& v : j["velocities"]) {
        if (!v.is_number()) throw InvalidInput("config: velocities must be numbers");
        c.velocities.push_back(v.get<double>());
    }
    if (j.contains("x0_rule")) {
        const auto& r = j["x0_rule"];
        if (r.is_number()) {
            c.x0_factor = r.get<double>();
        } else {
            reject_unknown(r, {"factor"}, "x0_rule");
            c.x0_factor = number(r, "factor", c.x0_factor);
        }
    }
    c.mu = number(j, "mu", c.mu);
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        reject_unknown(g, {"resolution_factor", "margin", "potential_halfwidth", "min_n"}, "grid");
        c.grid.resolution_factor = number(g, "resolution_factor", c.grid.resolution_factor);
        c.grid.margin = number(g, "margin", c.grid.margin);
        c.grid.potential_halfwidth = number(g, "potential_halfwidth", c.grid.potential_halfwidth);
        const double min_n = number(g, "min_n", static_cast<double>(c.grid.min_n));
        if (!(min_n >= 16) || !is_power_of_two(static_cast<std::size_t>(min_n)))
            throw InvalidInput("grid.min_n must be a power of two >= 16");
        c.grid.min_n = static_cast<std::size_t>(min_n);
        if (c.grid.resolution_factor < 4.0)
            throw InvalidInput("grid.resolution_factor below 4 violates k_max >= 4 (v + 3 mu)");
    }
    if (j.contains("dt_rule")) {
        const auto& d = j["dt_rule"];
        reject_unknown(d, {"phase_cap", "refine", "dt"}, "dt_rule");
        c.dt_rule.phase_cap = number(d, "phase_cap", c.dt_rule.phase_cap);
        c.dt_rule.refine = number(d, "refine", c.dt_rule.refine);
        if (d.contains("dt")) c.dt_rule.dt = number(d, "dt", 0.0);
        if (c.dt_rule.phase_cap > 0.1)
            throw InvalidInput("dt_rule.phase_cap above 0.1 rad per step is not allowed");
    }
    c.observe_interval = number(j, "observe_interval", c.observe_interval);
    if (j.contains("override_admissibility")) {
        if (!j["override_admissibility"].is_boolean()) throw InvalidInput("override_admissibility must be a boolean");
        c.override_admissibility = j["override_admissibility"].get<bool>();
    }
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) throw InvalidInput("out_dir must be a string");
        c.out_dir = j["out_dir"].get<std::string>();
    }
    c.validate();
    if (c.dt_rule.dt) {
        if (!(*c.dt_rule.dt > 0.0)) throw InvalidInput("dt_rule.dt must be > 0");
        for (double v : c.velocities) check_time_step(*c.dt_rule.dt, v, c.mu, c.potential.sup_norm(), c.dt_rule.phase_cap);
    }
    return c;
}

Json experiment_config_to_json(const ExperimentConfig& c) {
    Json j{{"potential", potential_to_json(c.potential)},
           {"delta", c.delta},
           {"velocities", c.velocities},
           {"x0_rule", {{"factor", c.x0_factor}}},
           {"mu", c.mu},
           {"grid",
            {{"resolution_factor", c.grid.resolution_factor},
             {"margin", c.grid.margin},
             {"potential_halfwidth", c.grid.potential_halfwidth},
             {"min_n", c.grid.min_n}}},
           {"dt_rule", {{"phase_cap", c.dt_rule.phase_cap}, {"refine", c.dt_rule.refine}}},
           {"observe_interval", c.observe_interval},
           {"override_admissibility", c.override_admissibility},
           {"out_dir", c.out_dir}};
    if (c.dt_rule.dt) j["dt_rule"]["dt"] = *c.dt_rule.dt;
    return j;
}

Json canonicalize(const Json& j) {
    if (j.is_object()) {
        Json out = Json::object();
        for (const auto& [key, value] : j.items()) out[key] = canonicalize(value);
        return out;
    }
    if (j.is_array()) {
        Json out = Json::array();
        for (const auto& value : j) out.push_back(canonicalize(value));
        return out;
    }
    if (j.is_number()) return Json(j.get<double>());
    return j;
}

std::string config_hash(const Json& j) {
    const std::string text = canonicalize(j).dump();
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("config_hash: SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

}  // namespace nlsv
