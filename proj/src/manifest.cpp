#include "nlsv/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>

#include "nlsv/errors.hpp"

namespace nlsv {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest::RunManifest(std::filesystem::path dir, std::string command, Json config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(config)), hash_(nlsv::config_hash(config_)) {}

std::filesystem::path RunManifest::output(const std::string& name) {
    if (std::find(outputs_.begin(), outputs_.end(), name) == outputs_.end()) outputs_.push_back(name);
    return dir_ / name;
}

void RunManifest::set_criterion(const std::string& name, bool passed) { criteria_[name] = passed; }

void RunManifest::write_initial() {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw InvalidInput("cannot create output directory " + dir_.string() + ": " + ec.message());
    started_ = utc_timestamp();
    write();
}

void RunManifest::finalize(const std::string& status, int exit_code) {
    status_ = status;
    exit_code_ = exit_code;
    finished_ = utc_timestamp();
    write();
}

Json RunManifest::to_json() const {
    return Json{{"command", command_},
                {"tool_version", kToolVersion},
                {"config_hash", hash_},
                {"config", config_},
                {"started_at", started_},
                {"finished_at", finished_.empty() ? Json(nullptr) : Json(finished_)},
                {"status", status_},
                {"exit_code", exit_code_},
                {"outputs", outputs_},
                {"criteria", criteria_}};
}

void RunManifest::write() const {
    std::ofstream out(dir_ / "manifest.json");
    if (!out) throw InvalidInput("cannot write manifest in " + dir_.string());
    out << to_json().dump(2) << '\n';
}

}  // namespace nlsv
