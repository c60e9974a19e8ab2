#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nlsv/config.hpp"

namespace nlsv {

inline constexpr const char* kToolVersion = "0.3.0";

/// manifest.json in the run directory: config hash and echo, tool version,
/// timestamps, output inventory and per-criterion flags. Written when the run
/// starts and rewritten by finalize().
class RunManifest {
public:
    RunManifest(std::filesystem::path dir, std::string command, Json config);

    const std::string& config_hash() const noexcept { return hash_; }
    const std::filesystem::path& dir() const noexcept { return dir_; }

    /// Registers `name` in the inventory and returns its full path.
    std::filesystem::path output(const std::string& name);
    void set_criterion(const std::string& name, bool passed);

    void write_initial();
    void finalize(const std::string& status, int exit_code);

    Json to_json() const;

private:
    void write() const;

    std::filesystem::path dir_;
    std::string command_;
    Json config_;
    std::string hash_;
    std::string started_;
    std::string finished_;
    std::string status_ = "running";
    int exit_code_ = -1;
    std::vector<std::string> outputs_;
    std::map<std::string, bool> criteria_;
};

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace nlsv
