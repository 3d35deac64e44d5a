#pragma once

// Plain-text key-value configuration files with [constants], [particle] and
// [stage.N] sections. Values are SI. Stage fields left out of the file are
// tracked so the loop solver can tell solved quantities from user inputs.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgsim/model.hpp"

namespace sgsim {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct StagePresence {
    bool kind = false;
    bool B0 = false;
    bool eta_linear = false;
    bool eta_nonlinear = false;
    bool duration = false;
    bool spin = false;
};

struct ConfigDocument {
    ExperimentConfig config;
    std::vector<StagePresence> presence;  // parallel to config.stages
};

/// Parses a config file, allowing stage fields to be absent (left at zero).
ConfigDocument load_config_document(const std::filesystem::path& path);
ConfigDocument parse_config(std::istream& in, const std::string& origin = "<stream>");

/// Parses and requires every field a stage's kind needs; throws ConfigError
/// listing what is missing.
ExperimentConfig load_config(const std::filesystem::path& path);

void save_config(std::ostream& out, const ExperimentConfig& cfg);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

std::string to_string(StageKind k);
std::string to_string(SpinState s);

/// FNV-1a over raw bytes; used to stamp CSV outputs with the config identity.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t hash_file(const std::filesystem::path& path);

}  // namespace sgsim
