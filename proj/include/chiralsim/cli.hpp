#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chiralsim/error.hpp"
#include "chiralsim/evolution.hpp"
#include "chiralsim/protocol.hpp"
#include "chiralsim/robustness.hpp"

namespace chiralsim::cli {

enum ExitCode : int { Ok = 0, ConfigFailure = 2, NumericalFailure = 3, IoFailure = 4 };

class ConfigError : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

/// Environment variable naming the default output directory.
inline constexpr const char* output_dir_env = "CHIRALSIM_OUTPUT_DIR";

struct RunConfig
{
    ProtocolSpec spec;
    ErrorModel errors;
    std::optional<SweepGrid> grid;
    std::optional<std::string> csv_path;
    std::optional<std::string> json_path;
    unsigned threads = 0;
};

struct EvolveConfig
{
    TimeDependentGenerator generator;
    Vector3c initial_state;
    Engine engine = Engine::Piecewise;
    double step = 0.0;
    std::vector<CollapseChannel> decay;
};

/// Parse a run document (JSON, comments allowed). Unknown keys throw ConfigError naming the key.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

EvolveConfig parse_evolve_config(const nlohmann::json& doc);
EvolveConfig load_evolve_config(const std::filesystem::path& path);

nlohmann::json read_document(const std::filesystem::path& path);

/// Relative paths resolve against $CHIRALSIM_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& path);

std::string format_double(double v);

std::string csv_header();
std::string csv_row(const SweepRecord& rec);
std::string sweep_csv(const std::vector<SweepRecord>& records);
nlohmann::json sweep_json(const std::vector<SweepRecord>& records);
nlohmann::json protocol_json(const DiscriminationReport& report);

/// Write bytes to path, throwing IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace chiralsim::cli
