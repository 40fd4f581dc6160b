#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "curot/linalg.hpp"
#include "curot/ot.hpp"
#include "curot/survival.hpp"

namespace curot::io {

using json = nlohmann::json;

// Shortest-lossless float text: 17 significant digits, round-trips exactly.
std::string format_double(double v);

// FNV-1a 64-bit over raw bytes; used to fingerprint input files in reports.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);

// Whole-file atomic write: temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& contents);

// "0x" + hex64 of the file's bytes.
std::string file_digest(const std::string& path);

// Headerless CSV of doubles, rectangular. Errors carry 1-based row/column.
Matrix read_matrix_csv(const std::string& path);
std::string matrix_to_csv(const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);

// Survival tables use a fixed header: time,event,risk.
surv::SurvivalTable read_survival_csv(const std::string& path);
std::string survival_to_csv(const surv::SurvivalTable& t);
void write_survival_csv(const std::string& path, const surv::SurvivalTable& t);

// Survival-curve CSV with header time,survival,at_risk,events.
std::string km_to_csv(const surv::KMCurve& curve);
void write_km_csv(const std::string& path, const surv::KMCurve& curve);
surv::KMCurve read_km_csv(const std::string& path);

// One merged parameter bag for every subcommand. Built-in values mirror the
// reference experimental configuration; a JSON config file overrides them,
// and command-line flags override the file.
struct RunConfig {
    double epsilon = 0.05;
    double gamma = 0.1;
    double iota = 1e9;
    long max_iters = 1000;
    double tol = 1e-9;
    bool log_domain = true;
    double tau = 0.5;
    double beta = 0.5;
    double rho = 1.0;
    double tau_r = 0.1;
    double lambda_wsi = 1.0;
    double lambda_gen = 1.0;
    double lambda_contrast = 0.5;
    double lambda_inst = 0.5;
    bool rescale_plan = true;
    std::uint64_t seed = 0;
};

json to_json(const RunConfig& c);

// Overlay j onto c; unknown keys are an error naming the offending key.
void apply_json(RunConfig& c, const json& j, const std::string& source);

// Defaults, then the config file named by the flag, or failing that by the
// CUROT_CONFIG environment variable, if either is set.
RunConfig load_run_config(const std::optional<std::string>& config_path);

ot::SolverConfig solver_part(const RunConfig& c);

}  // namespace curot::io
