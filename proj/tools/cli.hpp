#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cutofflab/cutofflab.hpp"

namespace cutofflab::cli {

struct Config {
    ModelSpec model;
    nlohmann::json model_echo;
    std::uint64_t seed = 0;
    std::vector<double> epsilons;
    std::optional<int> start_state;
    int dense_cap = kDenseCap;
};

// Default precisions for reports: 0.4, 0.25, 0.1 and 1/(2e).
std::vector<double> default_epsilons();

Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);

enum class Status { pass, fail, skipped };

struct CheckResult {
    std::string name;
    Status status = Status::skipped;
    double slack = 0.0;
};

const char* to_string(Status s);

// Everything the report and the verification battery share.
struct Analysis {
    Config config;
    Model model;
    bool weakly_reversible = false;
    std::optional<MetricData> metric;
    SpectralSummary spectral;
    std::optional<CurvatureReport> curvature;
    ConstantBracket alpha;
    std::optional<ConstantBracket> beta;  // reversible chains only
    StartSet starts;
    std::vector<CutoffDiagnostics> mixing;
};

Analysis analyze(const Config& config);

std::vector<CheckResult> run_checks(const Analysis& a);

nlohmann::ordered_json report_json(const Analysis& a, const std::vector<CheckResult>& checks);

// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 resource or budget error.
int exit_code(const Error& e);

int cmd_analyze(const std::string& config_path, const std::string& out_path);
int cmd_profile(const std::string& config_path, double t0, double t1, int steps, const std::string& out_csv);
int cmd_sweep(const std::string& family, const std::string& sizes, double epsilon, const std::string& out_csv);
int cmd_verify(const std::string& config_path, std::ostream& out);

}  // namespace cutofflab::cli
