#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fieldroad/fronts.hpp"
#include "fieldroad/simulator.hpp"

namespace fieldroad {

// Configuration problem; message names the offending key or line.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value store with dotted section names, e.g. "params.d = 1.0".
/// Lines starting with '#' are comments. Values keep their literal text;
/// typed access happens at read time.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_number(const std::string& key) const;
    double get_number(const std::string& key, double dflt) const;
    int get_int(const std::string& key, int dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;
    // Comma-separated list of numbers.
    std::vector<double> get_list(const std::string& key) const;

    // Sorted "key = value" emission; parse(normalized()) round-trips.
    std::string normalized() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

enum class ModelKind { Invasion, SirtIntegrated, SirtTransport };
enum class AnalysisKind { Speed, Steady };
enum class FieldFormat { Csv, Binary, None };

struct SweepAxis {
    std::string key;
    std::vector<double> values;
};

/// Fully validated run description assembled from a Config.
struct RunConfig {
    explicit RunConfig(ModelParams p) : params(std::move(p)) {}

    ModelKind model = ModelKind::Invasion;
    AnalysisKind analysis = AnalysisKind::Speed;
    ModelParams params;
    GridSpec grid{};
    BumpSpec initial;
    std::vector<double> probe_levels;
    std::vector<double> probe_heights;
    double t_end = 0.0;
    double snapshot_every = 1.0;
    double fit_window = 0.4;
    double steady_tol = 1e-8;
    FieldFormat field_format = FieldFormat::Csv;
    std::string out_dir;
    std::vector<SweepAxis> axes;
    bool sweep_simulate = false;
    // Tolerances applied under --check.
    double check_speed_tol = 0.10;
    double check_decay_tol = 0.10;
    double check_plateau_tol = 0.05;

    // Reduced-solver inputs (cmd_reduced); optional blocks.
    std::optional<std::vector<double>> reduced_invasion;  // mu_over_f, d, fprime0, nu
    std::optional<std::vector<double>> reduced_sirt;      // D_nd, Lambda, R0, mu_bar, nu_bar

    static RunConfig load(const Config& c);
};

struct CliOptions {
    std::string out_dir;   // overrides config / env
    bool check = false;
    int jobs = 1;
};

// Exit codes shared by the commands: 0 ok, 2 config error, 3 numerical
// failure, 4 tolerance breach under --check.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;
inline constexpr int exit_check_failed = 4;

int cmd_speed(const RunConfig& rc, const CliOptions& opt, std::ostream& out);
int cmd_dstar(const RunConfig& rc, const CliOptions& opt, std::ostream& out);
int cmd_decay(const RunConfig& rc, const CliOptions& opt, std::ostream& out);
int cmd_transport(const RunConfig& rc, const CliOptions& opt, std::ostream& out);
int cmd_reduced(const RunConfig& rc, const CliOptions& opt, std::ostream& out);
int cmd_simulate(const RunConfig& rc, const CliOptions& opt, std::ostream& out);
int cmd_sweep(const Config& base, const CliOptions& opt, std::ostream& out);

}  // namespace fieldroad
