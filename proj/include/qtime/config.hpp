#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtime/arrival.hpp"
#include "qtime/barrier.hpp"
#include "qtime/errors.hpp"

namespace qtime::cli {

inline constexpr const char* kToolName = "qtime";
inline constexpr const char* kToolVersion = "0.1.0";

/// Invalid command line or config entry; what() starts with the offending key.
class ConfigError : public InputError {
public:
    ConfigError(const std::string& key, const std::string& message)
        : InputError("--" + key + ": " + message), key_(key) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct Range {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;

    std::vector<double> values() const;
    bool operator==(const Range&) const = default;
};

struct MapFrom {
    double V0 = 0.0;
    double d = 0.0;
    double m = 0.0;
    double E = 0.0;

    bool operator==(const MapFrom&) const = default;
};

struct RunConfig {
    std::string command;
    double m = 1.0;

    std::optional<double> k0;
    std::optional<double> sigma_p;
    std::optional<double> x0;
    std::optional<double> L;
    std::optional<BarrierProfile> barrier;
    DetectorModel alpha = DetectorModel::flat();
    std::optional<double> t_min;
    std::optional<double> t_max;
    std::size_t n_t = 4096;
    std::size_t n_k = 2048;

    std::optional<double> k;
    std::optional<Range> k_range;  // --kmin --kmax --count
    std::string method = "phase";

    std::optional<double> V0;
    std::optional<Range> d_list;

    std::optional<std::vector<std::pair<double, double>>> stack;  // (width, eps)
    std::optional<MapFrom> map_from;
    std::optional<Range> omega_range;  // --omega-min --omega-max --count

    std::string out;  // empty or "-" = stdout
    unsigned threads = 0;

    bool operator==(const RunConfig&) const = default;
};

/// argv without the program name. Flags override --config file values.
RunConfig parse(const std::vector<std::string>& args);

/// Config-file text: key=value lines, '#' comments; when "# meta: " lines are
/// present (a previous run's CSV) only those are read.
RunConfig parse_config_text(const std::string& text);

/// key=value lines that parse_config_text maps back to the same RunConfig.
std::string emit(const RunConfig& config);

/// Executes a validated config; writes CSV to config.out (or `out`).
/// Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& diag);

/// Full entry point: parse + run with exit codes 0 / 2 (input) / 3 (numerical).
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& diag);

std::string usage();

// Value syntaxes shared with the CLI.
BarrierProfile parse_barrier(const std::string& text);
std::string format_barrier(const BarrierProfile& profile);
DetectorModel parse_detector(const std::string& text);
std::string format_detector(const DetectorModel& detector);

/// 12 significant digits, locale independent.
std::string format_number(double value);

} // namespace qtime::cli
