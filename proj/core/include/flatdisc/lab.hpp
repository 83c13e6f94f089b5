#pragma once

#include "flatdisc/bodies.hpp"
#include "flatdisc/spectral.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace flatdisc {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, std::string key, const std::string& msg);
    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

struct ConfigValue {
    std::variant<double, std::string, bool, std::vector<double>> value;
    int line = 0;
};

struct ExperimentConfig {
    std::string name;        // table name
    std::string experiment;  // exponent_scan, mainterm_residual, ...
    int line = 0;
    std::map<std::string, ConfigValue> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    double number(const std::string& key, double fallback) const;
    double number(const std::string& key) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
    std::uint64_t seed() const;
};

// Tables become experiments; validates keys per experiment kind.
std::vector<ExperimentConfig> parse_config(const std::string& text);
std::vector<ExperimentConfig> load_config(const std::string& path);

struct BodySpec {
    std::string kind = "disk";
    double gamma = 2.0;
    std::optional<double> rotate;             // radians
    bool golden = false;                      // flat normal along (1, golden ratio)
    std::optional<RationalAngle> rotate_pq;
};

BodySpec body_spec_from(const ExperimentConfig& cfg);
Body2D build_body(const BodySpec& spec);
std::string body_label(const BodySpec& spec);
// Rotation taking the normal (0, 1) to a direction of slope (1 + sqrt 5) / 2.
double golden_rotation_angle();

// Log grid, rounded to integers when requested (duplicates are an error).
std::vector<double> r_grid(const ExperimentConfig& cfg);

struct SeriesPoint {
    double R = 0.0;
    double value = 0.0;
    double std_error = 0.0;
};

struct Series {
    std::string label;     // written to the CSV experiment column
    std::string body;
    double gamma = 2.0;
    double p = 2.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<SeriesPoint> points;
    std::optional<ScalingFit> fit;
};

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<=", ">=", "within"
    double target = 0.0;   // for "within": |value - target| <= threshold
    bool pass = false;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<Series> series;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> timings;  // stage, seconds
    bool pass = false;
};

struct RunOptions {
    unsigned threads = 0;
};

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

std::string report_csv(const RunReport& rep);
std::string report_json(const RunReport& rep);
// Writes <prefix>.csv and <prefix>.json, creating parent directories.
void write_report(const RunReport& rep, const std::string& prefix);

struct CsvRow {
    std::string experiment, body;
    double gamma = 0.0, R = 0.0, p = 0.0, value = 0.0, std_error = 0.0;
    std::size_t M = 0;
    std::uint64_t seed = 0;
};

std::vector<CsvRow> parse_csv(const std::string& text);
// Same least squares as decay_fit on (R, value).
ScalingFit fit_scaling(const std::vector<CsvRow>& rows, std::optional<Interval> window = std::nullopt);

struct SeriesRefit {
    std::string experiment, body;
    double gamma = 0.0, p = 0.0;
    ScalingFit fit;
};

// Groups rows by (experiment, body, gamma, p) in first-appearance order.
std::vector<SeriesRefit> refit_csv(const std::string& text, std::optional<Interval> window = std::nullopt);

std::string format_double(double v);  // 17 significant digits

}  // namespace flatdisc
