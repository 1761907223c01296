#pragma once

#include "annuli/metric.hpp"
#include "annuli/nitsche.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace annuli {

// All floating-point output goes through this: 12 significant digits,
// locale-independent, byte-stable across runs.
std::string format_double(double v);

// Minimal ordered JSON emitter; nlohmann reorders keys and controls float
// formatting itself, so reports are written by hand.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array(const std::string& key = {});
    JsonWriter& end_array();
    JsonWriter& field(const std::string& key, double v);
    JsonWriter& field(const std::string& key, int v);
    JsonWriter& field(const std::string& key, std::size_t v);
    JsonWriter& field(const std::string& key, bool v);
    JsonWriter& field(const std::string& key, const std::string& v);
    JsonWriter& element(double v);
    JsonWriter& element_pair(double a, double b);
    std::string str() const { return out_.str(); }

private:
    void comma();
    void key(const std::string& k);
    std::ostringstream out_;
    std::vector<bool> has_items_;
};

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    std::size_t columns_;
};

// Runtime settings shared by the CLI subcommands, merged from an optional
// JSON config file and command-line flags (flags win).
struct RunConfig {
    std::string metric_name;
    std::vector<double> metric_params;
    std::vector<std::pair<double, double>> metric_table;
    std::optional<double> tau, sigma, r;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::string format = "json";
    std::string out_path;
    unsigned seed = 12345;

    RadialMetric make_metric() const;
    AnnulusGeometry make_geometry() const;       // needs tau, sigma, r
    AnnulusGeometry make_target_geometry() const; // needs tau, sigma
};

// Parses the config file; unknown keys are rejected.
void load_config_file(const std::string& path, RunConfig& cfg);

// "name" or "name:p1,p2" shorthand for --metric
void parse_metric_spec(const std::string& spec, RunConfig& cfg);

void write_output(const RunConfig& cfg, const std::string& payload);

// Profile serialization: the solve-c JSON doubles as the profile file format.
std::string profile_to_json(const RunConfig& cfg, const NitscheProfile& p, double r_star,
                            bool degenerate);
NitscheProfile profile_from_json_file(const std::string& path);

} // namespace annuli
