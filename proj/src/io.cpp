#include "annuli/io.hpp"
#include "annuli/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace annuli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

JsonWriter& JsonWriter::begin_object() {
    comma();
    out_ << "{";
    has_items_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ << "}";
    has_items_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& k) {
    if (!k.empty())
        key(k);
    else
        comma();
    out_ << "[";
    has_items_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ << "]";
    has_items_.pop_back();
    return *this;
}

void JsonWriter::comma() {
    if (!has_items_.empty()) {
        if (has_items_.back()) out_ << ",";
        has_items_.back() = true;
    }
}

void JsonWriter::key(const std::string& k) {
    comma();
    out_ << "\"" << k << "\":";
}

JsonWriter& JsonWriter::field(const std::string& k, double v) {
    key(k);
    out_ << format_double(v);
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, int v) {
    key(k);
    out_ << v;
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, std::size_t v) {
    key(k);
    out_ << v;
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, bool v) {
    key(k);
    out_ << (v ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, const std::string& v) {
    key(k);
    out_ << "\"" << v << "\"";
    return *this;
}

JsonWriter& JsonWriter::element(double v) {
    comma();
    out_ << format_double(v);
    return *this;
}

JsonWriter& JsonWriter::element_pair(double a, double b) {
    comma();
    out_ << "[" << format_double(a) << "," << format_double(b) << "]";
    return *this;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ",";
        out_ << header[i];
    }
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw UsageError("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ",";
        out_ << format_double(values[i]);
    }
    out_ << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    if (values.size() != columns_) throw UsageError("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ",";
        out_ << values[i];
    }
    out_ << "\n";
}

RadialMetric RunConfig::make_metric() const {
    if (!metric_table.empty()) return table_metric(metric_table);
    if (metric_name.empty()) throw UsageError("no metric given; use --metric or a config file");
    return builtin_metric(metric_name, metric_params);
}

AnnulusGeometry RunConfig::make_geometry() const {
    if (!tau || !sigma || !r) throw UsageError("geometry requires --tau, --sigma and --r");
    AnnulusGeometry g{*tau, *sigma, *r};
    g.validate();
    return g;
}

AnnulusGeometry RunConfig::make_target_geometry() const {
    if (!tau || !sigma) throw UsageError("geometry requires --tau and --sigma");
    AnnulusGeometry g{*tau, *sigma, 0.5};
    g.validate_target();
    return g;
}

void parse_metric_spec(const std::string& spec, RunConfig& cfg) {
    const auto colon = spec.find(':');
    cfg.metric_name = spec.substr(0, colon);
    cfg.metric_params.clear();
    if (colon != std::string::npos) {
        std::istringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            try {
                cfg.metric_params.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw UsageError("bad metric parameter '" + item + "'");
            }
        }
    }
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw UsageError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config root must be a JSON object");

    for (const auto& [key, val] : j.items()) {
        if (key == "metric") {
            if (!val.is_object()) throw UsageError("config: 'metric' must be an object");
            for (const auto& [mk, mv] : val.items()) {
                if (mk == "name")
                    cfg.metric_name = mv.get<std::string>();
                else if (mk == "params")
                    cfg.metric_params = mv.get<std::vector<double>>();
                else if (mk == "table") {
                    cfg.metric_table.clear();
                    for (const auto& row : mv) {
                        if (!row.is_array() || row.size() != 2)
                            throw UsageError("config: metric table rows must be [s, rho]");
                        cfg.metric_table.emplace_back(row[0].get<double>(), row[1].get<double>());
                    }
                } else {
                    throw UsageError("config: unknown metric key '" + mk + "'");
                }
            }
        } else if (key == "tau") {
            cfg.tau = val.get<double>();
        } else if (key == "sigma") {
            cfg.sigma = val.get<double>();
        } else if (key == "r") {
            cfg.r = val.get<double>();
        } else if (key == "rel_tol") {
            cfg.rel_tol = val.get<double>();
        } else if (key == "abs_tol") {
            cfg.abs_tol = val.get<double>();
        } else if (key == "format") {
            cfg.format = val.get<std::string>();
        } else if (key == "seed") {
            cfg.seed = val.get<unsigned>();
        } else {
            throw UsageError("config: unknown key '" + key + "'");
        }
    }
}

void write_output(const RunConfig& cfg, const std::string& payload) {
    if (cfg.out_path.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) throw UsageError("cannot open output file '" + cfg.out_path + "'");
        out << payload;
        if (!payload.empty() && payload.back() != '\n') out << "\n";
    }
}

std::string profile_to_json(const RunConfig& cfg, const NitscheProfile& p, double r_star,
                            bool degenerate) {
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("metric", p.metric().name);
    if (!cfg.metric_params.empty()) {
        w.begin_array("metric_params");
        for (double v : cfg.metric_params) w.element(v);
        w.end_array();
    }
    w.field("tau", p.tau());
    w.field("sigma", p.sigma());
    w.field("c", p.c());
    w.field("is_critical", p.is_critical());
    w.field("r_star", r_star);
    w.field("degenerate", degenerate);
    w.field("r_achieved", p.r_achieved());
    w.field("err_est", p.quad_err() + p.interp_err());
    w.begin_array("nodes");
    for (const auto& [s, phi] : p.nodes()) w.element_pair(s, phi);
    w.end_array();
    w.end_object();
    return w.str();
}

NitscheProfile profile_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open profile file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw UsageError(std::string("profile parse error: ") + e.what());
    }
    try {
        std::vector<double> params;
        if (j.contains("metric_params")) params = j["metric_params"].get<std::vector<double>>();
        const RadialMetric m = builtin_metric(j.at("metric").get<std::string>(), params);
        std::vector<std::pair<double, double>> nodes;
        for (const auto& row : j.at("nodes"))
            nodes.emplace_back(row[0].get<double>(), row[1].get<double>());
        return NitscheProfile::from_nodes(m, j.at("tau").get<double>(), j.at("sigma").get<double>(),
                                          j.at("c").get<double>(), j.at("is_critical").get<bool>(),
                                          nodes);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("profile file missing fields: ") + e.what());
    }
}

} // namespace annuli
