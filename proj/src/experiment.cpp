#include "fractalcomp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fractalcomp/channel.hpp"

namespace fractalcomp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = 3.141592653589793238462643383279502884;
const std::vector<double> kTableGrid = {-22.0, -28.0, -32.0, -35.0, -37.0, -39.0};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::string num(double v) { return fmt("%.17g", v); }      // full round-trip precision
std::string label(double v) { return fmt("%g", v); }       // sweep labels

// ---------------------------------------------------------------- resolve

bool is_known_metric(const std::string& m) {
    return m == "rate_distance" || m == "rate_power" || m == "coop_count" ||
           m == "ue_per_sbs" || m == "eta";
}

std::vector<std::string> metrics_of(const ExperimentSpec& spec) {
    if (spec.name == "fig2") return {"coop_count", "ue_per_sbs"};
    if (spec.name == "fig3") return {"rate_distance"};
    if (spec.name == "fig4") return {"rate_power"};
    if (spec.name == "fig5") return {"eta"};
    if (spec.name == "table1") return {"rate_a", "rate_b", "gain"};
    return {spec.metric};
}

}  // namespace

void resolve(ExperimentSpec& spec) {
    static const std::vector<std::string> names = {"fig2", "fig3", "fig4",
                                                   "fig5", "table1", "custom"};
    if (std::find(names.begin(), names.end(), spec.name) == names.end())
        throw std::invalid_argument("unknown experiment name: " + spec.name);
    if (!spec.engine_mc && !spec.engine_analytic)
        throw std::invalid_argument("at least one engine must be enabled");

    if (spec.name == "fig2") {
        if (spec.t_dbm.empty()) spec.t_dbm = kTableGrid;
        if (spec.c_list.empty()) spec.c_list = {100.0, 50.0};
    } else if (spec.name == "fig3") {
        if (spec.k_list.empty()) spec.k_list = {1, 2, 3, 4, 5, 6};
        if (spec.c_list.empty()) spec.c_list = {100.0, 20.0};
    } else if (spec.name == "fig4") {
        if (spec.t_dbm.empty()) spec.t_dbm = kTableGrid;
        if (spec.c_list.empty()) spec.c_list = {100.0, 50.0, 20.0};
    } else if (spec.name == "fig5") {
        if (spec.t_dbm.empty())
            for (double t = -40.0; t <= -20.0 + 1e-9; t += 2.0) spec.t_dbm.push_back(t);
        if (spec.c_list.empty()) spec.c_list = {100.0, 50.0};
    } else if (spec.name == "table1") {
        if (spec.k_list.empty()) spec.k_list = {1, 2, 3, 4, 5, 6};
        if (spec.t_dbm.empty()) spec.t_dbm = kTableGrid;
        if (spec.k_list.size() != spec.t_dbm.size())
            throw std::invalid_argument("table1 pairs k_list with t_dbm; lengths must match");
    } else {
        if (!is_known_metric(spec.metric))
            throw std::invalid_argument("unknown metric: " + spec.metric);
    }

    const bool wants_k = (spec.name == "fig3") ||
                         (spec.name == "custom" && spec.metric == "rate_distance");
    if (wants_k && spec.k_list.empty()) throw std::invalid_argument("empty sweep: k_list");
    if (!wants_k && spec.t_dbm.empty()) throw std::invalid_argument("empty sweep: t_dbm");
    for (int k : spec.k_list)
        if (k < 1) throw std::invalid_argument("k_list entries must be >= 1");
    for (double c : spec.c_list)
        if (!(c > 0.0)) throw std::invalid_argument("c_list entries must be positive");

    if (!spec.quad_r_max_explicit) spec.quad.r_max = spec.mc.window_radius;
}

namespace {

// ---------------------------------------------------------------- evaluate

struct PointJob {
    std::string param_name;
    double param_value = 0.0;  // k or t in dBm, as printed
    int k = 0;
    double t_watt = 0.0;
};

std::vector<PointJob> points_of(const ExperimentSpec& spec, const std::string& metric) {
    std::vector<PointJob> out;
    if (metric == "rate_distance") {
        for (int k : spec.k_list) out.push_back({"k", static_cast<double>(k), k, 0.0});
    } else {
        for (double t : spec.t_dbm) out.push_back({"t_dbm", t, 0, dbm_to_watt(t)});
    }
    return out;
}

Estimate evaluate(bool use_mc, const std::string& metric, const PointJob& p,
                  const NetworkConfig& cfg, const PathLossLaw& law, const McPlan& plan,
                  const QuadSpec& quad) {
    if (use_mc) {
        if (metric == "rate_distance") return estimate_rate(Strategy{DistanceK{p.k}}, cfg, law, plan);
        if (metric == "rate_power")
            return estimate_rate(Strategy{PowerThreshold{p.t_watt}}, cfg, law, plan);
        if (metric == "coop_count") return estimate_coop_count(p.t_watt, cfg, law, plan);
        if (metric == "ue_per_sbs") return estimate_ue_per_sbs(p.t_watt, cfg, law, plan);
        if (metric == "eta") return estimate_energy_efficiency(p.t_watt, cfg, law, plan);
    } else {
        if (metric == "rate_distance") return rate_distance(p.k, cfg, law, quad);
        if (metric == "rate_power") return rate_power(p.t_watt, cfg, law, quad);
        if (metric == "coop_count") return mean_coop_count(p.t_watt, cfg, law, quad);
        if (metric == "ue_per_sbs") return mean_ue_per_sbs(p.t_watt, cfg, law, quad);
        if (metric == "eta") return energy_efficiency(p.t_watt, cfg, law, quad);
    }
    throw std::invalid_argument("unknown metric: " + metric);
}

// ---------------------------------------------------------------- output

std::string csv_name(const ExperimentSpec& spec, const std::string& engine,
                     const std::string& metric, double c, bool multi_curve) {
    std::string n = spec.name + "_" + engine + "_" + metric;
    if (multi_curve && c > 0.0) n += "_c" + label(c);
    return n + ".csv";
}

class CsvWriter {
  public:
    CsvWriter(const fs::path& path, std::vector<std::string>& paths) : path_(path), out_(path) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
        out_ << "param_name,param_value,metric,value,half_width,n_trials,seed\n";
        paths.push_back(path.string());
    }
    void row(const std::string& pname, double pvalue, const std::string& metric,
             const Estimate& e, std::uint64_t seed) {
        out_ << pname << ',' << label(pvalue) << ',' << metric << ',' << num(e.value) << ','
             << num(e.half_width) << ',' << e.n_trials << ',' << seed << '\n';
    }
    ~CsvWriter() { out_.flush(); }

  private:
    fs::path path_;
    std::ofstream out_;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

json point_json(const std::string& engine, const std::string& metric, double c,
                const PointJob& p, const Estimate& e, double wall_ms) {
    json j;
    j["engine"] = engine;
    j["metric"] = metric;
    if (c > 0.0) j["c"] = c;
    j["param_name"] = p.param_name;
    j["param_value"] = p.param_value;
    j["value"] = e.value;
    j["half_width"] = e.half_width;
    j["n_trials"] = e.n_trials;
    j["wall_ms"] = wall_ms;
    return j;
}

void progress(const std::string& engine, const ExperimentSpec& spec, const std::string& metric,
              double c, const PointJob& p, const Estimate& e, double wall_ms) {
    std::fprintf(stderr, "[%s] %s %s%s %s=%s: %.6g +/- %.3g (%.1f s)\n", engine.c_str(),
                 spec.name.c_str(), metric.c_str(),
                 c > 0.0 ? (" c=" + label(c)).c_str() : "", p.param_name.c_str(),
                 label(p.param_value).c_str(), e.value, e.half_width, wall_ms / 1000.0);
}

// Shared gain composition for table1 rows.
Estimate gain_of(const Estimate& a, const Estimate& b) {
    Estimate g;
    g.value = (b.value - a.value) / a.value;
    g.half_width = b.half_width / std::abs(a.value) +
                   std::abs(b.value / (a.value * a.value)) * a.half_width;
    g.n_trials = a.n_trials;
    g.method = a.method;
    return g;
}

void run_table1(const ExperimentSpec& spec, bool use_mc, const NetworkConfig& cfg, double c,
                bool multi, RunResult& rr, json& points) {
    const std::string engine = use_mc ? "mc" : "analytic";
    struct Row {
        PointJob p;
        Estimate a, b, g;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < spec.k_list.size(); ++i) {
        Row row;
        row.p = {"k", static_cast<double>(spec.k_list[i]), spec.k_list[i],
                 dbm_to_watt(spec.t_dbm[i])};
        auto t0 = std::chrono::steady_clock::now();
        row.a = evaluate(use_mc, "rate_distance", row.p, cfg, spec.law, spec.mc, spec.quad);
        const double ms_a = ms_since(t0);
        points.push_back(point_json(engine, "rate_a", c, row.p, row.a, ms_a));
        progress(engine, spec, "rate_a", c, row.p, row.a, ms_a);

        t0 = std::chrono::steady_clock::now();
        row.b = evaluate(use_mc, "rate_power", row.p, cfg, spec.law, spec.mc, spec.quad);
        const double ms_b = ms_since(t0);
        points.push_back(point_json(engine, "rate_b", c, row.p, row.b, ms_b));
        progress(engine, spec, "rate_b", c, row.p, row.b, ms_b);

        row.g = gain_of(row.a, row.b);
        points.push_back(point_json(engine, "gain", c, row.p, row.g, 0.0));
        rows.push_back(row);
    }

    const fs::path dir = spec.output_dir;
    const char* metric_names[3] = {"rate_a", "rate_b", "gain"};
    for (int m = 0; m < 3; ++m) {
        CsvWriter csv(dir / csv_name(spec, engine, metric_names[m], c, multi), rr.csv_paths);
        for (const Row& row : rows)
            csv.row(row.p.param_name, row.p.param_value, metric_names[m],
                    m == 0 ? row.a : (m == 1 ? row.b : row.g), spec.mc.seed);
    }

    // Companion wide table: one row per (k, threshold) pair.
    const fs::path wide = dir / (spec.name + "_" + engine + "_rows" +
                                 (multi && c > 0.0 ? "_c" + label(c) : "") + ".csv");
    std::ofstream out(wide);
    if (!out) throw std::runtime_error("cannot open for writing: " + wide.string());
    out << "k,t_dbm,rate_a,rate_a_half_width,rate_b,rate_b_half_width,gain,gain_half_width\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        out << rows[i].p.k << ',' << label(spec.t_dbm[i]) << ',' << num(rows[i].a.value) << ','
            << num(rows[i].a.half_width) << ',' << num(rows[i].b.value) << ','
            << num(rows[i].b.half_width) << ',' << num(rows[i].g.value) << ','
            << num(rows[i].g.half_width) << '\n';
    rr.csv_paths.push_back(wide.string());
}

// The window-doubling health check runs at the middle point of the first
// curve, on whichever rate the experiment exercises.
std::optional<Strategy> truncation_strategy(const ExperimentSpec& spec) {
    const auto metrics = metrics_of(spec);
    const bool has_power = std::any_of(metrics.begin(), metrics.end(), [](const std::string& m) {
        return m == "rate_power" || m == "eta" || m == "rate_b";
    });
    const bool has_distance =
        std::any_of(metrics.begin(), metrics.end(),
                    [](const std::string& m) { return m == "rate_distance" || m == "rate_a"; });
    if (has_power && !spec.t_dbm.empty())
        return Strategy{PowerThreshold{dbm_to_watt(spec.t_dbm[spec.t_dbm.size() / 2])}};
    if (has_distance && !spec.k_list.empty())
        return Strategy{DistanceK{spec.k_list[spec.k_list.size() / 2]}};
    return std::nullopt;
}

json spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["network"] = {{"lambda_b", spec.config.lambda_b}, {"lambda_u", spec.config.lambda_u},
                    {"p_s", spec.config.p_s},           {"w", spec.config.w},
                    {"sigma2", spec.config.sigma2},     {"p0", spec.config.p0},
                    {"delta_p", spec.config.delta_p},   {"area_s", spec.config.area_s}};
    j["pathloss"] = {{"shape", spec.law.shape},
                     {"scale", spec.law.scale},
                     {"alpha_min", spec.law.alpha_min}};
    j["mc"] = {{"trials", spec.mc.n_trials},
               {"seed", spec.mc.seed},
               {"window_radius", spec.mc.window_radius},
               {"batch_size", spec.mc.batch_size},
               {"truncation_check", spec.run_truncation_check}};
    j["quad"] = {{"rel_tol", spec.quad.rel_tol},
                 {"abs_tol", spec.quad.abs_tol},
                 {"s_max", spec.quad.s_max},
                 {"r_max", spec.quad.r_max},
                 {"alpha_max", spec.quad.alpha_max},
                 {"distance_method",
                  spec.quad.distance_method == RateMethod::pgfl ? "pgfl" : "exact"}};
    std::string engines;
    if (spec.engine_mc) engines = "mc";
    if (spec.engine_analytic) engines += engines.empty() ? "analytic" : ",analytic";
    j["experiment"] = {{"name", spec.name},   {"metric", spec.metric},
                       {"engines", engines},  {"out", spec.output_dir},
                       {"t_dbm", spec.t_dbm}, {"k_list", spec.k_list},
                       {"c_list", spec.c_list}};
    return j;
}

// ---------------------------------------------------------------- config IO

using Kv = std::map<std::string, std::map<std::string, std::string>>;

Kv read_ini(std::istream& in) {
    Kv kv;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            kv[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected [section] or key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key or value");
        kv[section][key] = value;
    }
    return kv;
}

Kv read_json_config(const std::string& text) {
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config JSON root must be an object");
    Kv kv;
    for (const auto& [sec, body] : j.items()) {
        if (sec == "results") continue;  // run summaries feed back as configs
        if (!body.is_object())
            throw std::invalid_argument("config section must be an object: " + sec);
        for (const auto& [key, v] : body.items()) {
            std::string s;
            if (v.is_string()) {
                s = v.get<std::string>();
            } else if (v.is_array()) {
                for (const auto& el : v) {
                    if (!s.empty()) s += ',';
                    s += el.is_string() ? el.get<std::string>() : el.dump();
                }
                if (v.empty()) continue;  // empty list == unset
            } else {
                s = v.dump();
            }
            kv[sec][key] = s;
        }
    }
    return kv;
}

double parse_double(const std::string& s, const std::string& where) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number for " + where + ": " + s);
    }
    if (pos != s.size()) throw std::invalid_argument("trailing junk for " + where + ": " + s);
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an unsigned integer for " + where + ": " + s);
    }
    if (pos != s.size()) throw std::invalid_argument("trailing junk for " + where + ": " + s);
    return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw std::invalid_argument("not a boolean for " + where + ": " + s);
}

std::vector<double> parse_double_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, where));
    return out;
}

ExperimentSpec spec_from_kv(Kv kv) {
    ExperimentSpec spec;
    auto take = [&kv](const char* sec, const char* key) -> std::optional<std::string> {
        auto s = kv.find(sec);
        if (s == kv.end()) return std::nullopt;
        auto it = s->second.find(key);
        if (it == s->second.end()) return std::nullopt;
        std::string v = it->second;
        s->second.erase(it);
        return v;
    };

    const auto c = take("network", "c");
    const auto lb = take("network", "lambda_b");
    if (c && lb) throw std::invalid_argument("give either network.c or network.lambda_b, not both");
    if (c) {
        const double cv = parse_double(*c, "network.c");
        if (!(cv > 0.0)) throw std::invalid_argument("network.c must be positive");
        spec.config.lambda_b = 1.0 / (kPi * cv * cv);
    }
    if (lb) spec.config.lambda_b = parse_double(*lb, "network.lambda_b");
    if (auto v = take("network", "lambda_u")) spec.config.lambda_u = parse_double(*v, "network.lambda_u");
    if (auto v = take("network", "p_s")) spec.config.p_s = parse_double(*v, "network.p_s");
    if (auto v = take("network", "w")) spec.config.w = parse_double(*v, "network.w");
    const auto s2 = take("network", "sigma2");
    const auto s2d = take("network", "sigma2_dbm");
    if (s2 && s2d)
        throw std::invalid_argument("give either network.sigma2 or network.sigma2_dbm, not both");
    if (s2) spec.config.sigma2 = parse_double(*s2, "network.sigma2");
    if (s2d) spec.config.sigma2 = dbm_to_watt(parse_double(*s2d, "network.sigma2_dbm"));
    if (auto v = take("network", "p0")) spec.config.p0 = parse_double(*v, "network.p0");
    if (auto v = take("network", "delta_p")) spec.config.delta_p = parse_double(*v, "network.delta_p");
    if (auto v = take("network", "area_s")) spec.config.area_s = parse_double(*v, "network.area_s");

    if (auto v = take("pathloss", "shape")) spec.law.shape = parse_double(*v, "pathloss.shape");
    if (auto v = take("pathloss", "scale")) spec.law.scale = parse_double(*v, "pathloss.scale");
    if (auto v = take("pathloss", "alpha_min"))
        spec.law.alpha_min = parse_double(*v, "pathloss.alpha_min");

    if (auto v = take("mc", "trials")) spec.mc.n_trials = parse_u64(*v, "mc.trials");
    if (auto v = take("mc", "seed")) spec.mc.seed = parse_u64(*v, "mc.seed");
    if (auto v = take("mc", "window_radius"))
        spec.mc.window_radius = parse_double(*v, "mc.window_radius");
    if (auto v = take("mc", "batch_size")) spec.mc.batch_size = parse_u64(*v, "mc.batch_size");
    if (auto v = take("mc", "truncation_check"))
        spec.run_truncation_check = parse_bool(*v, "mc.truncation_check");

    if (auto v = take("quad", "rel_tol")) spec.quad.rel_tol = parse_double(*v, "quad.rel_tol");
    if (auto v = take("quad", "abs_tol")) spec.quad.abs_tol = parse_double(*v, "quad.abs_tol");
    if (auto v = take("quad", "s_max")) spec.quad.s_max = parse_double(*v, "quad.s_max");
    if (auto v = take("quad", "r_max")) {
        spec.quad.r_max = parse_double(*v, "quad.r_max");
        spec.quad_r_max_explicit = true;
    }
    if (auto v = take("quad", "alpha_max")) spec.quad.alpha_max = parse_double(*v, "quad.alpha_max");
    if (auto v = take("quad", "distance_method")) {
        if (*v == "exact") spec.quad.distance_method = RateMethod::exact;
        else if (*v == "pgfl") spec.quad.distance_method = RateMethod::pgfl;
        else throw std::invalid_argument("quad.distance_method must be exact or pgfl");
    }

    if (auto v = take("experiment", "name")) spec.name = *v;
    if (auto v = take("experiment", "metric")) spec.metric = *v;
    if (auto v = take("experiment", "out")) spec.output_dir = *v;
    if (auto v = take("experiment", "t_dbm")) spec.t_dbm = parse_double_list(*v, "experiment.t_dbm");
    if (auto v = take("experiment", "k_list")) {
        for (double d : parse_double_list(*v, "experiment.k_list")) {
            if (d != std::floor(d)) throw std::invalid_argument("experiment.k_list must be integers");
            spec.k_list.push_back(static_cast<int>(d));
        }
    }
    if (auto v = take("experiment", "c_list"))
        spec.c_list = parse_double_list(*v, "experiment.c_list");
    if (auto v = take("experiment", "engines")) set_engines(spec, *v);

    static const char* sections[] = {"network", "pathloss", "mc", "quad", "experiment"};
    for (const auto& [sec, body] : kv) {
        if (std::find_if(std::begin(sections), std::end(sections),
                         [&](const char* s) { return sec == s; }) == std::end(sections))
            throw std::invalid_argument("unknown config section: " + sec);
        if (!body.empty())
            throw std::invalid_argument("unknown config key: " + sec + "." + body.begin()->first);
    }
    return spec;
}

}  // namespace

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return spec_from_kv(read_json_config(text));
    std::istringstream ss(text);
    return spec_from_kv(read_ini(ss));
}

void set_engines(ExperimentSpec& spec, const std::string& list) {
    spec.engine_mc = false;
    spec.engine_analytic = false;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        const std::string name = b == std::string::npos ? "" : item.substr(b, e - b + 1);
        if (name == "mc") spec.engine_mc = true;
        else if (name == "analytic") spec.engine_analytic = true;
        else throw std::invalid_argument("unknown engine: " + name);
    }
    if (!spec.engine_mc && !spec.engine_analytic)
        throw std::invalid_argument("engines list selected nothing");
}

RunResult run(const ExperimentSpec& raw) {
    ExperimentSpec spec = raw;
    resolve(spec);
    if (const auto v = violations(spec.config, spec.law); !v.empty())
        throw std::invalid_argument("invalid configuration: " + v.front());

    fs::create_directories(spec.output_dir);
    RunResult rr;
    json summary = spec_to_json(spec);
    json points = json::array();

    {
        std::ostringstream os;
        os << "exponent law keeps " << fmt("%.4f", truncation_keep_mass(spec.law))
           << " of its untruncated mass above alpha_min";
        rr.messages.push_back(os.str());
    }

    const bool multi = spec.c_list.size() > 1;
    const std::vector<double> curves = spec.c_list.empty() ? std::vector<double>{0.0} : spec.c_list;
    const auto metrics = metrics_of(spec);

    for (double c : curves) {
        NetworkConfig cfg = spec.config;
        if (c > 0.0) cfg.lambda_b = 1.0 / (kPi * c * c);
        for (int eng = 0; eng < 2; ++eng) {
            const bool use_mc = eng == 0;
            if (use_mc && !spec.engine_mc) continue;
            if (!use_mc && !spec.engine_analytic) continue;
            const std::string engine = use_mc ? "mc" : "analytic";
            if (spec.name == "table1") {
                run_table1(spec, use_mc, cfg, c, multi, rr, points);
                continue;
            }
            for (const auto& metric : metrics) {
                CsvWriter csv(fs::path(spec.output_dir) / csv_name(spec, engine, metric, c, multi),
                              rr.csv_paths);
                for (const PointJob& p : points_of(spec, metric)) {
                    const auto t0 = std::chrono::steady_clock::now();
                    const Estimate e = evaluate(use_mc, metric, p, cfg, spec.law, spec.mc, spec.quad);
                    const double ms = ms_since(t0);
                    csv.row(p.param_name, p.param_value, metric, e, spec.mc.seed);
                    points.push_back(point_json(engine, metric, c, p, e, ms));
                    progress(engine, spec, metric, c, p, e, ms);
                }
            }
        }
    }

    json tc_json;
    tc_json["ran"] = false;
    if (spec.run_truncation_check && spec.engine_mc) {
        if (const auto strat = truncation_strategy(spec)) {
            NetworkConfig cfg = spec.config;
            if (curves.front() > 0.0) cfg.lambda_b = 1.0 / (kPi * curves.front() * curves.front());
            const TruncationCheck tc = truncation_check(*strat, cfg, spec.law, spec.mc);
            tc_json["ran"] = true;
            tc_json["base"] = tc.base.value;
            tc_json["base_half_width"] = tc.base.half_width;
            tc_json["doubled"] = tc.doubled.value;
            tc_json["delta"] = tc.delta;
            tc_json["passed"] = tc.passed;
            rr.checks_passed = rr.checks_passed && tc.passed;
            std::ostringstream os;
            os << "window doubling check: " << (tc.passed ? "passed" : "FAILED") << " (delta "
               << fmt("%.6g", tc.delta) << " vs half-width " << fmt("%.6g", tc.base.half_width)
               << ")";
            rr.messages.push_back(os.str());
        }
    }

    summary["results"] = {{"generated_csv", rr.csv_paths},
                          {"points", points},
                          {"truncation_check", tc_json},
                          {"checks_passed", rr.checks_passed},
                          {"exponent_keep_mass", truncation_keep_mass(spec.law)},
                          {"workers", worker_count()}};

    const fs::path spath = fs::path(spec.output_dir) / (spec.name + "_summary.json");
    std::ofstream out(spath);
    if (!out) throw std::runtime_error("cannot open for writing: " + spath.string());
    out << summary.dump(2) << '\n';
    rr.summary_path = spath.string();
    return rr;
}

CompareReport compare_files(const std::string& mc_csv, const std::string& analytic_csv,
                            double k_sigma) {
    struct Parsed {
        double value = 0.0, half_width = 0.0;
    };
    auto read = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open: " + path);
        std::string line;
        if (!std::getline(in, line) ||
            line != "param_name,param_value,metric,value,half_width,n_trials,seed")
            throw std::runtime_error("unexpected CSV header in " + path);
        std::vector<std::pair<std::string, Parsed>> rows;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string item;
            while (std::getline(ss, item, ',')) f.push_back(item);
            if (f.size() != 7) throw std::runtime_error("malformed CSV row in " + path + ": " + line);
            Parsed p;
            p.value = parse_double(f[3], "value");
            p.half_width = parse_double(f[4], "half_width");
            rows.emplace_back(f[0] + "," + f[1] + "," + f[2], p);
        }
        return rows;
    };

    const auto mc_rows = read(mc_csv);
    const auto an_rows = read(analytic_csv);
    std::map<std::string, Parsed> an_map;
    for (const auto& [key, p] : an_rows) an_map[key] = p;

    std::vector<std::string> missing;
    CompareReport report;
    for (const auto& [key, mc] : mc_rows) {
        const auto it = an_map.find(key);
        if (it == an_map.end()) {
            missing.push_back(key + " (analytic side)");
            continue;
        }
        CompareRow row;
        std::stringstream ss(key);
        std::getline(ss, row.param_name, ',');
        std::getline(ss, row.param_value, ',');
        std::getline(ss, row.metric, ',');
        row.mc_value = mc.value;
        row.mc_half_width = mc.half_width;
        row.an_value = it->second.value;
        row.an_half_width = it->second.half_width;
        row.gap = std::abs(mc.value - it->second.value);
        row.tolerance = it->second.half_width + k_sigma * (mc.half_width / 1.96);
        row.ok = row.gap <= row.tolerance;
        (row.ok ? report.n_pass : report.n_fail)++;
        report.rows.push_back(row);
        an_map.erase(it);
    }
    for (const auto& [key, p] : an_map) missing.push_back(key + " (mc side)");

    if (!missing.empty()) {
        std::ostringstream os;
        os << "sweep grids do not match; missing points:";
        for (const auto& m : missing) os << ' ' << m << ';';
        throw std::runtime_error(os.str());
    }
    return report;
}

}  // namespace fractalcomp
