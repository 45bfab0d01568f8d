#include "flrdt/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "toml.hpp"
#include "flrdt/capacity.hpp"
#include "flrdt/error.hpp"
#include "flrdt/finite.hpp"
#include "flrdt/oracle.hpp"
#include "flrdt/parallel.hpp"
#include "flrdt/saddle.hpp"

#ifndef FLRDT_VERSION
#define FLRDT_VERSION "0.0.0"
#endif

namespace flrdt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Minimal schema: {type, default, enum, minimum, maximum, exclusive_minimum, items, properties, optional}.
// Tables are materialized with their defaults unless marked optional.
const json& schema() {
    static const json s = json::parse(R"({
      "type": "object",
      "properties": {
        "task": {"type": "string",
                 "enum": ["capacity", "curve", "dual_eval", "stationary_solve", "finite_check", "empirical"]},
        "seed": {"type": "integer", "minimum": 0},
        "model": {"type": "object", "properties": {
          "family": {"type": "string", "enum": ["spherical", "binary"], "default": "spherical"},
          "kappa": {"type": "number", "default": 0.0}}},
        "lifting": {"type": "object", "properties": {
          "config": {"type": "string", "enum": ["non_lifted", "partially_lifted", "fully_lifted"],
                     "default": "fully_lifted"},
          "r": {"type": "integer", "minimum": 1, "default": 2}}},
        "solver": {"type": "object", "properties": {
          "tol": {"type": "number", "exclusive_minimum": 0, "default": 1e-6},
          "max_iter": {"type": "integer", "minimum": 1, "default": 500},
          "damping": {"type": "number", "exclusive_minimum": 0, "maximum": 1, "default": 0.3},
          "fd_step": {"type": "number", "exclusive_minimum": 0, "default": 1e-5},
          "quad_nodes": {"type": "integer", "minimum": 2, "default": 60},
          "c_cap": {"type": "number", "exclusive_minimum": 0, "default": 1000.0}}},
        "capacity": {"type": "object", "properties": {
          "lo": {"type": "number", "exclusive_minimum": 0},
          "hi": {"type": "number", "exclusive_minimum": 0},
          "start": {"type": "number", "exclusive_minimum": 0, "default": 1.0},
          "tol_alpha": {"type": "number", "exclusive_minimum": 0, "default": 1e-3},
          "max_bisections": {"type": "integer", "minimum": 1, "default": 60}}},
        "curve": {"type": "object", "properties": {
          "kappa": {"type": "array", "items": {"type": "number"}, "default": []}}},
        "dual_eval": {"type": "object", "properties": {
          "alpha": {"type": "number", "exclusive_minimum": 0, "default": 1.0},
          "c2": {"type": "number", "exclusive_minimum": 0, "default": 0.1},
          "params": {"type": "object", "optional": true, "properties": {
            "r": {"type": "integer", "minimum": 1},
            "p": {"type": "array", "items": {"type": "number"}},
            "q": {"type": "array", "items": {"type": "number"}},
            "c": {"type": "array", "items": {"type": "number"}}}},
          "aux": {"type": "array", "items": {"type": "number"}},
          "method": {"type": "string", "enum": ["separable", "mc"], "default": "separable"},
          "n": {"type": "integer", "minimum": 2, "default": 400},
          "samples": {"type": "array", "items": {"type": "integer", "minimum": 1}, "default": [2000, 200]}}},
        "stationary_solve": {"type": "object", "properties": {
          "alpha": {"type": "number", "exclusive_minimum": 0, "default": 1.0}}},
        "finite_check": {"type": "object", "properties": {
          "fixture": {"type": "string"},
          "samples": {"type": "array", "items": {"type": "integer", "minimum": 1}, "default": [64, 256]},
          "beta": {"type": "number", "exclusive_minimum": 0, "default": 30.0},
          "outer": {"type": "integer", "minimum": 2, "default": 10000}}},
        "empirical": {"type": "object", "properties": {
          "n": {"type": "integer", "minimum": 1, "default": 20},
          "alpha_grid": {"type": "array", "items": {"type": "number", "exclusive_minimum": 0}},
          "trials": {"type": "integer", "minimum": 50, "default": 100}}},
        "output": {"type": "object", "properties": {
          "format": {"type": "string", "enum": ["csv", "json"], "default": "csv"}}}
      }
    })");
    return s;
}

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
    throw Error(ErrorCode::ConfigError, (pointer.empty() ? "/" : pointer) + ": " + what);
}

std::string escape_pointer(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

json check(const json& node, const json& sch, const std::string& ptr) {
    const std::string type = sch.at("type");
    if (type == "object") {
        if (!node.is_object()) schema_error(ptr, "expected a table/object");
        const json& props = sch.at("properties");
        json out = json::object();
        for (auto it = node.begin(); it != node.end(); ++it)
            if (!props.contains(it.key())) schema_error(ptr + "/" + escape_pointer(it.key()), "unknown key");
        for (auto it = props.begin(); it != props.end(); ++it) {
            const std::string child = ptr + "/" + escape_pointer(it.key());
            if (node.contains(it.key())) {
                out[it.key()] = check(node.at(it.key()), it.value(), child);
            } else if (it.value().contains("default")) {
                out[it.key()] = it.value().at("default");
            } else if (it.value().at("type") == "object" && !it.value().value("optional", false)) {
                out[it.key()] = check(json::object(), it.value(), child);
            }
        }
        return out;
    }
    if (type == "array") {
        if (!node.is_array()) schema_error(ptr, "expected an array");
        json out = json::array();
        for (std::size_t i = 0; i < node.size(); ++i)
            out.push_back(check(node[i], sch.at("items"), ptr + "/" + std::to_string(i)));
        return out;
    }
    if (type == "string") {
        if (!node.is_string()) schema_error(ptr, "expected a string");
        if (sch.contains("enum")) {
            const auto& e = sch.at("enum");
            if (std::find(e.begin(), e.end(), node) == e.end()) schema_error(ptr, "must be one of " + e.dump());
        }
        return node;
    }
    if (type == "integer") {
        if (!node.is_number_integer()) schema_error(ptr, "expected an integer");
    } else if (type == "number") {
        if (!node.is_number()) schema_error(ptr, "expected a number");
        if (!std::isfinite(node.get<double>())) schema_error(ptr, "must be finite");
    }
    const double v = node.get<double>();
    if (sch.contains("minimum") && v < sch.at("minimum").get<double>())
        schema_error(ptr, "must be >= " + sch.at("minimum").dump());
    if (sch.contains("maximum") && v > sch.at("maximum").get<double>())
        schema_error(ptr, "must be <= " + sch.at("maximum").dump());
    if (sch.contains("exclusive_minimum") && !(v > sch.at("exclusive_minimum").get<double>()))
        schema_error(ptr, "must be > " + sch.at("exclusive_minimum").dump());
    return type == "number" ? json(v) : node;
}

bool stochastic(const json& cfg) {
    const std::string task = cfg.at("task");
    return task == "finite_check" || task == "empirical" ||
           (task == "dual_eval" && cfg.at("dual_eval").at("method") == "mc");
}

// ---- output ------------------------------------------------------------------

std::string num(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    void text(const std::string& name, const std::string& content) {
        fs::create_directories(dir_);
        std::ofstream out(dir_ / name, std::ios::binary);
        out << content;
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir_ / name).string());
        files_.push_back(name);
    }
    void doc(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

SolverConfig solver_from(const json& cfg) {
    SolverConfig s;
    from_json(cfg.at("solver"), s);
    return s;
}

CapacityConfig capacity_config_from(const json& cfg) {
    CapacityConfig c;
    c.lift = lift_config_from_string(cfg.at("lifting").at("config"));
    c.r = cfg.at("lifting").at("r");
    c.solver = solver_from(cfg);
    c.tol_alpha = cfg.at("capacity").at("tol_alpha");
    c.max_bisections = cfg.at("capacity").at("max_bisections");
    return c;
}

const char* kCapacityHeader = "kappa,r,alpha_star,lo,hi,method,seed\n";

std::string capacity_row(const CapacityResult& r, std::uint64_t seed) {
    return num(r.kappa) + "," + std::to_string(r.r) + "," + num(r.alpha_star) + "," + num(r.lo) + "," + num(r.hi) +
           "," + r.method + "," + std::to_string(seed) + "\n";
}

std::string value_curve(std::vector<AlphaEvaluation> trace) {
    std::sort(trace.begin(), trace.end(), [](const auto& a, const auto& b) { return a.alpha < b.alpha; });
    std::string out = "# alpha value\n";
    for (const auto& e : trace) out += num(e.alpha) + " " + num(e.value.value) + "\n";
    return out;
}

bool any_flag(const CapacityResult& r) {
    if (r.flagged) return true;
    return std::any_of(r.trace.begin(), r.trace.end(), [](const auto& e) { return e.flagged; });
}

struct TaskOutcome {
    bool flagged = false;
    std::string note;
};

TaskOutcome run_capacity(const json& cfg, Writer& w, bool csv) {
    const auto family = perceptron_family_from_string(cfg.at("model").at("family"));
    const double kappa = cfg.at("model").at("kappa");
    const CapacityConfig cc = capacity_config_from(cfg);
    const json& cap = cfg.at("capacity");
    double lo, hi;
    if (cap.contains("lo") && cap.contains("hi")) {
        lo = cap.at("lo");
        hi = cap.at("hi");
    } else {
        AlphaEvaluator probe = [&](double a, int) { return dual_value_at_alpha(family, kappa, a, cc); };
        std::tie(lo, hi) = find_bracket(probe, cap.at("start"));
    }
    const CapacityResult res = capacity_bisect(family, kappa, lo, hi, cc);
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    json doc = res;
    if (csv) {
        w.text("capacity.csv", std::string(kCapacityHeader) + capacity_row(res, seed));
        w.text("capacity_values.dat", value_curve(res.trace));
    }
    w.doc("capacity.json", doc);
    return {any_flag(res), res.note};
}

TaskOutcome run_curve(const json& cfg, Writer& w, bool csv) {
    const auto family = perceptron_family_from_string(cfg.at("model").at("family"));
    std::vector<double> grid = cfg.at("curve").at("kappa");
    const auto results = capacity_curve(family, grid, capacity_config_from(cfg));
    const std::uint64_t seed = cfg.value("seed", 0ULL);
    std::string table = kCapacityHeader;
    TaskOutcome out;
    for (const auto& r : results) {
        table += capacity_row(r, seed);
        out.flagged = out.flagged || any_flag(r);
    }
    if (csv) w.text("curve.csv", table);
    w.doc("curve.json", json(results));
    return out;
}

TaskOutcome run_dual_eval(const json& cfg, Writer& w) {
    const auto family = perceptron_family_from_string(cfg.at("model").at("family"));
    const json& d = cfg.at("dual_eval");
    const ModelSpec model = perceptron_model(family, d.at("alpha"), cfg.at("model").at("kappa"));
    const LiftConfig lift = lift_config_from_string(cfg.at("lifting").at("config"));
    const ExponentMode mode = exponent_mode(lift);
    LiftingParams params;
    if (d.contains("params")) params = d.at("params").get<LiftingParams>();
    else if (lift == LiftConfig::NonLifted) params = LiftingParams::non_lifted();
    else params = LiftingParams::partially_lifted(d.at("c2"));
    validate_params(params, mode);

    const SolverConfig scfg = solver_from(cfg);
    json doc{{"model", model}, {"params", params}, {"config", to_string(lift)}};
    DualEvaluation psi_s;
    TaskOutcome out;
    if (d.at("method") == "mc") {
        std::vector<int> samples = d.at("samples");
        psi_s = psi_s_inf_mc(model, params, mode, d.at("n"), samples, cfg.at("seed"));
    } else {
        std::vector<double> aux;
        if (d.contains("aux")) {
            aux = d.at("aux").get<std::vector<double>>();
        } else {
            const std::vector<double> guess(std::size_t(aux_count(model)), 1.0);
            const AuxSolution as = solve_aux(model, lift, params, guess, 1.0, 1.0, scfg);
            aux = as.aux;
            doc["aux_residual_norm"] = as.residual_norm;
            if (!as.converged) {
                out.flagged = true;
                out.note = "linearization scalars did not reach stationarity";
            }
        }
        doc["aux"] = aux;
        psi_s = psi_s_inf_separable(model, params, mode, aux, scfg.quad_nodes);
    }
    doc["psi_s_inf"] = psi_s;
    doc["psi_rd"] = psi_rd(params, mode, 1.0, 1.0, psi_s);
    w.doc("dual_eval.json", doc);
    return out;
}

TaskOutcome run_stationary(const json& cfg, Writer& w) {
    const auto family = perceptron_family_from_string(cfg.at("model").at("family"));
    const double alpha = cfg.at("stationary_solve").at("alpha");
    const AlphaEvaluation e = dual_value_at_alpha(family, cfg.at("model").at("kappa"), alpha, capacity_config_from(cfg));
    json doc = e;
    doc["candidates"] = e.candidates;
    if (e.solution) doc["solution"] = *e.solution;
    w.doc("stationary.json", doc);
    return {e.flagged, e.note};
}

TaskOutcome run_finite_check(const json& cfg, Writer& w) {
    const json& f = cfg.at("finite_check");
    if (!f.contains("fixture")) schema_error("/finite_check/fixture", "required for task finite_check");
    std::ifstream in(f.at("fixture").get<std::string>());
    if (!in) throw Error(ErrorCode::IoError, "cannot read fixture " + f.at("fixture").get<std::string>());
    FiniteInstance inst = json::parse(in).get<FiniteInstance>();
    const std::uint64_t seed = cfg.at("seed");
    std::vector<int> samples = f.at("samples");

    inst.t = 0.0;
    const auto full = finite_psi(inst, samples, seed);
    const auto drop = finite_psi_S(inst, samples, seed);
    const bool identity = full.value == drop.value && full.std_error == drop.std_error;

    inst.t = 1.0;
    inst.s = -1;
    inst.beta = f.at("beta");
    const int outer = f.at("outer");
    std::vector<int> s1(samples.size(), 1);
    s1.back() = outer;
    const auto psi1 = finite_psi_S(inst, s1, seed);
    std::vector<Eigen::VectorXd> X, Y;
    for (const auto& x : inst.X) X.push_back(Eigen::Map<const Eigen::VectorXd>(x.data(), Eigen::Index(x.size())));
    for (const auto& y : inst.Y) Y.push_back(Eigen::Map<const Eigen::VectorXd>(y.data(), Eigen::Index(y.size())));
    double acc = 0.0;
    for (int i = 0; i < outer; ++i) {
        const Eigen::MatrixXd G = finite_instance_G(inst, seed, std::uint64_t(i));
        acc += exhaustive_primal(X, Y, G, Eigen::VectorXd::Zero(G.rows()), inst.f);
    }
    const double target = -(acc / outer) / std::sqrt(double(inst.n()));
    const double z = psi1.std_error > 0 ? (psi1.value - target) / psi1.std_error : 0.0;
    const bool match = std::abs(z) <= 3.0;
    json doc{{"t0_identity", {{"finite_psi", full}, {"finite_psi_S", drop}, {"bit_identical", identity}}},
             {"t1_enumeration",
              {{"finite_psi_S", psi1}, {"exhaustive_scaled_mean", target}, {"z", z}, {"within_3_std_error", match}}}};
    w.doc("finite_check.json", doc);
    TaskOutcome out;
    out.flagged = !identity || !match;
    if (out.flagged) out.note = "finite identity check failed";
    return out;
}

TaskOutcome run_empirical(const json& cfg, Writer& w, bool csv) {
    const auto family = perceptron_family_from_string(cfg.at("model").at("family"));
    const json& e = cfg.at("empirical");
    if (!e.contains("alpha_grid")) schema_error("/empirical/alpha_grid", "required for task empirical");
    std::vector<double> grid = e.at("alpha_grid");
    const auto res = empirical_transition(family, e.at("n"), grid, e.at("trials"), cfg.at("seed"),
                                          cfg.at("model").at("kappa"));
    if (csv) {
        std::string table = "alpha,feasible_count,trials,wilson_lo,wilson_hi\n";
        std::string curve = "# alpha frequency\n";
        for (const auto& p : res.points) {
            table += num(p.alpha) + "," + std::to_string(p.feasible) + "," + std::to_string(p.trials) + "," +
                     num(p.wilson_lo) + "," + num(p.wilson_hi) + "\n";
            curve += num(p.alpha) + " " + num(p.frequency()) + "\n";
        }
        w.text("empirical.csv", table);
        w.text("empirical_frequency.dat", curve);
    }
    w.doc("empirical.json", json(res));
    TaskOutcome out;
    if (!res.crossing) {
        out.flagged = true;
        out.note = "NoCrossing: frequencies do not straddle 1/2";
    }
    if (!res.monotone) {
        out.flagged = true;
        out.note += (out.note.empty() ? "" : "; ") + std::string("frequency curve not monotone within Wilson intervals");
    }
    return out;
}

} // namespace

json load_config(const std::string& path) {
    const fs::path p(path);
    if (!fs::exists(p)) throw Error(ErrorCode::IoError, "config file not found: " + path);
    json cfg;
    if (p.extension() == ".toml") {
        try {
            const toml::table tbl = toml::parse_file(path);
            std::ostringstream ss;
            ss << toml::json_formatter{tbl};
            cfg = json::parse(ss.str());
        } catch (const toml::parse_error& e) {
            std::ostringstream msg;
            msg << "TOML parse error in " << path << " at line " << e.source().begin.line << ": " << e.description();
            throw Error(ErrorCode::ConfigError, msg.str());
        }
    } else {
        std::ifstream in(path);
        try {
            cfg = json::parse(in);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::ConfigError, "JSON parse error in " + path + ": " + e.what());
        }
        if (cfg.is_object() && cfg.contains("config") && cfg.contains("files")) cfg = cfg.at("config");
    }
    if (cfg.is_object() && cfg.contains("finite_check") && cfg["finite_check"].is_object() &&
        cfg["finite_check"].contains("fixture") && cfg["finite_check"]["fixture"].is_string()) {
        const fs::path fixture = cfg["finite_check"]["fixture"].get<std::string>();
        if (fixture.is_relative()) cfg["finite_check"]["fixture"] = (p.parent_path() / fixture).lexically_normal().string();
    }
    return cfg;
}

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::ConfigError, "override must look like key.path=value: " + assignment);
    const std::string key = assignment.substr(0, eq), raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw Error(ErrorCode::ConfigError, "empty key segment in override: " + assignment);
        if (!node->is_object()) *node = json::object();
        if (dot == std::string::npos) {
            (*node)[part] = value;
            break;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

json validate_config(const json& raw) {
    if (!raw.is_object()) schema_error("", "config must be a table/object");
    if (!raw.contains("task")) schema_error("/task", "required");
    json cfg = check(raw, schema(), "");
    if (stochastic(cfg) && !cfg.contains("seed")) schema_error("/seed", "required for stochastic task " + cfg["task"].get<std::string>());
    const json& cap = cfg.at("capacity");
    if (cap.contains("lo") != cap.contains("hi")) schema_error("/capacity", "give both lo and hi, or neither");
    if (cap.contains("lo") && !(cap.at("lo").get<double>() < cap.at("hi").get<double>()))
        schema_error("/capacity/hi", "must exceed lo");
    return cfg;
}

JobResult run_job(const json& raw, const std::string& out_dir, const std::string& format) {
    JobResult result;
    json cfg;
    try {
        cfg = validate_config(raw);
    } catch (const Error& e) {
        result.exit_code = 1;
        result.message = e.what();
        return result;
    }
    const std::string fmt_used = format.empty() ? cfg.at("output").at("format").get<std::string>() : format;
    if (fmt_used != "csv" && fmt_used != "json") {
        result.exit_code = 1;
        result.message = "/output/format: must be csv or json";
        return result;
    }
    cfg["output"]["format"] = fmt_used;
    const bool csv = fmt_used == "csv";
    Writer w{fs::path(out_dir)};
    const auto t0 = std::chrono::steady_clock::now();
    TaskOutcome outcome;
    try {
        const std::string task = cfg.at("task");
        if (task == "capacity") outcome = run_capacity(cfg, w, csv);
        else if (task == "curve") outcome = run_curve(cfg, w, csv);
        else if (task == "dual_eval") outcome = run_dual_eval(cfg, w);
        else if (task == "stationary_solve") outcome = run_stationary(cfg, w);
        else if (task == "finite_check") outcome = run_finite_check(cfg, w);
        else outcome = run_empirical(cfg, w, csv);
    } catch (const Error& e) {
        result.exit_code = 1;
        result.message = std::string(to_string(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.message = e.what();
    }
    if (result.exit_code == 0 && outcome.flagged) {
        result.exit_code = 2;
        result.message = outcome.note.empty() ? "completed with flagged evaluations" : outcome.note;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.files = w.files();
    if (result.exit_code != 1 || !result.files.empty()) {
        json manifest{{"config", cfg},
                      {"version", FLRDT_VERSION},
                      {"seed", cfg.contains("seed") ? cfg.at("seed") : json(nullptr)},
                      {"threads", default_threads()},
                      {"wall_time_s", wall},
                      {"exit_code", result.exit_code},
                      {"message", result.message},
                      {"files", result.files}};
        w.doc("manifest.json", manifest);
    }
    return result;
}

} // namespace flrdt
