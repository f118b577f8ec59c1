#pragma once

#include "insp/model.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

// Run configuration: a sectioned key-value document.
//
//   [model]
//   p = <12 no-inspect probabilities, row-major, below-diagonal omitted>
//   p_ic = <3 inspection-closure probabilities>
//
//   [penalties]    d, c, c_tilde
//   [planner]      horizon, convergence_window
//   [simulation]   runs, seed, perturbation_sd, max_steps, fixed_rules,
//                  include_never, redraw_per_run
//   [sensitivity]  t_values, d_min, d_max, d_step, c
//   [output]       dir, per_run_records
//
// '#' starts a comment. Defaults are applied only where the contract
// defines them (horizon 500, window 50, grid step 0.01, max_steps 100000).

namespace insp {

struct PlannerConfig {
    int horizon = 500;
    int convergence_window = 50;
};

struct SimulationConfig {
    long runs = 100000;
    std::uint64_t seed = 0;
    double perturbation_sd = 0.0;
    long max_steps = 100000;
    std::vector<int> fixed_rules;
    bool include_never = true;
    bool redraw_per_run = true;
};

struct SensitivityConfig {
    std::vector<int> t_values;
    double d_min = 5.0;
    double d_max = 40.0;
    double d_step = 0.01;
    std::optional<double> c; // defaults to penalties.c
};

struct OutputConfig {
    std::string dir = "out";
    bool per_run_records = false;
};

struct RunConfig {
    std::optional<TransitionModel> model;
    std::optional<PenaltyParams> penalties;
    PlannerConfig planner;
    SimulationConfig simulation;
    SensitivityConfig sensitivity;
    OutputConfig output;
};

namespace detail {

struct RawEntry {
    std::string section;
    std::string key;
    std::string value;
    int line;
    int column;
};

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<RawEntry> tokenize_config(const std::string& text) {
    std::vector<RawEntry> entries;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("unterminated section header", line_no,
                                  static_cast<int>(line.find('[')) + 1);
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", line_no, 1);
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line_no, 1);
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("missing key before '='", line_no, 1);
        if (section.empty())
            throw ConfigError("entry '" + key + "' appears before any [section]", line_no, 1);
        entries.push_back({section, key, trim(line.substr(eq + 1)), line_no,
                           static_cast<int>(eq) + 2});
    }
    return entries;
}

class FieldErrors {
  public:
    void add(const std::string& path, const std::string& what) {
        messages_.push_back(path + ": " + what);
    }
    void raise_if_any() const {
        if (messages_.empty()) return;
        std::string joined;
        for (const auto& m : messages_) {
            if (!joined.empty()) joined += "; ";
            joined += m;
        }
        throw ConfigError(joined);
    }
    bool empty() const { return messages_.empty(); }

  private:
    std::vector<std::string> messages_;
};

inline std::vector<double> parse_doubles(const RawEntry& e, FieldErrors& errs,
                                         const std::string& path) {
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            errs.add(path, "'" + tok + "' is not a number (line " + std::to_string(e.line) + ")");
            return out;
        }
    }
    return out;
}

inline std::optional<double> parse_double(const RawEntry& e, FieldErrors& errs,
                                          const std::string& path) {
    auto v = parse_doubles(e, errs, path);
    if (v.size() != 1) {
        errs.add(path, "expected a single number");
        return std::nullopt;
    }
    return v[0];
}

inline std::optional<long> parse_long(const RawEntry& e, FieldErrors& errs,
                                      const std::string& path) {
    auto v = parse_double(e, errs, path);
    if (!v) return std::nullopt;
    if (*v != static_cast<double>(static_cast<long>(*v))) {
        errs.add(path, "expected an integer");
        return std::nullopt;
    }
    return static_cast<long>(*v);
}

inline std::optional<bool> parse_bool(const RawEntry& e, FieldErrors& errs,
                                      const std::string& path) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    errs.add(path, "expected true or false");
    return std::nullopt;
}

} // namespace detail

inline RunConfig load_config(const std::string& text) {
    auto entries = detail::tokenize_config(text);
    detail::FieldErrors errs;
    RunConfig cfg;

    std::vector<double> model_p, model_p_ic;
    std::optional<double> pen_d, pen_c;
    double pen_c_tilde = 0.0;

    for (const auto& e : entries) {
        const std::string path = e.section + "." + e.key;
        if (e.section == "model") {
            if (e.key == "p") model_p = detail::parse_doubles(e, errs, path);
            else if (e.key == "p_ic") model_p_ic = detail::parse_doubles(e, errs, path);
            else errs.add(path, "unknown key");
        } else if (e.section == "penalties") {
            if (e.key == "d") pen_d = detail::parse_double(e, errs, path);
            else if (e.key == "c") pen_c = detail::parse_double(e, errs, path);
            else if (e.key == "c_tilde") {
                if (auto v = detail::parse_double(e, errs, path)) pen_c_tilde = *v;
            } else errs.add(path, "unknown key");
        } else if (e.section == "planner") {
            if (e.key == "horizon") {
                if (auto v = detail::parse_long(e, errs, path)) cfg.planner.horizon = static_cast<int>(*v);
            } else if (e.key == "convergence_window") {
                if (auto v = detail::parse_long(e, errs, path))
                    cfg.planner.convergence_window = static_cast<int>(*v);
            } else errs.add(path, "unknown key");
        } else if (e.section == "simulation") {
            if (e.key == "runs") {
                if (auto v = detail::parse_long(e, errs, path)) cfg.simulation.runs = *v;
            } else if (e.key == "seed") {
                if (auto v = detail::parse_long(e, errs, path))
                    cfg.simulation.seed = static_cast<std::uint64_t>(*v);
            } else if (e.key == "perturbation_sd") {
                if (auto v = detail::parse_double(e, errs, path)) cfg.simulation.perturbation_sd = *v;
            } else if (e.key == "max_steps") {
                if (auto v = detail::parse_long(e, errs, path)) cfg.simulation.max_steps = *v;
            } else if (e.key == "fixed_rules") {
                for (double v : detail::parse_doubles(e, errs, path))
                    cfg.simulation.fixed_rules.push_back(static_cast<int>(v));
            } else if (e.key == "include_never") {
                if (auto v = detail::parse_bool(e, errs, path)) cfg.simulation.include_never = *v;
            } else if (e.key == "redraw_per_run") {
                if (auto v = detail::parse_bool(e, errs, path)) cfg.simulation.redraw_per_run = *v;
            } else errs.add(path, "unknown key");
        } else if (e.section == "sensitivity") {
            if (e.key == "t_values") {
                for (double v : detail::parse_doubles(e, errs, path))
                    cfg.sensitivity.t_values.push_back(static_cast<int>(v));
            } else if (e.key == "d_min") {
                if (auto v = detail::parse_double(e, errs, path)) cfg.sensitivity.d_min = *v;
            } else if (e.key == "d_max") {
                if (auto v = detail::parse_double(e, errs, path)) cfg.sensitivity.d_max = *v;
            } else if (e.key == "d_step") {
                if (auto v = detail::parse_double(e, errs, path)) cfg.sensitivity.d_step = *v;
            } else if (e.key == "c") {
                if (auto v = detail::parse_double(e, errs, path)) cfg.sensitivity.c = *v;
            } else errs.add(path, "unknown key");
        } else if (e.section == "output") {
            if (e.key == "dir") cfg.output.dir = e.value;
            else if (e.key == "per_run_records") {
                if (auto v = detail::parse_bool(e, errs, path)) cfg.output.per_run_records = *v;
            } else errs.add(path, "unknown key");
        } else {
            errs.add(e.section, "unknown section");
        }
    }

    if (!model_p.empty() || !model_p_ic.empty()) {
        if (model_p.size() != 12)
            errs.add("model.p", "expected 12 probabilities, got " + std::to_string(model_p.size()));
        if (model_p_ic.size() != 3)
            errs.add("model.p_ic",
                     "expected 3 probabilities, got " + std::to_string(model_p_ic.size()));
        if (errs.empty()) {
            cfg.model = TransitionModel::from_rows(std::span<const double, 12>(model_p),
                                                   std::span<const double, 3>(model_p_ic));
        }
    }

    if (pen_d || pen_c || pen_c_tilde != 0.0) {
        if (!pen_d) errs.add("penalties.d", "required when the penalties block is present");
        if (!pen_c) errs.add("penalties.c", "required when the penalties block is present");
        if (pen_d && pen_c) {
            try {
                cfg.penalties.emplace(*pen_d, *pen_c, pen_c_tilde);
            } catch (const std::invalid_argument& ex) {
                errs.add("penalties", ex.what());
            }
        }
    }

    if (cfg.planner.horizon < 1) errs.add("planner.horizon", "must be positive");
    if (cfg.planner.convergence_window < 1) errs.add("planner.convergence_window", "must be positive");
    if (cfg.simulation.runs < 1) errs.add("simulation.runs", "must be at least 1");
    if (cfg.simulation.perturbation_sd < 0.0) errs.add("simulation.perturbation_sd", "must be >= 0");
    if (cfg.simulation.max_steps < 1) errs.add("simulation.max_steps", "must be positive");
    for (int r : cfg.simulation.fixed_rules)
        if (r < 1) errs.add("simulation.fixed_rules", "inspection times must be >= 1");
    if (cfg.sensitivity.d_step <= 0.0) errs.add("sensitivity.d_step", "must be positive");
    if (cfg.sensitivity.d_max < cfg.sensitivity.d_min)
        errs.add("sensitivity.d_max", "must be >= d_min");
    for (int t : cfg.sensitivity.t_values)
        if (t < 1) errs.add("sensitivity.t_values", "periods must be >= 1");

    errs.raise_if_any();
    return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

// Canonical serialization with all defaults applied. Reloading the result
// reproduces the same effective configuration. The output block can be
// left out to obtain the computation inputs alone (what the run manifest
// hashes; where reports land does not change what gets computed).
inline std::string serialize_config(const RunConfig& cfg, bool include_output = true) {
    std::ostringstream os;
    os.precision(17);
    if (cfg.model) {
        const auto& m = *cfg.model;
        os << "[model]\np =";
        for (int r = 0; r < 3; ++r)
            for (int c = r; c < 5; ++c) os << " " << m.p[r][c];
        os << "\np_ic = " << m.p_ic[0] << " " << m.p_ic[1] << " " << m.p_ic[2] << "\n\n";
    }
    if (cfg.penalties) {
        os << "[penalties]\nd = " << cfg.penalties->d << "\nc = " << cfg.penalties->c
           << "\nc_tilde = " << cfg.penalties->c_tilde << "\n\n";
    }
    os << "[planner]\nhorizon = " << cfg.planner.horizon
       << "\nconvergence_window = " << cfg.planner.convergence_window << "\n\n";
    os << "[simulation]\nruns = " << cfg.simulation.runs << "\nseed = " << cfg.simulation.seed
       << "\nperturbation_sd = " << cfg.simulation.perturbation_sd
       << "\nmax_steps = " << cfg.simulation.max_steps;
    if (!cfg.simulation.fixed_rules.empty()) {
        os << "\nfixed_rules =";
        for (int r : cfg.simulation.fixed_rules) os << " " << r;
    }
    os << "\ninclude_never = " << (cfg.simulation.include_never ? "true" : "false")
       << "\nredraw_per_run = " << (cfg.simulation.redraw_per_run ? "true" : "false") << "\n\n";
    os << "[sensitivity]\n";
    if (!cfg.sensitivity.t_values.empty()) {
        os << "t_values =";
        for (int t : cfg.sensitivity.t_values) os << " " << t;
        os << "\n";
    }
    os << "d_min = " << cfg.sensitivity.d_min << "\nd_max = " << cfg.sensitivity.d_max
       << "\nd_step = " << cfg.sensitivity.d_step << "\n";
    if (cfg.sensitivity.c) os << "c = " << *cfg.sensitivity.c << "\n";
    if (include_output) {
        os << "\n[output]\ndir = " << cfg.output.dir
           << "\nper_run_records = " << (cfg.output.per_run_records ? "true" : "false") << "\n";
    }
    return os.str();
}

} // namespace insp
