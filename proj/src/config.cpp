#include "harvest/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace harvest {

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::eigen: return "eigen";
        case RunMode::state: return "state";
        case RunMode::adjoint: return "adjoint";
        case RunMode::optimize: return "optimize";
        case RunMode::oracle: return "oracle";
        case RunMode::verify: return "verify";
        case RunMode::wellposed: return "wellposed";
    }
    return "unknown";
}

RunMode parse_mode(const std::string& text) {
    if (text == "eigen") return RunMode::eigen;
    if (text == "state") return RunMode::state;
    if (text == "adjoint") return RunMode::adjoint;
    if (text == "optimize") return RunMode::optimize;
    if (text == "oracle") return RunMode::oracle;
    if (text == "verify") return RunMode::verify;
    if (text == "wellposed") return RunMode::wellposed;
    throw TypeMismatch("mode", text);
}

GridSpec RunConfig::grid() const {
    if (dim == 1) return GridSpec::interval(x_min, x_max, nx);
    return GridSpec::rectangle(x_min, x_max, nx, y_min, y_max, ny);
}

std::vector<double> RunConfig::levels_or_default() const {
    if (!oracle_levels.empty()) return oracle_levels;
    return {0.0, params.H / 2.0, params.H};
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw TypeMismatch(key, value);
    return v;
}

long parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw TypeMismatch(key, value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw TypeMismatch(key, value);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw TypeMismatch(key, value);
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw TypeMismatch(key, value);
    return out;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "lambda") cfg.params.lambda = parse_double(key, value);
    else if (key == "K") cfg.params.K = parse_double(key, value);
    else if (key == "c") cfg.params.c = parse_double(key, value);
    else if (key == "q") cfg.params.q = parse_double(key, value);
    else if (key == "H") cfg.params.H = parse_double(key, value);
    else if (key == "B1") cfg.params.B1 = parse_double(key, value);
    else if (key == "B2") cfg.params.B2 = parse_double(key, value);
    else if (key == "dim") cfg.dim = static_cast<int>(parse_int(key, value));
    else if (key == "x_min") cfg.x_min = parse_double(key, value);
    else if (key == "x_max") cfg.x_max = parse_double(key, value);
    else if (key == "y_min") cfg.y_min = parse_double(key, value);
    else if (key == "y_max") cfg.y_max = parse_double(key, value);
    else if (key == "nx") cfg.nx = static_cast<int>(parse_int(key, value));
    else if (key == "ny") cfg.ny = static_cast<int>(parse_int(key, value));
    else if (key == "mode") cfg.mode = parse_mode(value);
    else if (key == "h_const") cfg.h_const = parse_double(key, value);
    else if (key == "omega") cfg.omega = parse_double(key, value);
    else if (key == "sweep_tol") cfg.sweep_tol = parse_double(key, value);
    else if (key == "sweep_max_iters") cfg.sweep_max_iters = static_cast<int>(parse_int(key, value));
    else if (key == "sweep_start") cfg.sweep_start = value;
    else if (key == "state_tol") cfg.state_tol = parse_double(key, value);
    else if (key == "state_max_iters") cfg.state_max_iters = static_cast<int>(parse_int(key, value));
    else if (key == "newton_polish") cfg.newton_polish = parse_bool(key, value);
    else if (key == "eigen_tol") cfg.eigen_tol = parse_double(key, value);
    else if (key == "eigen_max_iters") cfg.eigen_max_iters = static_cast<int>(parse_int(key, value));
    else if (key == "oracle_partitions") cfg.oracle_partitions = static_cast<int>(parse_int(key, value));
    else if (key == "oracle_levels") cfg.oracle_levels = parse_list(key, value);
    else if (key == "b2_sweep") cfg.b2_sweep = parse_list(key, value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = static_cast<unsigned long long>(parse_int(key, value));
    else throw UnknownKey(key);
}

void validate(const RunConfig& cfg) {
    cfg.params.validate();

    if (cfg.dim != 1 && cfg.dim != 2)
        throw ConstraintViolation("dim", "must be 1 or 2");
    if (!(cfg.x_min < cfg.x_max))
        throw ConstraintViolation("x_max", "need x_min < x_max");
    if (cfg.nx < 3)
        throw ConstraintViolation("nx", "need at least 3 nodes");
    if (cfg.dim == 2) {
        if (!(cfg.y_min < cfg.y_max))
            throw ConstraintViolation("y_max", "need y_min < y_max");
        if (cfg.ny < 3)
            throw ConstraintViolation("ny", "need at least 3 nodes");
    }

    if (cfg.h_const >= 0.0 && cfg.h_const > cfg.params.H)
        throw ConstraintViolation("h_const", "must lie in [0, H]");
    if (!(cfg.omega > 0.0 && cfg.omega <= 1.0))
        throw ConstraintViolation("omega", "must lie in (0, 1]");
    if (!(cfg.sweep_tol > 0.0))
        throw ConstraintViolation("sweep_tol", "must be > 0");
    if (!(cfg.state_tol > 0.0))
        throw ConstraintViolation("state_tol", "must be > 0");
    if (!(cfg.eigen_tol > 0.0))
        throw ConstraintViolation("eigen_tol", "must be > 0");
    if (cfg.sweep_max_iters < 1)
        throw ConstraintViolation("sweep_max_iters", "must be >= 1");
    if (cfg.state_max_iters < 1)
        throw ConstraintViolation("state_max_iters", "must be >= 1");
    if (cfg.eigen_max_iters < 1)
        throw ConstraintViolation("eigen_max_iters", "must be >= 1");
    if (cfg.sweep_start != "zero" && cfg.sweep_start != "cap" &&
        cfg.sweep_start != "half" && cfg.sweep_start != "random")
        throw ConstraintViolation("sweep_start", "must be zero|cap|half|random");
    if (cfg.oracle_partitions < 1)
        throw ConstraintViolation("oracle_partitions", "must be >= 1");
    for (double lv : cfg.oracle_levels)
        if (lv < 0.0 || lv > cfg.params.H)
            throw ConstraintViolation("oracle_levels", "levels must lie in [0, H]");
    for (double b2 : cfg.b2_sweep)
        if (!(b2 > 0.0))
            throw ConstraintViolation("b2_sweep", "entries must be > 0");

    // The existence theory needs c < 2(1-H); the wellposedness mode treats a
    // violation as a configuration error instead of reporting flags.
    if (cfg.mode == RunMode::wellposed && !cfg.params.growth_admissible())
        throw ConstraintViolation("c", "c >= 2(1-H) is outside the wellposed regime");
}

}  // namespace

RunConfig parse_config(const std::string& text, std::optional<RunMode> mode_override) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        apply_key(cfg, key, value);
    }
    if (mode_override) cfg.mode = *mode_override;
    validate(cfg);
    return cfg;
}

}  // namespace harvest
