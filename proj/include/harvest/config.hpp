#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harvest/grid.hpp"
#include "harvest/model.hpp"

namespace harvest {

enum class RunMode { eigen, state, adjoint, optimize, oracle, verify, wellposed };

std::string to_string(RunMode mode);
RunMode parse_mode(const std::string& text);

/// One run of the CLI: model constants, grid, mode and numeric options.
/// Every field has a default (the canonical desk-scale configuration);
/// parse_config rejects unknown keys.
struct RunConfig {
    ModelParams params;  // lambda=500, K=20, c=0.5, q=1, H=0.3, B1=1, B2=2

    int dim = 1;
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int nx = 257;
    int ny = 33;  // used only when dim = 2

    RunMode mode = RunMode::optimize;

    double h_const = -1.0;  // constant control for state/adjoint modes; < 0 means H

    // sweep options
    double omega = 0.5;
    double sweep_tol = 1e-9;
    int sweep_max_iters = 500;
    std::string sweep_start = "cap";  // zero | cap | half | random

    // state solver options
    double state_tol = 1e-11;
    int state_max_iters = 100000;
    bool newton_polish = true;

    // eigen options
    double eigen_tol = 1e-11;
    int eigen_max_iters = 100000;

    // oracle mode
    int oracle_partitions = 3;
    std::vector<double> oracle_levels;  // empty means {0, H/2, H}

    // optimize mode may additionally sweep B2 over this list
    std::vector<double> b2_sweep;

    std::string out_dir = "out";
    unsigned long long seed = 0;

    GridSpec grid() const;
    double control_level() const { return h_const < 0.0 ? params.H : h_const; }
    std::vector<double> levels_or_default() const;
};

/// Parses a flat `key = value` document ('#' starts a comment; blank lines
/// ignored). Unknown keys throw UnknownKey, unparsable values TypeMismatch,
/// out-of-range values ConstraintViolation naming the key. The c < 2(1-H)
/// bound is enforced only in wellposed mode. mode_override, when set, wins
/// over a `mode` key in the document (the CLI subcommand).
RunConfig parse_config(const std::string& text,
                       std::optional<RunMode> mode_override = std::nullopt);

}  // namespace harvest
