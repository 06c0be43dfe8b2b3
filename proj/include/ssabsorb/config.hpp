#pragma once

#include <string>
#include <vector>

#include "ssabsorb/levy_model.hpp"
#include "ssabsorb/mc_oracle.hpp"

namespace ssabsorb {

// Evaluation grid: `count` points from start to stop, linearly or
// log-spaced (endpoints included; count == 1 yields just `start`).
struct grid_spec {
    double start = 1.0;
    double stop = 1.0;
    long long count = 1;
    bool log_spacing = false;

    void validate() const;
    std::vector<double> values() const;
};

// Parsed run configuration: model plus the per-command option blocks.
// The command itself comes from the CLI, not the file, so one file can
// drive several commands.
struct run_config {
    levy_model model;
    grid_spec grid;
    mc_config mc;
    int density_m = 0;      // highest derivative order for `density`
    double laplace_x = 1.0; // starting point for `laplace`
    exit_spec exit_s;
    bool has_exit = false;
};

// INI-style parser: sections [model], [model.jumps], [grid], [density],
// [laplace], [exit], [mc]; `#`/`;` comments; `key = value`.  Errors carry
// the 1-based line number of the offending entry.
run_config parse_config(const std::string& text);
run_config parse_config_file(const std::string& path);

// Shortest round-trip, locale-independent decimal formatting for CSV cells.
std::string format_double(double v);

}  // namespace ssabsorb
