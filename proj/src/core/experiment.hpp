#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace permsync {

/// Declarative sweep description. One parameter varies over a grid; the rest
/// stay fixed. `d` is the generator's true universe size, `d_estimate` what
/// the methods are told (defaulting to `d`; a sweep over d moves only the
/// estimate, so the generated instances stay comparable).
struct Protocol {
    std::string sweep;          // one of: k, rho, sigma, d, theta
    std::vector<double> grid;
    std::vector<std::string> methods;  // of: nmfsync, spectral, matcheig, input
    int trials = 100;
    std::uint64_t seed = 0;

    int k = 10;
    int d = 20;
    double rho = 0.7;
    double sigma = 0.2;
    double theta = 0.0;
    int d_estimate = 0;  // 0 = follow d
    double tau = 0.5;
};

/// Parses the key=value protocol format. Lines hold `key = value` with `#`
/// comments; list values are bracketed or comma/space separated. Unknown keys
/// and out-of-range values fail with the offending key named.
Protocol parse_protocol(const std::string& text);

struct ExperimentRow {
    std::string sweep_param;
    double value = 0.0;
    std::string method;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    int trials = 0;
};

/// Runs every method at every grid point over independently seeded trials and
/// aggregates cycle_error, gt_error, fscore and num_matchings. A trial whose
/// solver fails is kept out of the averages and surfaces as a `failed_trials`
/// row for its method instead of disappearing.
std::vector<ExperimentRow> run_experiment(const Protocol& protocol);

/// Rows as CSV with the fixed column order
/// sweep_param,value,method,metric,mean,stddev,trials, sorted by
/// (value, method, metric) so outputs diff cleanly.
std::string to_csv(const std::vector<ExperimentRow>& rows);

}  // namespace permsync
