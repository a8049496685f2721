#include "core/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "core/baselines.hpp"
#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/parallel.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"
#include "core/synthetic.hpp"

namespace permsync {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    fail(ErrorKind::Parse, "protocol key '" + key + "': " + why);
}

double parse_number(const std::string& key, const std::string& token) {
    try {
        std::size_t used = 0;
        const double value = std::stod(token, &used);
        if (used != token.size() || !std::isfinite(value)) bad_key(key, "bad number '" + token + "'");
        return value;
    } catch (const Error&) {
        throw;
    } catch (...) {
        bad_key(key, "bad number '" + token + "'");
    }
}

int parse_int(const std::string& key, const std::string& token) {
    const double value = parse_number(key, token);
    const int as_int = static_cast<int>(std::llround(value));
    if (static_cast<double>(as_int) != value) bad_key(key, "expected an integer, got '" + token + "'");
    return as_int;
}

std::vector<std::string> split_list(std::string value) {
    if (!value.empty() && value.front() == '[') {
        if (value.back() != ']') return {value};  // caller reports the key
        value = value.substr(1, value.size() - 2);
    }
    for (char& ch : value) {
        if (ch == ',') ch = ' ';
    }
    std::vector<std::string> items;
    std::istringstream in(value);
    std::string item;
    while (in >> item) {
        if (item.size() >= 2 && (item.front() == '"' || item.front() == '\'') &&
            item.back() == item.front()) {
            item = item.substr(1, item.size() - 2);
        }
        items.push_back(item);
    }
    return items;
}

std::string strip_quotes(std::string value) {
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
        return value.substr(1, value.size() - 2);
    }
    return value;
}

void check_grid(const Protocol& p) {
    for (const double value : p.grid) {
        if (p.sweep == "k") {
            if (value != std::floor(value) || value < 2) bad_key("grid", "k values must be integers >= 2");
        } else if (p.sweep == "d") {
            if (value != std::floor(value) || value < 1) bad_key("grid", "d values must be integers >= 1");
        } else if (p.sweep == "rho" || p.sweep == "sigma") {
            if (value < 0.0 || value > 1.0) bad_key("grid", p.sweep + " values must lie in [0, 1]");
        } else if (value < 0.0) {
            bad_key("grid", "theta values must be non-negative");
        }
    }
}

constexpr std::array<const char*, 4> kMetrics = {"cycle_error", "gt_error", "fscore",
                                                 "num_matchings"};

struct TrialOutcome {
    std::optional<std::array<double, 4>> metrics;  // empty = failed
};

std::array<double, 4> evaluate(const PairwiseMatchings& out, const SyntheticInstance& instance) {
    const PrfResult prf = pr_f(out, instance.w_gt);
    return {cycle_error(out), gt_error(out, instance.w_gt), prf.fscore,
            static_cast<double>(prf.num_matchings)};
}

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

}  // namespace

Protocol parse_protocol(const std::string& text) {
    Protocol p;
    bool saw_sweep = false;
    bool saw_grid = false;
    bool saw_methods = false;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::Parse, "protocol line '" + line + "' is not of the form key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(ErrorKind::Parse, "protocol line '" + line + "' has an empty key");
        if (value.empty()) bad_key(key, "empty value");

        if (key == "sweep") {
            p.sweep = strip_quotes(value);
            saw_sweep = true;
        } else if (key == "grid") {
            p.grid.clear();
            for (const std::string& item : split_list(value)) {
                p.grid.push_back(parse_number(key, item));
            }
            saw_grid = true;
        } else if (key == "methods") {
            p.methods = split_list(value);
            saw_methods = true;
        } else if (key == "trials") {
            p.trials = parse_int(key, value);
        } else if (key == "seed") {
            const double seed = parse_number(key, value);
            if (seed < 0 || seed != std::floor(seed)) bad_key(key, "expected a non-negative integer");
            p.seed = static_cast<std::uint64_t>(seed);
        } else if (key == "k") {
            p.k = parse_int(key, value);
        } else if (key == "d") {
            p.d = parse_int(key, value);
        } else if (key == "rho") {
            p.rho = parse_number(key, value);
        } else if (key == "sigma") {
            p.sigma = parse_number(key, value);
        } else if (key == "theta") {
            p.theta = parse_number(key, value);
        } else if (key == "d_estimate") {
            p.d_estimate = parse_int(key, value);
        } else if (key == "tau") {
            p.tau = parse_number(key, value);
        } else {
            fail(ErrorKind::Parse, "unknown protocol key '" + key + "'");
        }
    }

    if (!saw_sweep) fail(ErrorKind::Parse, "protocol key 'sweep' is required");
    if (p.sweep != "k" && p.sweep != "rho" && p.sweep != "sigma" && p.sweep != "d" &&
        p.sweep != "theta") {
        bad_key("sweep", "must be one of k, rho, sigma, d, theta");
    }
    if (!saw_grid || p.grid.empty()) fail(ErrorKind::Parse, "protocol key 'grid' must list at least one value");
    if (!saw_methods || p.methods.empty()) {
        fail(ErrorKind::Parse, "protocol key 'methods' must list at least one method");
    }
    for (const std::string& method : p.methods) {
        if (method != "nmfsync" && method != "spectral" && method != "matcheig" &&
            method != "input") {
            bad_key("methods", "unknown method '" + method + "'");
        }
    }
    if (p.trials < 1) bad_key("trials", "must be at least 1");
    if (p.k < 2) bad_key("k", "must be at least 2");
    if (p.d < 1) bad_key("d", "must be at least 1");
    if (p.rho < 0.0 || p.rho > 1.0) bad_key("rho", "must lie in [0, 1]");
    if (p.sigma < 0.0 || p.sigma > 1.0) bad_key("sigma", "must lie in [0, 1]");
    if (p.theta < 0.0) bad_key("theta", "must be non-negative");
    if (p.d_estimate < 0) bad_key("d_estimate", "must be positive (or 0 to follow d)");
    check_grid(p);
    return p;
}

std::vector<ExperimentRow> run_experiment(const Protocol& protocol) {
    std::vector<ExperimentRow> rows;
    for (std::size_t point = 0; point < protocol.grid.size(); ++point) {
        const double value = protocol.grid[point];

        GenParams params;
        params.k = protocol.sweep == "k" ? static_cast<int>(value) : protocol.k;
        params.d = protocol.d;
        params.rho = protocol.sweep == "rho" ? value : protocol.rho;
        params.sigma = protocol.sweep == "sigma" ? value : protocol.sigma;
        const double theta = protocol.sweep == "theta" ? value : protocol.theta;
        int estimate = protocol.d_estimate > 0 ? protocol.d_estimate : protocol.d;
        if (protocol.sweep == "d") estimate = static_cast<int>(value);

        std::vector<std::vector<TrialOutcome>> outcomes(
            protocol.methods.size(), std::vector<TrialOutcome>(protocol.trials));
        parallel_for(protocol.trials, [&](int trial) {
            GenParams trial_params = params;
            // Seeds depend on the trial only, so grid points that share the
            // generator parameters (theta and d sweeps) run on paired
            // instances instead of resampled ones.
            trial_params.seed =
                Rng::derive(protocol.seed, 0x7261697274ULL, static_cast<std::uint64_t>(trial));
            const SyntheticInstance instance = generate(trial_params);
            for (std::size_t mi = 0; mi < protocol.methods.size(); ++mi) {
                const std::string& method = protocol.methods[mi];
                try {
                    if (method == "nmfsync") {
                        SyncConfig cfg;
                        cfg.d = estimate;
                        cfg.theta = theta;
                        cfg.seed = trial_params.seed;
                        outcomes[mi][trial].metrics = evaluate(nmfsync(instance.w, cfg).w_sync, instance);
                    } else if (method == "spectral") {
                        EigOptions eig;
                        eig.seed = trial_params.seed;
                        outcomes[mi][trial].metrics =
                            evaluate(spectral_greedy(instance.w, estimate, eig).w_sync, instance);
                    } else if (method == "matcheig") {
                        EigOptions eig;
                        eig.seed = trial_params.seed;
                        outcomes[mi][trial].metrics =
                            evaluate(matcheig(instance.w, estimate, protocol.tau, eig), instance);
                    } else {
                        outcomes[mi][trial].metrics = evaluate(instance.w, instance);
                    }
                } catch (const Error&) {
                    outcomes[mi][trial].metrics.reset();
                }
            }
        });

        for (std::size_t mi = 0; mi < protocol.methods.size(); ++mi) {
            int good = 0;
            std::array<double, 4> sums{};
            for (const TrialOutcome& outcome : outcomes[mi]) {
                if (!outcome.metrics) continue;
                ++good;
                for (std::size_t metric = 0; metric < kMetrics.size(); ++metric) {
                    sums[metric] += (*outcome.metrics)[metric];
                }
            }
            for (std::size_t metric = 0; good > 0 && metric < kMetrics.size(); ++metric) {
                const double mean = sums[metric] / good;
                double varsum = 0.0;
                for (const TrialOutcome& outcome : outcomes[mi]) {
                    if (!outcome.metrics) continue;
                    const double diff = (*outcome.metrics)[metric] - mean;
                    varsum += diff * diff;
                }
                ExperimentRow row;
                row.sweep_param = protocol.sweep;
                row.value = value;
                row.method = protocol.methods[mi];
                row.metric = kMetrics[metric];
                row.mean = mean;
                row.stddev = good > 1 ? std::sqrt(varsum / (good - 1)) : 0.0;
                row.trials = good;
                rows.push_back(row);
            }
            if (good < protocol.trials) {
                ExperimentRow row;
                row.sweep_param = protocol.sweep;
                row.value = value;
                row.method = protocol.methods[mi];
                row.metric = "failed_trials";
                row.mean = static_cast<double>(protocol.trials - good);
                row.stddev = 0.0;
                row.trials = protocol.trials;
                rows.push_back(row);
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.method != b.method) return a.method < b.method;
        return a.metric < b.metric;
    });
    return rows;
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
    std::string csv = "sweep_param,value,method,metric,mean,stddev,trials\n";
    for (const ExperimentRow& row : rows) {
        csv += row.sweep_param + "," + format_number(row.value) + "," + row.method + "," +
               row.metric + "," + format_number(row.mean) + "," + format_number(row.stddev) + "," +
               std::to_string(row.trials) + "\n";
    }
    return csv;
}

}  // namespace permsync
