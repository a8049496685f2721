#include "permsync/permsync.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include "core/baselines.hpp"
#include "core/errors.hpp"
#include "core/experiment.hpp"
#include "core/matchings.hpp"
#include "core/metrics.hpp"
#include "core/pipeline.hpp"
#include "core/pmx.hpp"
#include "core/synthetic.hpp"

struct ps_matchings {
    permsync::PairwiseMatchings value;
};

struct ps_universe {
    permsync::UniverseAssignment value;
};

namespace {

thread_local std::string g_last_error;

ps_status status_of(permsync::ErrorKind kind) {
    switch (kind) {
        case permsync::ErrorKind::InvalidArgument: return PS_ERR_INVALID_ARGUMENT;
        case permsync::ErrorKind::Parse: return PS_ERR_PARSE;
        case permsync::ErrorKind::Validation: return PS_ERR_VALIDATION;
        case permsync::ErrorKind::Solver: return PS_ERR_SOLVER;
        case permsync::ErrorKind::Io: return PS_ERR_IO;
    }
    return PS_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
ps_status guarded(Fn&& fn) {
    try {
        fn();
        return PS_OK;
    } catch (const permsync::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PS_ERR_SOLVER;
    }
}

ps_status invalid(const std::string& message) {
    g_last_error = message;
    return PS_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out != nullptr) std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* ps_version(void) { return "0.1.0"; }

const char* ps_last_error(void) { return g_last_error.c_str(); }

void ps_string_free(char* text) { std::free(text); }

ps_status ps_matchings_load(const char* path, ps_matchings** out) {
    if (path == nullptr || out == nullptr) return invalid("null argument to ps_matchings_load");
    return guarded([&] { *out = new ps_matchings{permsync::load_pmx(path)}; });
}

ps_status ps_matchings_loads(const char* text, ps_matchings** out) {
    if (text == nullptr || out == nullptr) return invalid("null argument to ps_matchings_loads");
    return guarded([&] { *out = new ps_matchings{permsync::parse_pmx(text)}; });
}

ps_status ps_matchings_save(const ps_matchings* w, const char* path) {
    if (w == nullptr || path == nullptr) return invalid("null argument to ps_matchings_save");
    return guarded([&] { permsync::save_pmx(w->value, path); });
}

ps_status ps_matchings_to_string(const ps_matchings* w, char** out) {
    if (w == nullptr || out == nullptr) return invalid("null argument to ps_matchings_to_string");
    return guarded([&] {
        *out = copy_string(permsync::serialise_pmx(w->value));
        if (*out == nullptr) permsync::fail(permsync::ErrorKind::Io, "out of memory");
    });
}

void ps_matchings_free(ps_matchings* w) { delete w; }

ps_status ps_matchings_validate(const ps_matchings* w) {
    if (w == nullptr) return invalid("null argument to ps_matchings_validate");
    return guarded([&] {
        const permsync::ValidationResult result = permsync::validate_pairwise(w->value);
        if (!result.ok) permsync::fail(permsync::ErrorKind::Validation, result.message);
    });
}

int ps_matchings_is_cycle_consistent(const ps_matchings* w) {
    if (w == nullptr) return -1;
    bool consistent = false;
    const ps_status status = guarded([&] {
        const permsync::ValidationResult result = permsync::validate_pairwise(w->value);
        if (!result.ok) permsync::fail(permsync::ErrorKind::Validation, result.message);
        consistent = permsync::is_cycle_consistent(w->value);
    });
    if (status != PS_OK) return -1;
    return consistent ? 1 : 0;
}

int ps_matchings_num_objects(const ps_matchings* w) {
    return w == nullptr ? -1 : w->value.k();
}

long long ps_matchings_num_features(const ps_matchings* w) {
    return w == nullptr ? -1 : w->value.m();
}

int ps_matchings_object_size(const ps_matchings* w, int object) {
    if (w == nullptr || object < 0 || object >= w->value.k()) return -1;
    return w->value.structure().sizes[object];
}

long long ps_matchings_num_matchings(const ps_matchings* w) {
    return w == nullptr ? -1 : static_cast<long long>(w->value.num_matchings());
}

ps_status ps_generate(int k, int d, double rho, double sigma, unsigned long long seed,
                      ps_matchings** w, ps_matchings** w_gt) {
    if (w == nullptr) return invalid("null output argument to ps_generate");
    return guarded([&] {
        permsync::GenParams params;
        params.k = k;
        params.d = d;
        params.rho = rho;
        params.sigma = sigma;
        params.seed = seed;
        permsync::SyntheticInstance instance = permsync::generate(params);
        *w = new ps_matchings{std::move(instance.w)};
        if (w_gt != nullptr) *w_gt = new ps_matchings{std::move(instance.w_gt)};
    });
}

ps_status ps_sync(const ps_matchings* w, const char* method, int d, double theta, double tau,
                  unsigned long long seed, ps_matchings** w_sync, ps_universe** u_out,
                  ps_report* report) {
    if (w == nullptr || method == nullptr || w_sync == nullptr) {
        return invalid("null argument to ps_sync");
    }
    const std::string name = method;
    if (name != "nmfsync" && name != "spectral" && name != "matcheig") {
        return invalid("unknown method '" + name + "': expected nmfsync, spectral or matcheig");
    }
    return guarded([&] {
        permsync::PairwiseMatchings out(w->value.structure());
        permsync::UniverseAssignment u;
        bool has_u = false;
        ps_report r{};

        if (name == "nmfsync") {
            permsync::SyncConfig cfg;
            cfg.d = d;
            cfg.theta = theta;
            cfg.seed = seed;
            permsync::SyncResult result = permsync::nmfsync(w->value, cfg);
            out = std::move(result.w_sync);
            u = std::move(result.u);
            has_u = true;
            r.t_eig = result.diagnostics.t_eig;
            r.t_rotation = result.diagnostics.t_rotation;
            r.t_nmf = result.diagnostics.t_nmf;
            r.t_project = result.diagnostics.t_project;
            r.t_total = result.diagnostics.t_total;
            r.nmf_iterations = result.diagnostics.nmf_iterations;
            if (!result.diagnostics.nmf_objectives.empty()) {
                r.objective_initial = result.diagnostics.nmf_objectives.front();
                r.objective_final = result.diagnostics.nmf_objectives.back();
            }
        } else if (name == "spectral") {
            permsync::EigOptions eig;
            eig.seed = seed;
            permsync::BaselineResult result = permsync::spectral_greedy(w->value, d, eig);
            out = std::move(result.w_sync);
            u = std::move(result.u);
            has_u = true;
        } else {
            permsync::EigOptions eig;
            eig.seed = seed;
            out = permsync::matcheig(w->value, d, tau, eig);
        }

        r.cycle_error = permsync::cycle_error(out);
        r.num_matchings = static_cast<long long>(out.num_matchings());
        if (report != nullptr) *report = r;
        if (u_out != nullptr) *u_out = has_u ? new ps_universe{std::move(u)} : nullptr;
        *w_sync = new ps_matchings{std::move(out)};
    });
}

int ps_universe_size(const ps_universe* u) { return u == nullptr ? -1 : u->value.d; }

int ps_universe_column(const ps_universe* u, int object, int feature) {
    if (u == nullptr || object < 0 || object >= u->value.structure.k) return -1;
    if (feature < 0 || feature >= u->value.structure.sizes[object]) return -1;
    return u->value.column_of[object][feature];
}

void ps_universe_free(ps_universe* u) { delete u; }

ps_status ps_cycle_error(const ps_matchings* w, double* out) {
    if (w == nullptr || out == nullptr) return invalid("null argument to ps_cycle_error");
    return guarded([&] { *out = permsync::cycle_error(w->value); });
}

ps_status ps_gt_error(const ps_matchings* w, const ps_matchings* gt, double* out) {
    if (w == nullptr || gt == nullptr || out == nullptr) {
        return invalid("null argument to ps_gt_error");
    }
    return guarded([&] { *out = permsync::gt_error(w->value, gt->value); });
}

ps_status ps_pr_f(const ps_matchings* w, const ps_matchings* gt, double* precision, double* recall,
                  double* fscore, long long* num_matchings) {
    if (w == nullptr || gt == nullptr) return invalid("null argument to ps_pr_f");
    return guarded([&] {
        const permsync::PrfResult result = permsync::pr_f(w->value, gt->value);
        if (precision != nullptr) *precision = result.precision;
        if (recall != nullptr) *recall = result.recall;
        if (fscore != nullptr) *fscore = result.fscore;
        if (num_matchings != nullptr) *num_matchings = result.num_matchings;
    });
}

ps_status ps_experiment_run(const char* protocol_text, char** csv_out) {
    if (protocol_text == nullptr || csv_out == nullptr) {
        return invalid("null argument to ps_experiment_run");
    }
    return guarded([&] {
        const permsync::Protocol protocol = permsync::parse_protocol(protocol_text);
        const std::string csv = permsync::to_csv(permsync::run_experiment(protocol));
        *csv_out = copy_string(csv);
        if (*csv_out == nullptr) permsync::fail(permsync::ErrorKind::Io, "out of memory");
    });
}

}  // extern "C"
