#include <cstring>
#include <string>

#include "doctest.h"
#include "permsync/permsync.h"

namespace {

struct MatchingsGuard {
    ps_matchings* value = nullptr;
    ~MatchingsGuard() { ps_matchings_free(value); }
};

struct UniverseGuard {
    ps_universe* value = nullptr;
    ~UniverseGuard() { ps_universe_free(value); }
};

std::string take_string(char* text) {
    std::string out = text ? text : "";
    ps_string_free(text);
    return out;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version reports something sensible") {
    const char* version = ps_version();
    REQUIRE(version != nullptr);
    CHECK(std::strlen(version) >= 5);
}

TEST_CASE("text round trip through the handle layer") {
    const char* text =
        "PMX 1\n"
        "3 2 2 2\n"
        "1 2 1 1\n"
        "1 3 1 2\n"
        "2 3 1 2\n";
    MatchingsGuard w;
    REQUIRE(ps_matchings_loads(text, &w.value) == PS_OK);
    CHECK(ps_matchings_num_objects(w.value) == 3);
    CHECK(ps_matchings_num_features(w.value) == 6);
    CHECK(ps_matchings_object_size(w.value, 1) == 2);
    CHECK(ps_matchings_num_matchings(w.value) == 3);
    CHECK(ps_matchings_validate(w.value) == PS_OK);
    CHECK(ps_matchings_is_cycle_consistent(w.value) == 1);

    char* serialised = nullptr;
    REQUIRE(ps_matchings_to_string(w.value, &serialised) == PS_OK);
    CHECK(take_string(serialised) == text);
}

TEST_CASE("parse failures set a message and return the parse status") {
    ps_matchings* w = nullptr;
    CHECK(ps_matchings_loads("PMX 9\n2 1 1\n", &w) == PS_ERR_PARSE);
    CHECK(w == nullptr);
    CHECK(std::string(ps_last_error()).find("version") != std::string::npos);

    CHECK(ps_matchings_loads(nullptr, &w) == PS_ERR_INVALID_ARGUMENT);
    CHECK(ps_matchings_loads("PMX 1\n2 1 1\n", nullptr) == PS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("io failures return the io status") {
    MatchingsGuard w;
    CHECK(ps_matchings_load("missing_file_for_capi.pmx", &w.value) == PS_ERR_IO);
    CHECK(std::strlen(ps_last_error()) > 0);
}

TEST_CASE("generation and metrics work end to end") {
    MatchingsGuard w, w_gt;
    REQUIRE(ps_generate(8, 10, 0.7, 0.3, 5, &w.value, &w_gt.value) == PS_OK);
    CHECK(ps_matchings_validate(w.value) == PS_OK);

    double cycle = -1.0;
    REQUIRE(ps_cycle_error(w_gt.value, &cycle) == PS_OK);
    CHECK(cycle == 0.0);

    double error = -1.0;
    REQUIRE(ps_gt_error(w.value, w_gt.value, &error) == PS_OK);
    CHECK(error > 0.0);

    double precision = 0.0, recall = 0.0, fscore = 0.0;
    long long matchings = 0;
    REQUIRE(ps_pr_f(w.value, w_gt.value, &precision, &recall, &fscore, &matchings) == PS_OK);
    CHECK(precision > 0.0);
    CHECK(precision <= 1.0);
    CHECK(recall > 0.0);
    CHECK(fscore > 0.0);
    CHECK(matchings > 0);

    CHECK(ps_generate(1, 10, 0.7, 0.3, 5, &w.value, &w_gt.value) ==
          PS_ERR_INVALID_ARGUMENT);
    CHECK(ps_generate(8, 10, 1.5, 0.3, 5, &w.value, &w_gt.value) ==
          PS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("synchronisation fills the report and output handles") {
    MatchingsGuard w, w_gt;
    REQUIRE(ps_generate(10, 12, 0.7, 0.2, 11, &w.value, &w_gt.value) == PS_OK);

    MatchingsGuard w_sync;
    UniverseGuard u;
    ps_report report;
    REQUIRE(ps_sync(w.value, "nmfsync", 12, 0.0, 0.5, 0, &w_sync.value, &u.value, &report) ==
            PS_OK);
    CHECK(report.cycle_error == 0.0);
    CHECK(report.num_matchings > 0);
    CHECK(report.nmf_iterations >= 1);
    CHECK(report.objective_final <= report.objective_initial);
    CHECK(report.t_total > 0.0);
    REQUIRE(u.value != nullptr);
    CHECK(ps_universe_size(u.value) >= 12);
    const int column = ps_universe_column(u.value, 0, 0);
    if (ps_matchings_object_size(w.value, 0) > 0) {
        CHECK(column >= 0);
        CHECK(column < ps_universe_size(u.value));
    }
    CHECK(ps_matchings_is_cycle_consistent(w_sync.value) == 1);

    MatchingsGuard spectral_sync;
    REQUIRE(ps_sync(w.value, "spectral", 12, 0.0, 0.5, 0, &spectral_sync.value, nullptr,
                    nullptr) == PS_OK);
    CHECK(ps_matchings_is_cycle_consistent(spectral_sync.value) == 1);

    MatchingsGuard matcheig_sync;
    ps_report matcheig_report;
    REQUIRE(ps_sync(w.value, "matcheig", 12, 0.0, 0.5, 0, &matcheig_sync.value, nullptr,
                    &matcheig_report) == PS_OK);
    CHECK(matcheig_report.num_matchings >= 0);

    MatchingsGuard bad;
    CHECK(ps_sync(w.value, "mystery", 12, 0.0, 0.5, 0, &bad.value, nullptr, nullptr) ==
          PS_ERR_INVALID_ARGUMENT);
    CHECK(ps_sync(nullptr, "nmfsync", 12, 0.0, 0.5, 0, &bad.value, nullptr, nullptr) ==
          PS_ERR_INVALID_ARGUMENT);
    CHECK(ps_sync(w.value, "nmfsync", 2, 0.0, 0.5, 0, &bad.value, nullptr, nullptr) ==
          PS_ERR_VALIDATION);
}

TEST_CASE("invalid inputs are rejected with the validation status") {
    MatchingsGuard w;
    REQUIRE(ps_matchings_loads("PMX 1\n2 1 2\n1 2 1 1\n1 2 1 2\n", &w.value) == PS_OK);
    CHECK(ps_matchings_validate(w.value) == PS_ERR_VALIDATION);
    CHECK(std::string(ps_last_error()).find("row-sum") != std::string::npos);
    CHECK(ps_matchings_is_cycle_consistent(w.value) == -1);
}

TEST_CASE("experiments run from protocol text to csv") {
    char* csv = nullptr;
    REQUIRE(ps_experiment_run(
                "sweep = sigma\ngrid = [0.1, 0.3]\nmethods = input\ntrials = 2\nk = 4\nd = 6\n",
                &csv) == PS_OK);
    const std::string table = take_string(csv);
    CHECK(table.find("sweep_param,value,method,metric,mean,stddev,trials") == 0);
    CHECK(table.find("sigma,0.3,input,") != std::string::npos);

    char* none = nullptr;
    CHECK(ps_experiment_run("sweep = nothing\n", &none) == PS_ERR_PARSE);
    CHECK(none == nullptr);
}

}  // TEST_SUITE
