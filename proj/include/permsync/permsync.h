/* C interface to the permsync library.
 *
 * All functions returning ps_status report PS_OK on success; on failure they
 * return the error class and leave a human-readable message retrievable with
 * ps_last_error() (thread-local). Objects returned through out-parameters are
 * owned by the caller and released with the matching _free function. Strings
 * returned through char** are released with ps_string_free.
 */
#ifndef PERMSYNC_H
#define PERMSYNC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
    PS_OK = 0,
    PS_ERR_INVALID_ARGUMENT = 1,
    PS_ERR_PARSE = 2,
    PS_ERR_VALIDATION = 3,
    PS_ERR_SOLVER = 4,
    PS_ERR_IO = 5
} ps_status;

/* Pairwise partial matchings between k objects (symmetric, unit diagonal). */
typedef struct ps_matchings ps_matchings;

/* A universe assignment: one universe column per feature of every object. */
typedef struct ps_universe ps_universe;

/* Diagnostics of one synchronisation run. Wall times are in seconds. */
typedef struct ps_report {
    double cycle_error;
    long long num_matchings;
    double t_eig;
    double t_rotation;
    double t_nmf;
    double t_project;
    double t_total;
    int nmf_iterations;
    double objective_initial;
    double objective_final;
} ps_report;

const char* ps_version(void);

/* Message describing the most recent failure on this thread. */
const char* ps_last_error(void);

void ps_string_free(char* text);

/* ---- matchings I/O and inspection ---- */

ps_status ps_matchings_load(const char* path, ps_matchings** out);
ps_status ps_matchings_loads(const char* text, ps_matchings** out);
ps_status ps_matchings_save(const ps_matchings* w, const char* path);
ps_status ps_matchings_to_string(const ps_matchings* w, char** out);
void ps_matchings_free(ps_matchings* w);

/* PS_OK when the matchings satisfy the partial-permutation and symmetry
 * constraints, PS_ERR_VALIDATION (with message) otherwise. */
ps_status ps_matchings_validate(const ps_matchings* w);

/* 1 if transitively closed (a union of feature cliques), 0 if not, -1 on
 * invalid input. */
int ps_matchings_is_cycle_consistent(const ps_matchings* w);

int ps_matchings_num_objects(const ps_matchings* w);
long long ps_matchings_num_features(const ps_matchings* w);
int ps_matchings_object_size(const ps_matchings* w, int object);
long long ps_matchings_num_matchings(const ps_matchings* w);

/* ---- synthetic instances ---- */

ps_status ps_generate(int k, int d, double rho, double sigma, unsigned long long seed,
                      ps_matchings** w, ps_matchings** w_gt);

/* ---- synchronisation ---- */

/* method is "nmfsync", "spectral" or "matcheig"; d is the universe size
 * estimate, theta the pruning threshold (nmfsync only), tau the block
 * rounding threshold (matcheig only). u_out receives the universe assignment
 * for the first two methods and NULL for matcheig; u_out and report may be
 * NULL when not wanted. */
ps_status ps_sync(const ps_matchings* w, const char* method, int d, double theta, double tau,
                  unsigned long long seed, ps_matchings** w_sync, ps_universe** u_out,
                  ps_report* report);

int ps_universe_size(const ps_universe* u);
int ps_universe_column(const ps_universe* u, int object, int feature);
void ps_universe_free(ps_universe* u);

/* ---- metrics ---- */

ps_status ps_cycle_error(const ps_matchings* w, double* out);
ps_status ps_gt_error(const ps_matchings* w, const ps_matchings* gt, double* out);
ps_status ps_pr_f(const ps_matchings* w, const ps_matchings* gt, double* precision,
                  double* recall, double* fscore, long long* num_matchings);

/* ---- experiment harness ---- */

/* Runs the sweep described by the key=value protocol text and returns the
 * aggregate table as CSV. */
ps_status ps_experiment_run(const char* protocol_text, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* PERMSYNC_H */
