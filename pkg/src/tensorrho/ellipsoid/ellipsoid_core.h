#ifndef TENSORRHO_ELLIPSOID_CORE_H
#define TENSORRHO_ELLIPSOID_CORE_H

/* Central-cut ellipsoid minimization of the altitude over K(f), carried out
 * in IEEE binary128.  Real inputs and outputs cross the boundary as decimal
 * strings so no precision is lost in Python.
 *
 * Status codes: 0 certified gap reached, 1 iteration cap, 2 numerical
 * breakdown of the shape matrix.
 */

#define ELL_STR 64

typedef struct {
    int n;                 /* dimension of x; the ellipsoid lives in R^(n+1) */
    int nbranch;
    const int *offsets;    /* nbranch + 1 entries into the exponent rows */
    const double *exps;    /* row-major, integral entries */
    const char *const *logw;
    const char *R, *tmax, *tbar, *R2, *eps_oracle, *eps_gap;
    long max_iter;
    int grad_bits;
} ell_input;

typedef struct {
    int status;
    long iterations;
    long cases[4];         /* (a) box, (b1) ceiling, (b2) near-feasible, (b3) gradient */
    int regularized;
    char upper[ELL_STR];
    char lower[ELL_STR];
    char *x_best;          /* n * ELL_STR chars, caller-owned */
    double *trace_upper;   /* optional, length trace_cap */
    double *trace_lower;
    double *trace_logdet;
    long trace_cap;
} ell_output;

int ell_minimize(const ell_input *in, ell_output *out);

#endif
