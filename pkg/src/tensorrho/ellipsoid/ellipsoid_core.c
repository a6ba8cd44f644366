#include <quadmath.h>
#include <stdlib.h>
#include <string.h>

#include "ellipsoid_core.h"

typedef __float128 qf;

static qf parse(const char *s) { return strtoflt128(s, NULL); }

static void format(char *buf, qf v) { quadmath_snprintf(buf, ELL_STR, "%.36Qe", v); }

/* log sum exp over one branch; leaves the softmax weights in w */
static qf branch_value(const ell_input *in, const qf *logw, int j, const qf *y, qf *w)
{
    int lo = in->offsets[j], hi = in->offsets[j + 1], n = in->n;
    qf m = 0, s = 0;
    for (int k = lo; k < hi; k++) {
        qf t = logw[k];
        for (int i = 0; i < n; i++)
            t += (qf)in->exps[(long)k * n + i] * y[i];
        w[k - lo] = t;
        if (k == lo || t > m) m = t;
    }
    for (int k = 0; k < hi - lo; k++) {
        w[k] = expq(w[k] - m);
        s += w[k];
    }
    for (int k = 0; k < hi - lo; k++) w[k] /= s;
    return m + logq(s);
}

/* Cholesky of the (N x N) shape; returns 0 on failure, else log det */
static int cholesky_logdet(int N, const qf *P, qf *L, qf *logdet)
{
    qf acc = 0;
    for (int i = 0; i < N; i++) {
        for (int j = 0; j <= i; j++) {
            qf s = P[i * N + j];
            for (int k = 0; k < j; k++) s -= L[i * N + k] * L[j * N + k];
            if (i == j) {
                if (!(s > 0)) return 0;
                L[i * N + i] = sqrtq(s);
                acc += logq(s);
            } else {
                L[i * N + j] = s / L[j * N + j];
            }
        }
    }
    *logdet = acc;
    return 1;
}

int ell_minimize(const ell_input *in, ell_output *out)
{
    const int n = in->n, N = n + 1;
    const int M = in->offsets[in->nbranch];
    int maxm = 0;
    for (int j = 0; j < in->nbranch; j++) {
        int m = in->offsets[j + 1] - in->offsets[j];
        if (m > maxm) maxm = m;
    }
    qf *logw = malloc(sizeof(qf) * M);
    qf *c = malloc(sizeof(qf) * N), *center = malloc(sizeof(qf) * N);
    qf *P = malloc(sizeof(qf) * N * N), *L = malloc(sizeof(qf) * N * N);
    qf *Pc = malloc(sizeof(qf) * N), *w = malloc(sizeof(qf) * maxm);
    qf *xbest = malloc(sizeof(qf) * n);
    for (int k = 0; k < M; k++) logw[k] = parse(in->logw[k]);

    const qf R = parse(in->R), tmax = parse(in->tmax), tbar = parse(in->tbar);
    const qf R2 = parse(in->R2), eps_o = parse(in->eps_oracle), eps_g = parse(in->eps_gap);
    const qf Nq = (qf)N;
    const qf expand = Nq * Nq / (Nq * Nq - 1), shrink = 2 / (Nq + 1);

    memset(P, 0, sizeof(qf) * N * N);
    for (int i = 0; i < N; i++) {
        center[i] = 0;
        P[i * N + i] = R2 * R2;
    }
    center[n] = tbar;
    for (int i = 0; i < n; i++) xbest[i] = 0;

    qf upper = HUGE_VALQ, lower = -HUGE_VALQ, ceiling = tmax;
    int status = 1, regularized = 0;
    long it;
    memset(out->cases, 0, sizeof(out->cases));

    for (it = 0; it < in->max_iter; it++) {
        const qf *y = center;
        const qf s = center[n];
        int imax = 0;
        for (int i = 1; i < n; i++)
            if (fabsq(y[i]) > fabsq(y[imax])) imax = i;
        for (int i = 0; i < N; i++) c[i] = 0;

        if (fabsq(y[imax]) >= R) {
            c[imax] = y[imax] > 0 ? 1 : -1;
            out->cases[0]++;
        } else if (s >= tmax) {
            c[n] = 1;
            out->cases[1]++;
        } else {
            int kbest = 0;
            qf fy = 0;
            for (int j = 0; j < in->nbranch; j++) {
                qf v = branch_value(in, logw, j, y, w);
                if (j == 0 || v > fy) {
                    fy = v;
                    kbest = j;
                }
            }
            if (fy < upper) {
                upper = fy;
                for (int i = 0; i < n; i++) xbest[i] = y[i];
            }
            if (s >= fy - eps_o) {
                c[n] = 1;
                /* t <= s can only lose the optimum when s < upper */
                if (s < ceiling && s < upper) ceiling = s;
                out->cases[2]++;
            } else {
                branch_value(in, logw, kbest, y, w);
                int lo = in->offsets[kbest], hi = in->offsets[kbest + 1];
                for (int i = 0; i < n; i++) {
                    qf g = 0;
                    for (int k = lo; k < hi; k++) g += w[k - lo] * (qf)in->exps[(long)k * n + i];
                    c[i] = ldexpq(rintq(ldexpq(g, in->grad_bits)), -in->grad_bits);
                }
                c[n] = -1;
                out->cases[3]++;
            }
        }

        /* central cut keeping {z : c.z <= c.center} */
        qf cPc = 0;
        for (int i = 0; i < N; i++) {
            qf acc = 0;
            for (int j = 0; j < N; j++) acc += P[i * N + j] * c[j];
            Pc[i] = acc;
            cPc += c[i] * acc;
        }
        if (!(cPc > 0)) {
            status = 2;
            break;
        }
        qf root = sqrtq(cPc);
        for (int i = 0; i < N; i++) {
            Pc[i] /= root;
            center[i] -= Pc[i] / (Nq + 1);
        }
        for (int i = 0; i < N; i++)
            for (int j = 0; j <= i; j++) {
                qf v = expand * (P[i * N + j] - shrink * Pc[i] * Pc[j]);
                P[i * N + j] = v;
                P[j * N + i] = v;
            }

        qf logdet = 0;
        if (!cholesky_logdet(N, P, L, &logdet)) {
            if (regularized) {
                status = 2;
                break;
            }
            qf tr = 0;
            for (int i = 0; i < N; i++) tr += P[i * N + i];
            for (int i = 0; i < N; i++) P[i * N + i] += ldexpq(tr, -60);
            regularized = 1;
            if (!cholesky_logdet(N, P, L, &logdet)) {
                status = 2;
                break;
            }
        }

        qf lb = center[n] - sqrtq(P[n * N + n]);
        if (ceiling < lb) lb = ceiling;
        if (lb > lower) lower = lb;

        if (it < out->trace_cap) {
            if (out->trace_upper) out->trace_upper[it] = (double)upper;
            if (out->trace_lower) out->trace_lower[it] = (double)lower;
            if (out->trace_logdet) out->trace_logdet[it] = (double)logdet;
        }
        if (upper - lower <= eps_g) {
            status = 0;
            it++;
            break;
        }
    }

    out->status = status;
    out->iterations = it;
    out->regularized = regularized;
    format(out->upper, upper);
    format(out->lower, lower);
    for (int i = 0; i < n; i++) format(out->x_best + (long)i * ELL_STR, xbest[i]);

    free(logw);
    free(c);
    free(center);
    free(P);
    free(L);
    free(Pc);
    free(w);
    free(xbest);
    return status;
}
