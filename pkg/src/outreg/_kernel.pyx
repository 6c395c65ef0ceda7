# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled twin of _kernel_py; see that module for the shared contract.

The arithmetic here must stay expression-for-expression identical to
_kernel_py.py; the build uses -ffp-contract=off so no multiply-add fusion
can change the rounding of either twin.  Edit both files together.
"""

from libc.math cimport exp, sin
from libc.stdlib cimport free, malloc

cdef double _LIMIT = 1e9


cdef inline double _psi(double s) noexcept:
    cdef double t = 1.0 - s
    cdef double up
    cdef double dn
    if t > 0.0:
        up = exp(-1.0 / t)
    else:
        up = 0.0
    if s > 0.0:
        dn = exp(-1.0 / s) + up
    else:
        dn = up
    # dn == 0.0 is reachable only through nan arguments; C division then
    # yields nan (0/0) or +inf (x/0), which the python twin reproduces
    return up / dn


cdef inline double _det3(double a, double b, double c, double d, double e,
                         double f, double g, double h, double i) noexcept:
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


cdef double _chi_est(double* y, int base, int n, double* m, double eps,
                     int* mask, double* ahat, double* det_out) noexcept:
    cdef double t0, t1, t2, det, sc, b0, b1, s, d3, mj, last, chi
    cdef double adj00, adj01, adj10, adj11
    cdef double th[16]
    cdef double cof[16]
    cdef double mb[9]
    cdef double row[4]
    cdef double acc[4]
    cdef int r, c, rr, cc, k, j
    if n == 2:
        t0 = y[base]
        t1 = y[base + 1]
        t2 = y[base + 2]
        det = t0 * t2 - t1 * t1
        adj00 = t2
        adj01 = -t1
        adj10 = -t1
        adj11 = t0
        if det == 0.0:
            sc = 0.0
        else:
            sc = det / (det * det + _psi(1.0 + det * det - eps * eps))
        b0 = y[base + 2]
        b1 = y[base + 3]
        s = sc * adj00 * b0
        s = s + sc * adj01 * b1
        ahat[0] = -s
        s = sc * adj10 * b0
        s = s + sc * adj11 * b1
        ahat[1] = -s
    else:
        for r in range(4):
            for c in range(4):
                th[r * 4 + c] = y[base + r + c]
        for rr in range(4):
            for cc in range(4):
                k = 0
                for r in range(4):
                    if r == rr:
                        continue
                    for c in range(4):
                        if c == cc:
                            continue
                        mb[k] = th[r * 4 + c]
                        k += 1
                d3 = _det3(mb[0], mb[1], mb[2], mb[3], mb[4], mb[5], mb[6], mb[7], mb[8])
                if (rr + cc) % 2 == 1:
                    d3 = -d3
                cof[rr * 4 + cc] = d3
        det = th[0] * cof[0]
        det = det + th[1] * cof[1]
        det = det + th[2] * cof[2]
        det = det + th[3] * cof[3]
        if det == 0.0:
            sc = 0.0
        else:
            sc = det / (det * det + _psi(1.0 + det * det - eps * eps))
        for j in range(4):
            s = 0.0
            for r in range(4):
                s = s + sc * cof[r * 4 + j] * y[base + 4 + r]
            ahat[j] = -s
    for j in range(n):
        if mask[j]:
            ahat[j] = 0.0
    for c in range(4):
        row[c] = 0.0
        acc[c] = 0.0
    row[0] = 1.0
    for j in range(2 * n):
        mj = m[j]
        for c in range(n):
            acc[c] = acc[c] + mj * row[c]
        last = row[n - 1]
        c = n - 1
        while c > 0:
            row[c] = row[c - 1] - ahat[c] * last
            c -= 1
        row[0] = -ahat[0] * last
    chi = 0.0
    for c in range(n):
        s = acc[c] + row[c]
        chi = chi + s * y[base + c]
    det_out[0] = det
    return chi


cdef inline double _horner(double* coeffs, int nc, double s) noexcept:
    cdef double acc = 0.0
    cdef int i = nc - 1
    while i >= 0:
        acc = acc * s + coeffs[i]
        i -= 1
    return acc


cdef void _deriv(double t, double* y, double* dy, double* aux,
                 double c1, double c2, double c3, double sigma,
                 double* m1, double* m2, double eps, int* mask1, int* mask2,
                 double* rho, int n_rho, double* kc, int n_kc, double k0,
                 int mode, double dist_amp, double dist_freq,
                 double* a1b, double* a2b) noexcept:
    cdef double x1 = y[0]
    cdef double x2 = y[1]
    cdef double v1 = y[2]
    cdef double v2 = y[3]
    cdef double e = x1 - v1
    cdef double det1 = 0.0
    cdef double det2 = 0.0
    cdef double chi1, chi2, rho_e, zeta, kz, u, dk, d, s
    cdef int i, j
    chi1 = _chi_est(y, 4, 2, m1, eps, mask1, a1b, &det1)
    chi2 = _chi_est(y, 8, 4, m2, eps, mask2, a2b, &det2)
    rho_e = _horner(rho, n_rho, e)
    zeta = x2 - chi1 + rho_e * e
    kz = _horner(kc, n_kc, zeta)
    if mode == 1:
        u = -(y[16] * kz * zeta) + chi2
        dk = kz * zeta * zeta
    elif mode == 2:
        u = 0.0
        dk = 0.0
    else:
        u = -(k0 * kz * zeta) + chi2
        dk = 0.0
    d = v2 + dist_amp * sin(dist_freq * t)
    dy[0] = x2
    dy[1] = -c3 * x2 - c1 * x1 - c2 * (x1 * x1 * x1) + u + d
    dy[2] = sigma * v2
    dy[3] = -sigma * v1
    dy[4] = y[5]
    dy[5] = y[6]
    dy[6] = y[7]
    s = 0.0
    for j in range(4):
        s = s - m1[j] * y[4 + j]
    dy[7] = s + x2
    for i in range(8, 15):
        dy[i] = y[i + 1]
    s = 0.0
    for j in range(8):
        s = s - m2[j] * y[8 + j]
    dy[15] = s + u
    dy[16] = dk
    aux[0] = e
    aux[1] = zeta
    aux[2] = u
    aux[3] = a1b[0]
    aux[4] = a2b[0]
    aux[5] = a2b[2]
    aux[6] = det1
    aux[7] = det2


def run_closed_loop(y0, double h, long n_steps, long stride, double c1,
                    double c2, double c3, double sigma, m1, m2, double eps,
                    mask1, mask2, rho, kc, double k0, int mode,
                    double dist_amp, double dist_freq, double t0=0.0):
    """Same contract as _kernel_py.run_closed_loop; see there."""
    cdef double y[17]
    cdef double yw[17]
    cdef double k1[17]
    cdef double k2[17]
    cdef double k3[17]
    cdef double k4[17]
    cdef double aux[8]
    cdef double auxw[8]
    cdef double a1b[4]
    cdef double a2b[4]
    cdef double m1c[4]
    cdef double m2c[8]
    cdef int mk1[2]
    cdef int mk2[4]
    cdef double* rc = NULL
    cdef double* kcc = NULL
    cdef int n_rho, n_kc
    cdef long step
    cdef int i, bad
    cdef double t, half, h6, s, yi, diverged_at

    ylist = [float(v) for v in y0]
    if len(ylist) != 17:
        raise ValueError("state vector must have 17 entries, got %d" % len(ylist))
    if stride < 1:
        raise ValueError("stride must be >= 1, got %d" % stride)
    if not t0 >= 0.0:
        raise ValueError("t0 must be >= 0, got %r" % (t0,))
    m1l = [float(v) for v in m1]
    m2l = [float(v) for v in m2]
    mk1l = [1 if v else 0 for v in mask1]
    mk2l = [1 if v else 0 for v in mask2]
    if len(m1l) != 4 or len(m2l) != 8 or len(mk1l) != 2 or len(mk2l) != 4:
        raise ValueError("need m1[4], m2[8], mask1[2], mask2[4]")
    rl = [float(v) for v in rho]
    kl = [float(v) for v in kc]
    for i in range(17):
        y[i] = ylist[i]
    for i in range(4):
        m1c[i] = m1l[i]
    for i in range(8):
        m2c[i] = m2l[i]
    for i in range(2):
        mk1[i] = mk1l[i]
    for i in range(4):
        mk2[i] = mk2l[i]
    n_rho = len(rl)
    n_kc = len(kl)
    rc = <double*> malloc((n_rho if n_rho > 0 else 1) * sizeof(double))
    kcc = <double*> malloc((n_kc if n_kc > 0 else 1) * sizeof(double))
    if rc == NULL or kcc == NULL:
        if rc != NULL:
            free(rc)
        if kcc != NULL:
            free(kcc)
        raise MemoryError()
    for i in range(n_rho):
        rc[i] = rl[i]
    for i in range(n_kc):
        kcc[i] = kl[i]

    half = 0.5 * h
    h6 = h / 6.0
    records = []
    diverged_at = -1.0
    try:
        for step in range(n_steps):
            t = t0 + step * h
            _deriv(t, y, k1, aux, c1, c2, c3, sigma, m1c, m2c, eps, mk1, mk2,
                   rc, n_rho, kcc, n_kc, k0, mode, dist_amp, dist_freq, a1b, a2b)
            if step % stride == 0:
                records.append((t, y[0], y[1], aux[0], aux[1], aux[2], aux[3],
                                aux[4], aux[5], aux[6], aux[7], y[16]))
            for i in range(17):
                yw[i] = y[i] + half * k1[i]
            _deriv(t + half, yw, k2, auxw, c1, c2, c3, sigma, m1c, m2c, eps,
                   mk1, mk2, rc, n_rho, kcc, n_kc, k0, mode, dist_amp,
                   dist_freq, a1b, a2b)
            for i in range(17):
                yw[i] = y[i] + half * k2[i]
            _deriv(t + half, yw, k3, auxw, c1, c2, c3, sigma, m1c, m2c, eps,
                   mk1, mk2, rc, n_rho, kcc, n_kc, k0, mode, dist_amp,
                   dist_freq, a1b, a2b)
            for i in range(17):
                yw[i] = y[i] + h * k3[i]
            _deriv(t + h, yw, k4, auxw, c1, c2, c3, sigma, m1c, m2c, eps,
                   mk1, mk2, rc, n_rho, kcc, n_kc, k0, mode, dist_amp,
                   dist_freq, a1b, a2b)
            bad = 0
            for i in range(17):
                s = k1[i] + 2.0 * k2[i]
                s = s + 2.0 * k3[i]
                s = s + k4[i]
                yi = y[i] + h6 * s
                y[i] = yi
                if yi != yi or yi > _LIMIT or yi < -_LIMIT:
                    bad = 1
            if bad:
                diverged_at = t0 + (step + 1) * h
                break
        if diverged_at < 0.0:
            t = t0 + n_steps * h
            _deriv(t, y, k1, aux, c1, c2, c3, sigma, m1c, m2c, eps, mk1, mk2,
                   rc, n_rho, kcc, n_kc, k0, mode, dist_amp, dist_freq, a1b, a2b)
            records.append((t, y[0], y[1], aux[0], aux[1], aux[2], aux[3],
                            aux[4], aux[5], aux[6], aux[7], y[16]))
        yfinal = [y[i] for i in range(17)]
    finally:
        free(rc)
        free(kcc)
    return records, diverged_at, yfinal
