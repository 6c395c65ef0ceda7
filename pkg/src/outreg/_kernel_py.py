"""Pure-Python twin of the compiled closed-loop integration kernel.

This file and _kernel.pyx implement the same arithmetic in the same
operation order, so a run produces bit-identical records on either backend
(the parity tests compare floats for exact equality).  When editing one,
edit the other to match, expression by expression.

Conventions shared by both twins:
  - no ** operator anywhere; powers are explicit products, so both
    backends emit the same multiply sequence
  - polynomial evaluation is Horner from the highest coefficient, seeded
    with 0.0 (matching controller.Polynomial.__call__)
  - determinants and adjugates of the Hankel blocks use division-free
    cofactor expansion, never pivoted elimination
  - the state vector is y = (x1, x2, v1, v2, eta1[0..3], eta2[0..7], khat),
    17 entries; khat rides along unused in nonadaptive runs

Record layout (12 columns per row):
  t, x1, x2, e, zeta, u, a11, a21, a23, detT1, detT2, khat
where a11 is the first entry of the component-1 coefficient estimate and
a21/a23 the first/third of component 2, all taken from the vector-field
evaluation at the recorded state.

Modes: 0 nonadaptive, 1 adaptive, 2 open loop (u forced to 0; the filters
and estimators keep running so the log stays comparable).
"""

from math import exp, sin

_LIMIT = 1e9


def _psi(s):
    # kappa(1-s) / (kappa(s) + kappa(1-s)); kappa(t) = exp(-1/t) for t > 0
    t = 1.0 - s
    if t > 0.0:
        up = exp(-1.0 / t)
    else:
        up = 0.0
    if s > 0.0:
        dn = exp(-1.0 / s) + up
    else:
        dn = up
    if dn == 0.0:
        # reachable only through nan arguments (overflowed states mid-stage);
        # mirror C division so the twins agree: 0/0 -> nan, x/0 -> +inf
        return float("nan") if up == 0.0 else float("inf")
    return up / dn


def _det3(a, b, c, d, e, f, g, h, i):
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _chi_est(y, base, n, m, eps, mask, ahat):
    """Coefficient estimate, reconstruction, and Hankel determinant.

    Reads the filter state from y[base : base + 2n], writes the masked
    estimate into ahat[0:n], and returns (chi, det).
    """
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
        # n == 4: 4x4 Hankel from y[base .. base+6]
        th = [0.0] * 16
        for r in range(4):
            for c in range(4):
                th[r * 4 + c] = y[base + r + c]
        cof = [0.0] * 16
        mb = [0.0] * 9
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
                # adjugate[j][r] is the (r, j) cofactor
                s = s + sc * cof[r * 4 + j] * y[base + 4 + r]
            ahat[j] = -s
    for j in range(n):
        if mask[j]:
            ahat[j] = 0.0
    # first row of Xi(ahat) by the row recurrence row_{j+1} = row_j . Phi
    row = [0.0] * 4
    acc = [0.0] * 4
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
    return chi, det


def _horner(coeffs, s):
    acc = 0.0
    i = len(coeffs) - 1
    while i >= 0:
        acc = acc * s + coeffs[i]
        i -= 1
    return acc


def _deriv(t, y, dy, aux, c1, c2, c3, sigma, m1, m2, eps, mask1, mask2,
           rho, kc, k0, mode, dist_amp, dist_freq, ahat1, ahat2):
    x1 = y[0]
    x2 = y[1]
    v1 = y[2]
    v2 = y[3]
    e = x1 - v1
    chi1, det1 = _chi_est(y, 4, 2, m1, eps, mask1, ahat1)
    chi2, det2 = _chi_est(y, 8, 4, m2, eps, mask2, ahat2)
    rho_e = _horner(rho, e)
    zeta = x2 - chi1 + rho_e * e
    kz = _horner(kc, zeta)
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
    aux[3] = ahat1[0]
    aux[4] = ahat2[0]
    aux[5] = ahat2[2]
    aux[6] = det1
    aux[7] = det2


def run_closed_loop(y0, h, n_steps, stride, c1, c2, c3, sigma, m1, m2, eps,
                    mask1, mask2, rho, kc, k0, mode, dist_amp, dist_freq,
                    t0=0.0):
    """Integrate the closed loop with classical RK4 at fixed step h.

    Records a 12-column row at every stride-th step (state before the
    step, auxiliaries from the vector field at that state) and once more
    after the final step.  Returns (records, diverged_at, y_final);
    diverged_at is -1.0 on a completed run, otherwise t0 + (step + 1) * h
    for the first step whose result left the |y| <= 1e9 box or stopped
    being finite, in which case the record list simply ends early and
    y_final is the offending state.  t0 only shifts the clock (records,
    the disturbance phase); it must be >= 0 so -1.0 stays unambiguous.
    """
    y = [float(v) for v in y0]
    if len(y) != 17:
        raise ValueError("state vector must have 17 entries, got %d" % len(y))
    if stride < 1:
        raise ValueError("stride must be >= 1, got %d" % stride)
    if not t0 >= 0.0:
        raise ValueError("t0 must be >= 0, got %r" % (t0,))
    m1 = [float(v) for v in m1]
    m2 = [float(v) for v in m2]
    mask1 = [1 if v else 0 for v in mask1]
    mask2 = [1 if v else 0 for v in mask2]
    if len(m1) != 4 or len(m2) != 8 or len(mask1) != 2 or len(mask2) != 4:
        raise ValueError("need m1[4], m2[8], mask1[2], mask2[4]")
    rho = [float(v) for v in rho]
    kc = [float(v) for v in kc]
    k1 = [0.0] * 17
    k2 = [0.0] * 17
    k3 = [0.0] * 17
    k4 = [0.0] * 17
    yw = [0.0] * 17
    aux = [0.0] * 8
    auxw = [0.0] * 8
    a1b = [0.0] * 4
    a2b = [0.0] * 4
    half = 0.5 * h
    h6 = h / 6.0
    records = []
    diverged_at = -1.0
    for step in range(n_steps):
        t = t0 + step * h
        _deriv(t, y, k1, aux, c1, c2, c3, sigma, m1, m2, eps, mask1, mask2,
               rho, kc, k0, mode, dist_amp, dist_freq, a1b, a2b)
        if step % stride == 0:
            records.append((t, y[0], y[1], aux[0], aux[1], aux[2], aux[3],
                            aux[4], aux[5], aux[6], aux[7], y[16]))
        for i in range(17):
            yw[i] = y[i] + half * k1[i]
        _deriv(t + half, yw, k2, auxw, c1, c2, c3, sigma, m1, m2, eps, mask1,
               mask2, rho, kc, k0, mode, dist_amp, dist_freq, a1b, a2b)
        for i in range(17):
            yw[i] = y[i] + half * k2[i]
        _deriv(t + half, yw, k3, auxw, c1, c2, c3, sigma, m1, m2, eps, mask1,
               mask2, rho, kc, k0, mode, dist_amp, dist_freq, a1b, a2b)
        for i in range(17):
            yw[i] = y[i] + h * k3[i]
        _deriv(t + h, yw, k4, auxw, c1, c2, c3, sigma, m1, m2, eps, mask1,
               mask2, rho, kc, k0, mode, dist_amp, dist_freq, a1b, a2b)
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
        _deriv(t, y, k1, aux, c1, c2, c3, sigma, m1, m2, eps, mask1, mask2,
               rho, kc, k0, mode, dist_amp, dist_freq, a1b, a2b)
        records.append((t, y[0], y[1], aux[0], aux[1], aux[2], aux[3],
                        aux[4], aux[5], aux[6], aux[7], y[16]))
    return records, diverged_at, y
