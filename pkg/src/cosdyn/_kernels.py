"""Numba kernels shared by the orbit engine, the classifier and the scanners.

Everything here is pure: results depend only on the arguments, so the
parallel drivers are deterministic for any thread count.
"""

import cmath

import numpy as np
from numba import njit, prange

# orbit fate codes
FATE_CONVERGED = 0
FATE_CYCLE = 1
FATE_ESCAPED = 2
FATE_UNDECIDED = 3

# parameter classification codes
KIND_A = 0
KIND_C = 1
KIND_D = 2
KIND_ESCAPING = 3
KIND_UNDECIDED = 4

CYCLE_DETECT_TOL = 1e-6
CYCLE_TOL = 1e-12
NEWTON_MAX_STEPS = 60


@njit(cache=True)
def f_eval(v, z):
    # v(cos z - 1) written as -2v sin^2(z/2): no cancellation near z=0
    s = cmath.sin(0.5 * z)
    return -2.0 * v * s * s


@njit(cache=True)
def f_deriv(v, z):
    return -v * cmath.sin(z)


@njit(cache=True)
def default_delta(v):
    # D(0,delta) is forward invariant when |v|*delta/2 <= 1/4
    d = 1.0 / (4.0 * abs(v))
    return d if d < 0.05 else 0.05


@njit(cache=True)
def fp_with_deriv(v, z, p):
    """(f^p(z), (f^p)'(z)) via the chain-rule product along the orbit."""
    a = 1.0 + 0.0j
    for _ in range(p):
        a = a * f_deriv(v, z)
        z = f_eval(v, z)
    return z, a


@njit(cache=True)
def certify_cycle(v, z0, p):
    """Newton-refine a period-p point near z0 and minimize the period.

    Returns (status, zstar, multiplier, pmin); status 0 ok, 1 no
    convergence, 2 degenerate Jacobian (near-parabolic).
    """
    z = z0
    ok = False
    for _ in range(NEWTON_MAX_STEPS):
        fz, a = fp_with_deriv(v, z, p)
        g = fz - z
        if abs(g) <= CYCLE_TOL:
            ok = True
            break
        dg = a - 1.0
        if abs(dg) < 1e-12:
            return 2, z, 0j, 0
        step = g / dg
        if abs(step) > 1e3:
            return 1, z, 0j, 0
        z = z - step
    if not ok:
        fz, a = fp_with_deriv(v, z, p)
        if abs(fz - z) > CYCLE_TOL:
            return 1, z, 0j, 0
    pmin = p
    for d in range(1, p):
        if p % d == 0:
            fz, a = fp_with_deriv(v, z, d)
            if abs(fz - z) < 1e-8:
                pmin = d
                break
    fz, mult = fp_with_deriv(v, z, pmin)
    if abs(fz - z) > 1e-9:
        return 1, z, 0j, 0
    return 0, z, mult, pmin


@njit(cache=True)
def orbit_kernel(v, z0, max_iter, delta, escape_im):
    """Iterate z0 and certify its fate.

    Returns (fate, steps, entry, period, zstar, multiplier).
    """
    z = z0
    if abs(z) < delta:
        return FATE_CONVERGED, 0, 0, 0, 0j, 0j
    tort = z
    power = 1
    lam = 0
    attempts = 0
    for n in range(1, max_iter + 1):
        z = f_eval(v, z)
        if abs(z.imag) > escape_im:
            return FATE_ESCAPED, n, -1, 0, 0j, 0j
        if abs(z) < delta:
            return FATE_CONVERGED, n, n, 0, 0j, 0j
        lam += 1
        if abs(z - tort) < CYCLE_DETECT_TOL and attempts < 8:
            attempts += 1
            status, zs, mult, pmin = certify_cycle(v, z, lam)
            if status == 0 and abs(mult) < 1.0:
                if abs(zs) < delta:
                    return FATE_CONVERGED, n, n, 0, 0j, 0j
                return FATE_CYCLE, n, -1, pmin, zs, mult
        if lam == power:
            tort = z
            power *= 2
            lam = 0
    return FATE_UNDECIDED, max_iter, -1, 0, 0j, 0j


@njit(cache=True)
def converges_to_zero(v, z, max_iter, delta, escape_im):
    if abs(z) < delta:
        return True
    for _ in range(max_iter):
        z = f_eval(v, z)
        if abs(z.imag) > escape_im:
            return False
        if abs(z) < delta:
            return True
    return False


@njit(cache=True)
def default_fill_halfwidth(v):
    hw = 4.0 + 16.0 / abs(v)
    return hw if hw < 20.0 else 20.0


@njit(cache=True)
def fill_kernel(v, n, hw, max_iter, delta, escape_im, cap, target, use_target):
    """Region-grow from the cell of 0 through 4-connected converging cells.

    marked: 0 untested, 1 in component, 2 tested and not converging.
    With use_target, stops as soon as the 3x3 block around the target
    cell is fully marked (an interior hit).
    Returns (marked, overflowed, reached, count); reached: 0 clean miss,
    1 interior hit, 2 band (target cell near the component boundary).
    """
    res = 2.0 * hw / n
    marked = np.zeros((n, n), dtype=np.uint8)
    stack = np.empty((n * n, 2), dtype=np.int32)

    ti = int((target.imag + hw) / res)
    tj = int((target.real + hw) / res)
    target_in = 0 <= ti < n and 0 <= tj < n
    block_need = 0
    if use_target and target_in:
        for a in range(max(0, ti - 1), min(n, ti + 2)):
            for b in range(max(0, tj - 1), min(n, tj + 2)):
                block_need += 1
        # interior hit requires a full 3x3 block; edge targets never qualify
        if block_need < 9:
            block_need = 10
    block_have = 0

    i0 = int(hw / res)
    j0 = int(hw / res)
    marked[i0, j0] = 1
    if use_target and target_in and abs(i0 - ti) <= 1 and abs(j0 - tj) <= 1:
        block_have += 1
    stack[0, 0] = i0
    stack[0, 1] = j0
    top = 1
    count = 1
    overflowed = False
    while top > 0:
        top -= 1
        i = stack[top, 0]
        j = stack[top, 1]
        for d in range(4):
            if d == 0:
                a, b = i + 1, j
            elif d == 1:
                a, b = i - 1, j
            elif d == 2:
                a, b = i, j + 1
            else:
                a, b = i, j - 1
            if a < 0 or a >= n or b < 0 or b >= n:
                continue
            if marked[a, b] != 0:
                continue
            zc = complex(-hw + (b + 0.5) * res, -hw + (a + 0.5) * res)
            if converges_to_zero(v, zc, max_iter, delta, escape_im):
                marked[a, b] = 1
                count += 1
                stack[top, 0] = a
                stack[top, 1] = b
                top += 1
                if use_target and target_in and abs(a - ti) <= 1 and abs(b - tj) <= 1:
                    block_have += 1
                    if block_have >= block_need:
                        return marked, False, 1, count
                if count > cap:
                    overflowed = True
                    return marked, True, 0, count
            else:
                marked[a, b] = 2
    # fill exhausted: classify the target membership with a one-cell guard band
    reached = 0
    if target_in:
        reached = membership(marked, n, hw, target)
    return marked, overflowed, reached, count


@njit(cache=True)
def membership(marked, n, hw, z):
    """0 clean out, 1 interior (cell and all 8 neighbors marked), 2 band."""
    res = 2.0 * hw / n
    i = int((z.imag + hw) / res)
    j = int((z.real + hw) / res)
    if i < 0 or i >= n or j < 0 or j >= n:
        return 0
    inside = marked[i, j] == 1
    full = True
    any_marked = inside
    for a in range(i - 1, i + 2):
        for b in range(j - 1, j + 2):
            if a < 0 or a >= n or b < 0 or b >= n:
                full = False
                continue
            if marked[a, b] == 1:
                any_marked = True
            else:
                full = False
    if inside and full:
        return 1
    if any_marked:
        return 2
    return 0


@njit(cache=True)
def entry_time_kernel(v, marked, n, hw, max_steps):
    """Smallest m >= 1 with f^m(-2v) interior to the marked set.

    Returns (m, ambiguous): m=-1 when not found; ambiguous when a band
    hit happened before any interior hit.
    """
    z = -2.0 * v
    for m in range(1, max_steps + 1):
        z = f_eval(v, z)
        mem = membership(marked, n, hw, z)
        if mem == 1:
            return m, False
        if mem == 2:
            return m, True
    return -1, False


TWO_PI = 2.0 * np.pi


@njit(cache=True)
def translate_index_kernel(v, marked, n, hw, m):
    """k with f^{m-1}(-2v) in (marked set) + 2k*pi.

    Returns (k, status): status 0 ok, 1 ambiguous band, 2 multiple
    interior translates, 3 no translate found.
    """
    z = -2.0 * v
    for _ in range(m - 1):
        z = f_eval(v, z)
    k0 = int(np.round(z.real / TWO_PI))
    best_k = 0
    hits = 0
    band = False
    for dk in range(-1, 2):
        k = k0 + dk
        if k == 0:
            continue
        mem = membership(marked, n, hw, z - TWO_PI * k)
        if mem == 1:
            hits += 1
            best_k = k
        elif mem == 2:
            band = True
    if hits == 1:
        return best_k, 0
    if hits > 1:
        return 0, 2
    if band:
        return 0, 1
    return 0, 3


@njit(cache=True)
def diam_of_marked(marked, n, hw):
    """Max pairwise distance between marked cell centers.

    Row-extremal cells suffice: any diameter endpoint is a convex-hull
    point, hence min or max in its row.
    """
    res = 2.0 * hw / n
    xs = np.empty(2 * n, dtype=np.float64)
    ys = np.empty(2 * n, dtype=np.float64)
    cnt = 0
    for i in range(n):
        lo = -1
        hi = -1
        for j in range(n):
            if marked[i, j] == 1:
                if lo < 0:
                    lo = j
                hi = j
        if lo >= 0:
            y = -hw + (i + 0.5) * res
            xs[cnt] = -hw + (lo + 0.5) * res
            ys[cnt] = y
            cnt += 1
            if hi != lo:
                xs[cnt] = -hw + (hi + 0.5) * res
                ys[cnt] = y
                cnt += 1
    best = 0.0
    for a in range(cnt):
        for b in range(a + 1, cnt):
            dx = xs[a] - xs[b]
            dy = ys[a] - ys[b]
            d2 = dx * dx + dy * dy
            if d2 > best:
                best = d2
    return np.sqrt(best)


@njit(cache=True)
def classify_point(v, max_iter, escape_im, fill_n, refine_levels, want_diam,
                   delta_in=-1.0):
    """Full single-parameter classification.

    Returns (kind, m, k, p, mult_abs, steps, diam). diam is NaN unless
    the flood fill ran to completion and want_diam is set. delta_in <= 0
    selects the default convergence radius.
    """
    if v == 0:
        return KIND_UNDECIDED, 0, 0, 0, np.nan, 0, np.nan
    delta = default_delta(v) if delta_in <= 0.0 else delta_in
    fate, steps, entry, p, zs, mult = orbit_kernel(v, -2.0 * v, max_iter, delta, escape_im)
    if fate == FATE_ESCAPED:
        return KIND_ESCAPING, 0, 0, 0, np.nan, steps, np.nan
    if fate == FATE_UNDECIDED:
        return KIND_UNDECIDED, 0, 0, 0, np.nan, steps, np.nan
    if fate == FATE_CYCLE:
        return KIND_D, 0, 0, p, abs(mult), steps, np.nan
    # critical orbit converges to 0: separate A from C by basin membership
    hw = default_fill_halfwidth(v)
    fill_iter = max_iter
    n = fill_n
    for level in range(refine_levels + 1):
        cap = (n * n) // 2
        marked, overflowed, reached, count = fill_kernel(
            v, n, hw, fill_iter, delta, escape_im, cap, -2.0 * v, True)
        if overflowed or reached == 1:
            return KIND_A, 0, 0, 0, np.nan, steps, np.nan
        if reached == 2:
            n = n * 2
            continue
        # clean miss: type C; entry time and translate index
        m, amb = entry_time_kernel(v, marked, n, hw, max_iter)
        if m < 0:
            return KIND_UNDECIDED, 0, 0, 0, np.nan, steps, np.nan
        if amb:
            n = n * 2
            continue
        k, status = translate_index_kernel(v, marked, n, hw, m)
        if status == 0:
            diam = diam_of_marked(marked, n, hw) if want_diam else np.nan
            return KIND_C, m, k, 0, np.nan, steps, diam
        if status == 3:
            return KIND_UNDECIDED, m, 0, 0, np.nan, steps, np.nan
        n = n * 2
    return KIND_UNDECIDED, 0, 0, 0, np.nan, steps, np.nan


@njit(cache=True, parallel=True)
def scan_parameter_kernel(centers_re, centers_im, max_iter, escape_im, fill_n,
                          out_kind, out_m, out_k, out_p, out_mult, out_steps):
    npix = centers_re.shape[0]
    for idx in prange(npix):
        v = complex(centers_re[idx], centers_im[idx])
        kind, m, k, p, mult, steps, diam = classify_point(
            v, max_iter, escape_im, fill_n, 1, False)
        out_kind[idx] = kind
        out_m[idx] = m
        out_k[idx] = k
        out_p[idx] = p
        out_mult[idx] = mult
        out_steps[idx] = steps


@njit(cache=True, parallel=True)
def scan_dynamical_kernel(v, centers_re, centers_im, max_iter, escape_im,
                          out_fate, out_steps):
    delta = default_delta(v)
    npix = centers_re.shape[0]
    for idx in prange(npix):
        z = complex(centers_re[idx], centers_im[idx])
        fate, steps, entry, p, zs, mult = orbit_kernel(v, z, max_iter, delta, escape_im)
        out_fate[idx] = fate
        out_steps[idx] = steps
