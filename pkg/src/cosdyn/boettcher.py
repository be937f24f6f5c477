"""Boettcher coordinate on the basin of 0 and the component parameterizations.

phi_v conjugates f_v to w -> w^2 near 0 with phi_v(z) = -(v/2) z + O(z^2);
it is evaluated through the accumulated logarithm series

    log phi(z) = log(-(v/2) z) + sum_n 2^{-(n+1)} log(w_{n+1}/w_n^2),

whose ratio terms w_{n+1}/w_n^2 = 4 sin^2(z_n/2)/z_n^2 tend to 1 along the
orbit. The -(v/2) prefactor is what makes the ratios approach +1; it drops
out of the limit, so phi_v(-2v) keeps the v^2(1+O(v^2)) asymptotic.
"""

import cmath
import math
from dataclasses import dataclass, field

from . import _kernels
from .classify import Kind, basin_flood_fill, classify, m_of_v
from .core import OrbitBudget, as_parameter, critical_orbit_with_dv, find_cycle
from .errors import (BranchAmbiguity, ClassDrift, Collision, ContinuationStall,
                     InsideH0, NoConvergence, NotInBasin, NotTypeA, NotTypeC,
                     NotTypeD, SelfIntersection, WrongEntryTime)
from .traces import RayTrace, polyline_closure_gap, polyline_is_simple

TWO_PI = 2.0 * math.pi
BASIN_BUDGET = OrbitBudget(max_iter=4000)
CENTER_TOL = 1e-10


def _cot_minus_inv(x):
    """cot(x) - 1/x, stable near 0."""
    if abs(x) < 1e-2:
        x2 = x * x
        return -x / 3.0 * (1.0 + x2 / 15.0 + 2.0 * x2 * x2 / 189.0)
    return cmath.cos(x) / cmath.sin(x) - 1.0 / x


def _phi_series(v, z, budget, want_deriv=False):
    """(log phi, green, dlogphi/dz or None); raises NotInBasin/BranchAmbiguity."""
    if z == 0:
        return None, float("-inf"), None
    delta = budget.delta(v)
    w0 = (-v / 2.0) * z
    L = cmath.log(w0)
    G = math.log(abs(w0))
    dL = 1.0 / z if want_deriv else 0j
    zn = z
    an = 1.0 + 0j          # d z_n / d z
    scale = 1.0
    for _ in range(budget.max_iter):
        if zn == 0:
            return None, float("-inf"), None
        s = cmath.sin(0.5 * zn)
        r = 4.0 * s * s / (zn * zn)
        if abs(r - 1.0) >= 1.0:
            raise BranchAmbiguity(
                "ratio term left |w-1|<1 at z_n=%r; iterate z forward first" % (zn,))
        scale *= 0.5
        L += scale * cmath.log(r)
        G += scale * math.log(abs(r))
        if want_deriv:
            # d/dz log r_n = cot(z_n/2) - 2/z_n, stable via cot(x)-1/x
            dL += scale * _cot_minus_inv(0.5 * zn) * an
            an = an * _kernels.f_deriv(v, zn)
        zn = _kernels.f_eval(v, zn)
        if abs(zn) < 1e-10:
            return L, G, (dL if want_deriv else None)
        if abs(zn.imag) > budget.escape_im:
            raise NotInBasin("orbit escaped")
    if abs(zn) < delta:
        return L, G, (dL if want_deriv else None)
    raise NotInBasin("orbit did not reach the convergence disk in budget")


def green(v, z, budget: OrbitBudget = BASIN_BUDGET) -> float:
    """Green function lim 2^{-n} log|(v/2) f^n(z)|; doubles under f_v."""
    v = as_parameter(v)
    _, G, _ = _phi_series(v, complex(z), budget)
    return G


def boettcher_coord(v, z, budget: OrbitBudget = BASIN_BUDGET) -> complex:
    """phi_v(z); odd in z, |phi| = exp(green), phi(f(z)) = phi(z)^2."""
    v = as_parameter(v)
    L, _, _ = _phi_series(v, complex(z), budget)
    if L is None:
        return 0j
    return cmath.exp(L)


def _phi_and_deriv(v, z, budget=BASIN_BUDGET):
    L, _, dL = _phi_series(v, complex(z), budget, want_deriv=True)
    if L is None:
        return 0j, (-v / 2.0)
    phi = cmath.exp(L)
    return phi, phi * dL


def phi0(v, check: bool = True, budget: OrbitBudget = BASIN_BUDGET) -> complex:
    """Phi_0(v) = phi_v(-2v), defined on the type-A component."""
    v = as_parameter(v)
    if check and classify(v).kind is not Kind.A:
        raise NotTypeA("v=%r is not a type-A parameter" % (v,))
    return boettcher_coord(v, -2.0 * v, budget)


def phiU(v, m: int, check: bool = True, budget: OrbitBudget = BASIN_BUDGET) -> complex:
    """Phi_U(v) = phi_v(f^m(-2v)) on a type-C component of entry time m."""
    v = as_parameter(v)
    if m < 1:
        raise ValueError("entry time m must be >= 1")
    if check:
        pc = classify(v)
        if pc.kind is not Kind.C:
            raise NotTypeC("v=%r is not a type-C parameter" % (v,))
        if pc.m != m:
            raise WrongEntryTime("m(v)=%d, got m=%d" % (pc.m, m))
    z = -2.0 * v
    for _ in range(m):
        z = _kernels.f_eval(v, z)
    return boettcher_coord(v, z, budget)


def internal_ray(v, theta: float, r_max: float = 0.9, steps: int = 64,
                 check: bool = True, tol: float = 1e-9) -> RayTrace:
    """Trace R^v_0(theta) = phi^{-1}((0,1) e^{2 pi i theta}) for r in [0.01, r_max].

    Requires B_v bounded (v outside the closure of the type-A component),
    so phi_v is a conformal isomorphism B_v -> D. Samples are returned
    with r decreasing from r_max.
    """
    v = as_parameter(v)
    if not 0 < r_max < 1:
        raise ValueError("r_max must be in (0,1)")
    if check and classify(v).kind is Kind.A:
        raise InsideH0("internal rays need v outside the type-A component")
    w_dir = cmath.exp(2j * math.pi * theta)
    rs = [0.01 * (r_max / 0.01) ** (i / (steps - 1)) for i in range(steps)]
    z = (-2.0 / v) * rs[0] * w_dir          # phi(z) ~ -(v/2) z near 0
    samples = []
    r_prev = None
    for r in rs:
        try:
            z = _ray_newton(v, z * (1.0 if r_prev is None else r / r_prev),
                            r * w_dir, tol)
        except (NoConvergence, BranchAmbiguity, NotInBasin):
            z = _ray_substep(v, samples, r_prev, r, w_dir, z, tol)
        phi, _ = _phi_and_deriv(v, z)
        samples.append((r, z, abs(phi - r * w_dir)))
        r_prev = r
    samples.reverse()
    return RayTrace(samples=samples, truncation_depth=0)


def _ray_newton(v, z, target, tol, max_steps=40):
    for _ in range(max_steps):
        phi, dphi = _phi_and_deriv(v, z)
        g = phi - target
        if abs(g) <= tol:
            return z
        if dphi == 0:
            raise NoConvergence("phi' vanished on the ray")
        z = z - g / dphi
    raise NoConvergence("internal-ray Newton stalled")


def _ray_substep(v, samples, r_prev, r, w_dir, z, tol, depth=6):
    """Halve the potential step until Newton reconnects."""
    if r_prev is None:
        raise ContinuationStall("no valid seed for the internal ray", None)
    lo, z_lo = r_prev, samples[-1][1]
    for _ in range(depth):
        ok = True
        zc = z_lo
        n_sub = 8
        for i in range(1, n_sub + 1):
            ri = lo * (r / lo) ** (i / n_sub)
            try:
                zc = _ray_newton(v, zc, ri * w_dir, tol)
            except (NoConvergence, BranchAmbiguity, NotInBasin):
                ok = False
                break
        if ok:
            return zc
        n_sub *= 2
    raise ContinuationStall("internal ray stalled", last_good=lo)


def find_center_typeC(seed, m: int, k: int | None = None, check: bool = True):
    """Center of the type-C component around the seed.

    Every solution of f^m_v(-2v) = 0 has f^{m-1}_v(-2v) on an even
    critical point 2k*pi, which makes the naive equation a double zero
    in v. Newton therefore runs on the simple-root reformulation
    f^{m-1}_v(-2v) = 2k*pi, and the f^m residual is verified afterward.
    """
    seed = as_parameter(seed)
    if m < 1:
        raise ValueError("m must be >= 1")
    if k is None or check:
        pc_seed = classify(seed)
        if pc_seed.kind is not Kind.C:
            raise NotTypeC("seed %r does not classify C" % (seed,))
        if pc_seed.m != m:
            raise WrongEntryTime("seed has m=%d, requested %d" % (pc_seed.m, m))
        if k is None:
            k = pc_seed.k
    target = TWO_PI * k
    v = seed
    if m == 1:
        v = complex(-k * math.pi)            # -2v = 2k*pi exactly
    else:
        for _ in range(80):
            g, dg = critical_orbit_with_dv(v, m - 1)
            g = g - target
            if abs(g) <= 1e-13 * (1.0 + abs(target)):
                break
            if dg == 0:
                raise NoConvergence("zero derivative in center Newton")
            v = v - g / dg
            if v == 0 or abs(v) > 1e6:
                raise NoConvergence("center Newton left the parameter plane")
        else:
            raise NoConvergence("center Newton exhausted its steps")
    resid, _ = critical_orbit_with_dv(v, m)
    if abs(resid) > CENTER_TOL:
        raise NoConvergence("center residual %.2e above tolerance" % abs(resid))
    if check:
        pc = classify(v)
        if pc.kind is not Kind.C:
            raise ClassDrift("refined center classifies %s" % pc.kind)
        if pc.m != m or pc.k != k:
            raise ClassDrift("refined center has (m,k)=(%d,%d), seed (%d,%d)"
                             % (pc.m, pc.k, m, k))
    return v


def find_center_typeD(seed, p: int, k: int):
    """Newton on v -> f^p_v(c) - c with c = (2k+1) pi on the cycle.

    At the solution the cycle through the odd critical point is
    superattracting (multiplier exactly 0).
    """
    v = as_parameter(seed)
    if p < 1:
        raise ValueError("p must be >= 1")
    c = (2 * k + 1) * math.pi
    for _ in range(80):
        z, dz = c + 0j, 0j
        for _ in range(p):
            s = _kernels.f_eval(1.0, z)          # cos z - 1
            dz = s + _kernels.f_deriv(v, z) * dz
            z = v * s
        g = z - c
        if abs(g) <= CENTER_TOL:
            break
        if dz == 0:
            raise NoConvergence("zero derivative in center Newton")
        v = v - g / dz
        if v == 0 or abs(v) > 1e6:
            raise NoConvergence("center Newton left the parameter plane")
    else:
        raise NoConvergence("center Newton exhausted its steps")
    cyc = [c + 0j]
    for _ in range(p - 1):
        cyc.append(_kernels.f_eval(v, cyc[-1]))
    for z in cyc:
        j = round(z.real / TWO_PI)
        if abs(z - TWO_PI * j) < 1e-6:
            raise Collision("cycle passes through the even critical point %d*2pi" % j)
    for d in range(1, p):
        if p % d == 0 and abs(_kernels.fp_with_deriv(v, c + 0j, d)[0] - c) < 1e-8:
            raise NoConvergence("converged to a center of lower period %d" % d)
    return v


def multiplier_map(v, p: int) -> complex:
    """Multiplier of the attracting cycle of a type-D parameter."""
    v = as_parameter(v)
    pc = classify(v)
    if pc.kind is not Kind.D:
        raise NotTypeD("v=%r is not type D" % (v,))
    if pc.p != p:
        raise NotTypeD("type-D period is %d, requested %d" % (pc.p, p))
    cyc, mult = find_cycle(v, pc.certificate.cycle[0], p)
    assert abs(mult) < 1.0
    return mult


@dataclass
class ComponentRecord:
    """A located hyperbolic component with optional boundary trace."""
    kind: Kind
    center: complex | None = None
    m: int = 0
    k: int = 0
    p: int = 0
    boundary: list = field(default_factory=list)
    boundary_meta: str = ""


def _solve_2x2(a11, a12, a21, a22, b1, b2):
    det = a11 * a22 - a12 * a21
    if det == 0:
        raise NoConvergence("singular Jacobian in boundary continuation")
    return (b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det


def _cycle_state(v, z0, p):
    """Forward-mode state for the extended system (fixed point, multiplier).

    Returns z_p, a=dz_p/dz0, b=dz_p/dv, M=(f^p)'(z0), aM=dM/dz0, bM=dM/dv.
    """
    z = z0
    a = 1.0 + 0j
    b = 0j
    M = 1.0 + 0j
    aM = 0j
    bM = 0j
    for _ in range(p):
        fp = _kernels.f_deriv(v, z)            # -v sin z
        fpp = -v * cmath.cos(z)
        fpv = -cmath.sin(z)                    # d/dv of f'
        s = _kernels.f_eval(1.0, z)            # cos z - 1 = d/dv of f
        aM = aM * fp + M * fpp * a
        bM = bM * fp + M * (fpv + fpp * b)
        M = M * fp
        a = fp * a
        b = s + fp * b
        z = v * s
    return z, a, b, M, aM, bM


def _newton_multiplier_target(v, z, p, target, tol=1e-12, max_steps=60):
    """Solve f^p(z)=z, (f^p)'(z)=target in (z, v)."""
    for _ in range(max_steps):
        zp, a, b, M, aM, bM = _cycle_state(v, z, p)
        g1 = zp - z
        g2 = M - target
        if abs(g1) <= tol and abs(g2) <= tol:
            return v, z
        dz, dv = _solve_2x2(a - 1.0, b, aM, bM, g1, g2)
        z = z - dz
        v = v - dv
    raise NoConvergence("multiplier-target Newton stalled")


def trace_boundary(record: ComponentRecord, n_vertices: int = 256,
                   eps: float = 1e-3, check_simple: bool = True) -> list:
    """Closed boundary polyline of a hyperbolic component.

    Type D: the exact curve |multiplier|=1 by predictor-corrector
    continuation in the target e^{2 pi i t}. Types A and C: the level
    curve |Phi| = 1-eps, an eps-approximation of the Jordan boundary.
    The asymmetry is recorded in record.boundary_meta.
    """
    if record.kind is Kind.D:
        verts = _trace_boundary_D(record, n_vertices)
        record.boundary_meta = "multiplier_circle"
    elif record.kind is Kind.C:
        verts = _trace_level_curve(record, n_vertices, 1.0 - eps, cover=1)
        record.boundary_meta = "level_curve(eps=%g)" % eps
    elif record.kind is Kind.A:
        verts = _trace_level_curve(record, n_vertices, 1.0 - eps, cover=2)
        record.boundary_meta = "level_curve(eps=%g)" % eps
    else:
        raise ValueError("no boundary for kind %s" % record.kind)
    if check_simple and not polyline_is_simple(verts, closed=True):
        raise SelfIntersection("boundary trace crosses itself at resolution")
    record.boundary = verts
    return verts


def _trace_boundary_D(record, n):
    v = record.center
    if v is None:
        raise ValueError("record needs a certified center")
    p = record.p
    z = (2 * record.k + 1) * math.pi + 0j
    # walk the multiplier radially 0 -> 1 at angle t=0, then sweep the circle
    for rho in (0.2, 0.4, 0.6, 0.8, 0.9, 0.97, 1.0):
        v, z = _newton_multiplier_target(v, z, p, rho + 0j)
    verts = []
    for jj in range(n):
        t = jj / n
        target = cmath.exp(2j * math.pi * t)
        v, z = _continue_multiplier(v, z, p, verts, target)
        verts.append(v)
    return verts


def _continue_multiplier(v, z, p, verts, target, depth=8):
    try:
        return _newton_multiplier_target(v, z, p, target)
    except NoConvergence:
        pass
    # substep: bisect on the unit-circle arc toward the target
    zp, a, b, M, aM, bM = _cycle_state(v, z, p)
    t0 = cmath.phase(M) / TWO_PI
    t1 = cmath.phase(target) / TWO_PI
    while t1 < t0:
        t1 += 1.0
    nsub = 2
    for _ in range(depth):
        vv, zz = v, z
        try:
            for i in range(1, nsub + 1):
                ti = t0 + (t1 - t0) * i / nsub
                vv, zz = _newton_multiplier_target(vv, zz, p, cmath.exp(2j * math.pi * ti))
            return vv, zz
        except NoConvergence:
            nsub *= 2
    raise ContinuationStall("type-D boundary stalled", last_good=verts[-1] if verts else v)


def _trace_level_curve(record, n, level, cover):
    if record.kind is Kind.C:
        def Phi(v):
            return phiU(v, record.m, check=False)
    else:
        def Phi(v):
            return phi0(v, check=False)
    v = record.center
    if v is None:
        raise ValueError("record needs a certified interior point")
    # radial ramp from the interior out to the level circle at angle 0
    cur = Phi(v)
    start_arg = cmath.phase(cur) / TWO_PI if cur != 0 else 0.0
    for c in (0.3, 0.6, 0.85, level):
        v = _level_newton(Phi, v, c * cmath.exp(2j * math.pi * start_arg))
    span = float(cover)
    verts = []
    for jj in range(n):
        t = start_arg + span * jj / n
        target = level * cmath.exp(2j * math.pi * t)
        v = _continue_level(Phi, v, target, verts)
        verts.append(v)
    return verts


def _level_newton(Phi, v, target, tol=1e-11, max_steps=50):
    for _ in range(max_steps):
        g = Phi(v) - target
        if abs(g) <= tol:
            return v
        h = 1e-7 * (1.0 + abs(v))
        d = (Phi(v + h) - Phi(v - h)) / (2.0 * h)
        if d == 0:
            raise NoConvergence("zero derivative on level curve")
        v = v - g / d
    raise NoConvergence("level-curve Newton stalled")


def _continue_level(Phi, v, target, verts, depth=8):
    try:
        return _level_newton(Phi, v, target)
    except (NoConvergence, BranchAmbiguity, NotInBasin):
        pass
    cur = Phi(v)
    nsub = 2
    for _ in range(depth):
        vv = v
        try:
            for i in range(1, nsub + 1):
                ti = i / nsub
                tgt = cur + (target - cur) * ti
                tgt = tgt / abs(tgt) * (abs(cur) + (abs(target) - abs(cur)) * ti)
                vv = _level_newton(Phi, vv, tgt)
            return vv
        except (NoConvergence, BranchAmbiguity, NotInBasin):
            nsub *= 2
    raise ContinuationStall("level curve stalled", last_good=verts[-1] if verts else v)


def boundary_closure(verts):
    """(gap between endpoints, max continuation step)."""
    return polyline_closure_gap(verts)
