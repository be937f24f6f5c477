"""The cosine family f_v(z) = v(cos z - 1): evaluation, orbits, cycles.

All maps are evaluated through -2v sin^2(z/2), which is the same function
without the cancellation of cos z - 1 near the superattracting point.
"""

from dataclasses import dataclass, field
from enum import Enum

from . import _kernels
from .errors import DegenerateJacobian, NoConvergence


def as_parameter(v) -> complex:
    """Validate and coerce a family parameter (v=0 is excluded)."""
    v = complex(v)
    if v == 0:
        raise ValueError("v=0 is not a member of the family")
    return v


def f_eval(v, z: complex) -> complex:
    """f_v(z) = v(cos z - 1)."""
    v = as_parameter(v)
    return _kernels.f_eval(v, complex(z))


def f_deriv(v, z: complex) -> complex:
    """f_v'(z) = -v sin z; vanishes at every critical point k*pi."""
    v = as_parameter(v)
    return _kernels.f_deriv(v, complex(z))


class Fate(Enum):
    CONVERGED_TO_ZERO = "converged_to_zero"
    ATTRACTED_CYCLE = "attracted_cycle"
    ESCAPED = "escaped"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class OrbitBudget:
    """Iteration budget and thresholds for orbit fate detection.

    conv_radius None means the default delta = min(0.05, 1/(4|v|)),
    which makes D(0, delta) forward invariant.
    """
    max_iter: int = 1000
    conv_radius: float | None = None
    escape_im: float = 50.0

    def validate(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.conv_radius is not None and self.conv_radius <= 0:
            raise ValueError("conv_radius must be > 0")
        if self.escape_im <= 0:
            raise ValueError("escape_im must be > 0")

    def delta(self, v: complex) -> float:
        if self.conv_radius is not None:
            return self.conv_radius
        return _kernels.default_delta(v)


@dataclass(frozen=True)
class OrbitOutcome:
    """Certified fate of an orbit."""
    kind: Fate
    steps_used: int
    entry_index: int | None = None          # ConvergedToZero only
    cycle: tuple = field(default=())        # AttractedCycle only
    period: int = 0
    multiplier: complex = 0j
    renormalizable_flag: bool = False


def orbit(v, z0: complex, budget: OrbitBudget = OrbitBudget()) -> OrbitOutcome:
    """Iterate z0 under f_v until the fate is certified.

    Escape is declared on |Im z| > escape_im (real orbits are bounded, so
    a modulus threshold would misfire); convergence on entering
    D(0, delta); attracting cycles by Brent detection on the tail plus
    Newton refinement. Anything else is Undecided.
    """
    v = as_parameter(v)
    budget.validate()
    delta = budget.delta(v)
    fate, steps, entry, p, zs, mult = _kernels.orbit_kernel(
        v, complex(z0), budget.max_iter, delta, budget.escape_im)
    if fate == _kernels.FATE_ESCAPED:
        return OrbitOutcome(Fate.ESCAPED, steps)
    if fate == _kernels.FATE_UNDECIDED:
        return OrbitOutcome(Fate.UNDECIDED, steps)
    if fate == _kernels.FATE_CONVERGED:
        return OrbitOutcome(Fate.CONVERGED_TO_ZERO, steps, entry_index=entry)
    cyc = [zs]
    for _ in range(p - 1):
        cyc.append(_kernels.f_eval(v, cyc[-1]))
    out = OrbitOutcome(Fate.ATTRACTED_CYCLE, steps, cycle=tuple(cyc),
                       period=p, multiplier=mult, renormalizable_flag=True)
    assert abs(mult) < 1.0
    assert abs(_kernels.fp_with_deriv(v, zs, p)[0] - zs) <= 1e-9
    return out


def find_cycle(v, seed: complex, p: int):
    """Newton on z -> f^p(z) - z from seed.

    Returns (cycle, multiplier) where cycle is the tuple
    (z, f(z), ..., f^{p-1}(z)) and multiplier the derivative product.
    """
    v = as_parameter(v)
    if p < 1:
        raise ValueError("period must be >= 1")
    status, zs, mult, pmin = _kernels.certify_cycle(v, complex(seed), p)
    if status == 2:
        raise DegenerateJacobian("|(f^p)'(z) - 1| underflowed near the seed")
    if status == 1:
        raise NoConvergence("Newton did not reach a period-%d point" % p)
    # report the requested period even when it is a multiple of the
    # primitive one; the multiplier is taken over the full p steps
    cyc = [zs]
    for _ in range(p - 1):
        cyc.append(_kernels.f_eval(v, cyc[-1]))
    _, mult_p = _kernels.fp_with_deriv(v, zs, p)
    return tuple(cyc), mult_p


def critical_orbit_with_dv(v, n: int):
    """(f^n_v(-2v), d/dv of it) by forward-mode differentiation."""
    v = as_parameter(v)
    z = -2.0 * v
    dz = -2.0 + 0j
    for _ in range(n):
        s = _kernels.f_eval(1.0, z)          # cos z - 1
        dz = s + _kernels.f_deriv(v, z) * dz
        z = v * s
    return z, dz
