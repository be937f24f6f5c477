"""Parameter classification A / C{m,k} / D{p} / Escaping / Undecided.

The A-vs-C split tests whether -2v lies in the immediate basin of 0,
approximated from below by a flood fill at finite resolution. Ambiguous
hits near the fill boundary trigger resolution refinement; parameters
that exhaust refinement come back Undecided rather than guessed.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .core import OrbitBudget, OrbitOutcome, orbit, as_parameter
from .errors import AmbiguousTranslate, ResolutionLimit

DIAM_BOUND_COEFF = 8.0 * math.sqrt(2.0)    # diam B_v <= 8*sqrt(2)/|v|


class Kind(Enum):
    A = "A"
    C = "C"
    D = "D"
    ESCAPING = "Escaping"
    UNDECIDED = "Undecided"


_KIND_BY_CODE = {
    _kernels.KIND_A: Kind.A,
    _kernels.KIND_C: Kind.C,
    _kernels.KIND_D: Kind.D,
    _kernels.KIND_ESCAPING: Kind.ESCAPING,
    _kernels.KIND_UNDECIDED: Kind.UNDECIDED,
}


@dataclass(frozen=True)
class BasinApprox:
    """Inner approximation of B_v: marked cells of a square grid."""
    v: complex
    halfwidth: float
    n: int                      # cells per side
    marked: np.ndarray          # uint8 (n, n); 1 = in component
    overflowed: bool
    count: int

    @property
    def resolution(self) -> float:
        return 2.0 * self.halfwidth / self.n

    @property
    def bbox(self):
        hw = self.halfwidth
        return (-hw, -hw, hw, hw)

    @property
    def diam(self) -> float:
        return _kernels.diam_of_marked(self.marked, self.n, self.halfwidth)

    def membership(self, z: complex) -> int:
        """0 clean outside, 1 interior, 2 boundary band at resolution."""
        return _kernels.membership(self.marked, self.n, self.halfwidth, complex(z))

    def __contains__(self, z) -> bool:
        return self.membership(z) == 1

    def cell_centers(self):
        idx = np.argwhere(self.marked == 1)
        res = self.resolution
        return (-self.halfwidth + (idx[:, 1] + 0.5) * res) + \
            1j * (-self.halfwidth + (idx[:, 0] + 0.5) * res)


@dataclass(frozen=True)
class ParamClass:
    kind: Kind
    m: int = 0                  # entry time (C)
    k: int = 0                  # strip translate index (C)
    p: int = 0                  # cycle period (D)
    certificate: OrbitOutcome | None = None
    basin_diam: float | None = None


def default_fill_halfwidth(v) -> float:
    """Half-width min(20, 4 + 16/|v|); keeps the worst case ~1e6 cells."""
    return _kernels.default_fill_halfwidth(as_parameter(v))


def basin_flood_fill(v, resolution: float | None = None,
                     halfwidth: float | None = None,
                     budget: OrbitBudget = OrbitBudget(),
                     cap: int | None = None) -> BasinApprox:
    """Connected component of converging cells containing the cell of 0.

    An overflowed fill (cap exceeded) is evidence that B_v is unbounded,
    i.e. for type A; the flag is returned, not raised.
    """
    v = as_parameter(v)
    budget.validate()
    if halfwidth is None:
        halfwidth = default_fill_halfwidth(v)
    if resolution is None:
        n = 512
    else:
        if resolution <= 0:
            raise ValueError("resolution must be > 0")
        n = max(8, int(round(2.0 * halfwidth / resolution)))
    if cap is None:
        cap = (n * n) // 2
    marked, overflowed, reached, count = _kernels.fill_kernel(
        v, n, halfwidth, budget.max_iter, budget.delta(v), budget.escape_im,
        cap, 0j, False)
    return BasinApprox(v, halfwidth, n, marked, bool(overflowed), int(count))


def classify(v, budget: OrbitBudget = OrbitBudget()) -> ParamClass:
    """Classify the parameter by the fate of its free critical orbit."""
    v = as_parameter(v)
    budget.validate()
    delta_in = -1.0 if budget.conv_radius is None else budget.conv_radius
    kind_code, m, k, p, mult_abs, steps, diam = _kernels.classify_point(
        v, budget.max_iter, budget.escape_im, 512, 3, True, delta_in)
    kind = _KIND_BY_CODE[kind_code]
    cert = orbit(v, -2.0 * v, budget)
    return ParamClass(kind, m=int(m), k=int(k), p=int(p), certificate=cert,
                      basin_diam=None if math.isnan(diam) else float(diam))


def m_of_v(v, basin: BasinApprox, budget: OrbitBudget = OrbitBudget(),
           refinements: int = 3) -> int:
    """Smallest n >= 1 with f^n(-2v) inside the basin approximation.

    Band-ambiguous hits refine the fill by halving the resolution, up to
    `refinements` times.
    """
    v = as_parameter(v)
    n = basin.n
    hw = basin.halfwidth
    marked = basin.marked
    for level in range(refinements + 1):
        m, amb = _kernels.entry_time_kernel(v, marked, n, hw, budget.max_iter)
        if m >= 1 and not amb:
            return int(m)
        if level == refinements:
            break
        n *= 2
        ba = basin_flood_fill(v, resolution=2.0 * hw / n, halfwidth=hw,
                              budget=budget)
        marked = ba.marked
    raise ResolutionLimit("entry time not resolved at max refinement")


def k_of_v(v, m: int, basin: BasinApprox, budget: OrbitBudget = OrbitBudget(),
           refinements: int = 3) -> int:
    """Translate index: f^{m-1}(-2v) lies in (basin) + 2k*pi, k != 0."""
    v = as_parameter(v)
    n = basin.n
    hw = basin.halfwidth
    marked = basin.marked
    for level in range(refinements + 1):
        k, status = _kernels.translate_index_kernel(v, marked, n, hw, m)
        if status == 0:
            return int(k)
        if status == 2:
            raise AmbiguousTranslate("two translates contain the point")
        if level == refinements:
            break
        n *= 2
        ba = basin_flood_fill(v, resolution=2.0 * hw / n, halfwidth=hw,
                              budget=budget)
        marked = ba.marked
    raise ResolutionLimit("translate index not resolved at max refinement")


def diam_bound(v) -> float:
    """Paper bound on diam B_v for |v| large: 8*sqrt(2)/|v|."""
    return DIAM_BOUND_COEFF / abs(as_parameter(v))
