"""Polyline containers and their CSV forms, shared by rays and boundaries."""

from dataclasses import dataclass, field


@dataclass
class RayTrace:
    """Samples of a traced ray, ordered by strictly decreasing potential."""
    samples: list = field(default_factory=list)   # (t, z, residual)
    landing_candidate: complex | None = None
    landed: bool = False
    truncation_depth: int = 0
    stop_reason: str = ""
    t_min_bracket: tuple | None = None            # (t_fail, t_last_good)

    def potentials(self):
        return [s[0] for s in self.samples]

    def points(self):
        return [s[1] for s in self.samples]

    def residuals(self):
        return [s[2] for s in self.samples]

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("t,re,im,residual,landed\n")
            last = len(self.samples) - 1
            for i, (t, z, r) in enumerate(self.samples):
                flag = int(self.landed) if i == last else ""
                fh.write("%.17g,%.17g,%.17g,%.17g,%s\n" % (t, z.real, z.imag, r, flag))


def polyline_to_csv(path, samples):
    """Boundary/internal-ray serialization: index, t_or_r, re, im, residual."""
    with open(path, "w") as fh:
        fh.write("index,t_or_r,re,im,residual\n")
        for i, (t, z, r) in enumerate(samples):
            fh.write("%d,%.17g,%.17g,%.17g,%.17g\n" % (i, t, z.real, z.imag, r))


def _segments_intersect(p1, p2, p3, p4):
    def orient(a, b, c):
        d = (b.real - a.real) * (c.imag - a.imag) - (b.imag - a.imag) * (c.real - a.real)
        if d > 0:
            return 1
        if d < 0:
            return -1
        return 0

    o1 = orient(p1, p2, p3)
    o2 = orient(p1, p2, p4)
    o3 = orient(p3, p4, p1)
    o4 = orient(p3, p4, p2)
    return o1 != o2 and o3 != o4


def polyline_is_simple(points, closed=True):
    """True when no two non-adjacent segments cross (O(n^2) sweep)."""
    n = len(points)
    segs = []
    for i in range(n - 1):
        segs.append((points[i], points[i + 1]))
    if closed and n > 2:
        segs.append((points[-1], points[0]))
    m = len(segs)
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1 and closed:
                continue
            if _segments_intersect(*segs[i], *segs[j]):
                return False
    return True


def polyline_closure_gap(points):
    """Distance between first and last vertex, and the max step size."""
    gap = abs(points[0] - points[-1])
    step = max(abs(points[i + 1] - points[i]) for i in range(len(points) - 1))
    return gap, step
