"""Exception taxonomy for the cosdyn library."""


class CosdynError(Exception):
    """Base class for all library-specific failures."""


class NotInBasin(CosdynError):
    """Orbit of the point does not converge to 0 within budget."""


class BranchAmbiguity(CosdynError):
    """A ratio term of the Boettcher log series left the safe disk |w-1|<1."""


class NoConvergence(CosdynError):
    """An iterative solver exhausted its step budget."""


class DegenerateJacobian(NoConvergence):
    """Newton derivative underflowed (near-parabolic cycle)."""


class NotTypeA(CosdynError):
    pass


class NotTypeC(CosdynError):
    pass


class NotTypeD(CosdynError):
    pass


class WrongEntryTime(CosdynError):
    """Supplied entry time m disagrees with the computed m(v)."""


class ClassDrift(CosdynError):
    """A refined parameter classifies differently from its seed."""


class Collision(CosdynError):
    """A solved superattracting cycle ran into an even critical point,
    or a Newton path crossed the slit-failure region."""


class ContinuationStall(CosdynError):
    """Path continuation failed after step halving."""

    def __init__(self, msg, last_good=None):
        super().__init__(msg)
        self.last_good = last_good


class SelfIntersection(CosdynError):
    """A traced boundary polyline crosses itself at resolution."""


class OnSlit(CosdynError):
    """Point violates the slit margin of Gamma = [-2v,0] u R>=0."""


class BranchFailure(CosdynError):
    """No inverse-branch candidate lands in the requested half strip."""


class SlitCollision(CosdynError):
    """An intermediate point of a ray composition hit the slit margin."""


class ResolutionLimit(CosdynError):
    """Flood-fill refinement exhausted without disambiguating membership."""


class AmbiguousTranslate(ResolutionLimit):
    """Two 2*pi*k translates both contain the point at resolution."""


class InsideH0(CosdynError):
    """Operation requires v outside the closure of the type-A component."""
