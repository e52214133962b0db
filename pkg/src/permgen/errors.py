"""Exception hierarchy shared across the package."""


class PermgenError(Exception):
    """Base class for all errors raised by this package."""


class EmptyCorpus(PermgenError):
    """An operation that needs at least one corpus item got an empty corpus."""


class DimensionMismatch(PermgenError):
    """Mixed ambient dimensions, or a point of the wrong dimension."""


class DuplicateCreation(PermgenError):
    """A corpus or an insertion would contain the same point twice."""


class EmptyPolytope(PermgenError):
    """The requested quantity is undefined on the empty polytope."""


class ZeroVolumeBounding(PermgenError):
    """Monte Carlo integration needs a bounding region of positive volume."""


class InsufficientPoints(PermgenError):
    """Fewer points than the operation requires (e.g. d + 2 for a Radon split)."""


class DegenerateSystem(PermgenError):
    """A linear system stayed degenerate after deterministic perturbation retries."""


class GridExplosion(PermgenError):
    """A coordinate-recombination grid exceeds the materialization limit."""


class SpliceOnContinuum(PermgenError):
    """Coordinate recombination applied to an infinite convex region is rejected."""


class NotConvexValued(PermgenError):
    """The operation requires a generator whose images are convex."""


class ProtectedSetNotInCorpus(PermgenError):
    """A protected set contains items that are not corpus members."""


class ZeroGenerableVolume(PermgenError):
    """A volume ratio is undefined because the generable set has zero volume."""


class DimensionNotOne(PermgenError):
    """The successive-maxima bound is only defined for one-dimensional corpora."""


class MisalignedCheckpoints(PermgenError):
    """Trajectories must share an identical checkpoint schedule to be summarized."""


class BoundViolation(PermgenError):
    """A measured quantity exceeded a bound it is required to satisfy."""
