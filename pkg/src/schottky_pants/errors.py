"""Exception types shared across the package."""


class SchottkyPantsError(Exception):
    """Base class for all package errors."""


class SingularMatrix(SchottkyPantsError):
    """Matrix has (numerically) vanishing determinant."""


class IsIdentity(SchottkyPantsError):
    """Operation undefined for the identity transformation."""


class AmbiguousClass(SchottkyPantsError):
    """tr^2 lies too close to the boundary of [0,4] to classify at this eps."""

    def __init__(self, trace_sq, margin, eps):
        self.trace_sq = trace_sq
        self.margin = margin
        self.eps = eps
        super().__init__(
            f"tr^2 = {trace_sq} is within eps={eps} of the deciding segment "
            f"[0,4] (distance {margin}); refine eps or treat input as degenerate"
        )


class NoAxis(SchottkyPantsError):
    """Transformation has no axis (parabolic or identity)."""


class UnknownGenerator(SchottkyPantsError):
    """Word uses a letter the representation does not define."""


class UnsupportedMove(SchottkyPantsError):
    """Requested rewriting move is not in the prescribed catalog."""


class InconclusiveNonelementarity(SchottkyPantsError):
    """Neither a nonelementarity witness nor an elementary certificate was
    found within the configured scan bounds."""


class ElementaryRepresentation(SchottkyPantsError):
    """The representation is elementary; the pipeline requires nonelementary."""

    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__(f"elementary representation: {certificate}")


class SwapsBothFixedPoints(SchottkyPantsError):
    """The auxiliary map interchanges both fixed points of the base map
    (excluded hypothesis: a = d = 0 in conjugated coordinates)."""


class SharesFixedPoint(SchottkyPantsError):
    """The auxiliary map fixes the parabolic's fixed point (c = 0 in
    conjugated coordinates)."""


class HypothesisViolated(SchottkyPantsError):
    """Input does not satisfy the hypotheses of the requested criterion."""


class ExponentCapExceeded(SchottkyPantsError):
    """Incremental exponent search hit the configured soft cap."""


class NotAnInvolution(SchottkyPantsError):
    """Element is not of order two (trace not within eps of 0)."""


class NotEllipticFamily(SchottkyPantsError):
    """Family contains a non-elliptic, non-identity element."""


class CertificationFailed(SchottkyPantsError):
    """No disjoint circle system found on the search grid.  Not a disproof;
    callers should enlarge traces and retry."""

    def __init__(self, best_margin, detail=""):
        self.best_margin = best_margin
        super().__init__(
            f"no disjoint circle system found (best separation {best_margin:.3g})"
            + (f"; {detail}" if detail else "")
        )


class SearchExhausted(SchottkyPantsError):
    """A pipeline search ran out of candidates or hit a cap."""

    def __init__(self, step, detail=""):
        self.step = step
        super().__init__(f"search exhausted at {step}" + (f": {detail}" if detail else ""))


class ParityObstruction(SchottkyPantsError):
    """Twist requirements have odd total parity; no integral solution."""

    def __init__(self, m, n):
        self.m = m
        self.n = n
        super().__init__(f"m + n = {m + n} is odd; no integral twist solution")


class MalformedGraph(SchottkyPantsError):
    """Decomposition graph does not have the pipeline shape."""


class RelatorViolated(SchottkyPantsError):
    """Generator images do not satisfy the surface relator within tolerance."""


class ValidationFailure(SchottkyPantsError):
    """A certificate document failed re-verification."""

    def __init__(self, check, detail=""):
        self.check = check
        super().__init__(f"check '{check}' failed" + (f": {detail}" if detail else ""))
