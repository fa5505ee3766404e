"""Weighted finite-dimensional p-norm spaces and their duality mappings.

A space is fixed by a dimension ``n``, an exponent ``p`` with 1 < p < inf,
and strictly positive coordinate weights ``w`` (a discrete measure; all ones
for the plain p-norm). The primal norm is

    ||x||_p = (sum_s w_s |x_s|^p)^(1/p)

and the dual side carries the conjugate exponent q = p/(p-1) with the same
weights, paired through <phi, x> = sum_s w_s phi_s x_s.

The normalized duality mapping J sends x to the unique dual vector with
<J(x), x> = ||x||^2 and ||J(x)||_q = ||x||. Componentwise,

    J(x)_s = |x_s|^(p-2) x_s / ||x||^(p-2),

with J(0) = 0 by convention; the inverse mapping J* uses the same formula
with q on the dual side, and J* o J is the identity. The smoothness
functional psi(x, y) = <J(x), y> / ||x|| equals the one-sided derivative of
t -> ||x + t y|| at t = 0+.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, DimensionMismatchError

# Exponents outside this range make |x|^(p-2) too ill-conditioned to verify
# at 64-bit precision.
P_MIN = 1.1
P_MAX = 10.0

# A point whose norm is <= THETA_TOL_SCALE * n is treated as the origin.
THETA_TOL_SCALE = 1e-12

CONJUGATE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpaceConfig:
    """A weighted p-norm space of dimension n (and its q-norm dual).

    ``weights`` defaults to all ones. ``q`` is derived from ``p`` unless
    given explicitly, in which case 1/p + 1/q = 1 is checked.
    """

    n: int
    p: float
    weights: np.ndarray | None = None
    q: float = field(default=0.0)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension must be positive, got {self.n}")
        if not (P_MIN <= self.p <= P_MAX):
            raise ValueError(f"exponent p must lie in [{P_MIN}, {P_MAX}], got {self.p}")
        q = self.p / (self.p - 1.0)
        if self.q:
            if abs(1.0 / self.p + 1.0 / self.q - 1.0) > CONJUGATE_TOL:
                raise ValueError(f"q={self.q} is not conjugate to p={self.p}")
        else:
            object.__setattr__(self, "q", q)
        if self.weights is None:
            w = np.ones(self.n)
        else:
            w = np.asarray(self.weights, dtype=np.float64).copy()
        if w.shape != (self.n,):
            raise DimensionMismatchError(f"need {self.n} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("all weights must be finite and strictly positive")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def theta_tol(self) -> float:
        return THETA_TOL_SCALE * self.n

    def compatible_with(self, other: "SpaceConfig") -> bool:
        return self is other or (
            self.n == other.n
            and self.p == other.p
            and np.array_equal(self.weights, other.weights)
        )

    # -- point constructors ------------------------------------------------

    def primal(self, coords) -> "PrimalPoint":
        return PrimalPoint(coords, self)

    def dual(self, coords) -> "DualPoint":
        return DualPoint(coords, self)

    def zero_primal(self) -> "PrimalPoint":
        return PrimalPoint(np.zeros(self.n), self)

    def zero_dual(self) -> "DualPoint":
        return DualPoint(np.zeros(self.n), self)


def _freeze_coords(coords, n: int) -> np.ndarray:
    c = np.asarray(coords, dtype=np.float64).copy()
    if c.shape != (n,):
        raise DimensionMismatchError(f"expected {n} coordinates, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("coordinates must be finite")
    c.flags.writeable = False
    return c


class _Point:
    """Shared arithmetic for primal and dual coordinate vectors.

    Instances are immutable: the coordinate array is read-only and the
    attributes cannot be rebound after construction.
    """

    __slots__ = ("coords", "space")

    def __init__(self, coords, space: SpaceConfig):
        object.__setattr__(self, "coords", _freeze_coords(coords, space.n))
        object.__setattr__(self, "space", space)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _like(self, coords):
        return type(self)(coords, self.space)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if not self.space.compatible_with(other.space):
            raise DimensionMismatchError("points live in different spaces")

    def __add__(self, other):
        self._check(other)
        return self._like(self.coords + other.coords)

    def __sub__(self, other):
        self._check(other)
        return self._like(self.coords - other.coords)

    def __neg__(self):
        return self._like(-self.coords)

    def __mul__(self, scalar: float):
        return self._like(self.coords * float(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return f"{type(self).__name__}({np.array2string(self.coords, precision=6)})"


class PrimalPoint(_Point):
    """A vector of the space itself (measured in the p-norm)."""


class DualPoint(_Point):
    """A vector of the dual space (measured in the q-norm, same weights)."""


def norm_primal(x: PrimalPoint) -> float:
    """Weighted p-norm (sum_s w_s |x_s|^p)^(1/p)."""
    sp = x.space
    return float(np.sum(sp.weights * np.abs(x.coords) ** sp.p) ** (1.0 / sp.p))


def norm_dual(xs: DualPoint) -> float:
    """Weighted q-norm of a dual vector; equals ||J(x)|| whenever xs = J(x)."""
    sp = xs.space
    return float(np.sum(sp.weights * np.abs(xs.coords) ** sp.q) ** (1.0 / sp.q))


def is_theta(point: PrimalPoint | DualPoint) -> bool:
    """Whether the point is at (or numerically indistinguishable from) the origin."""
    if isinstance(point, DualPoint):
        return norm_dual(point) <= point.space.theta_tol
    return norm_primal(point) <= point.space.theta_tol


def pair(xs: DualPoint, x: PrimalPoint) -> float:
    """Canonical weighted pairing <xs, x> = sum_s w_s xs_s x_s."""
    if not xs.space.compatible_with(x.space):
        raise DimensionMismatchError("pairing requires a common space")
    return float(np.sum(x.space.weights * xs.coords * x.coords))


def duality_map(x: PrimalPoint) -> DualPoint:
    """Normalized duality mapping J, with J(0) = 0.

    Satisfies <J(x), x> = ||x||_p^2 and ||J(x)||_q = ||x||_p.
    """
    sp = x.space
    nrm = norm_primal(x)
    if nrm <= sp.theta_tol:
        return sp.zero_dual()
    c = x.coords
    # sign(x)*|x|^(p-1) is safe for all p > 1, including zero entries.
    out = np.sign(c) * np.abs(c) ** (sp.p - 1.0) / nrm ** (sp.p - 2.0)
    return DualPoint(out, sp)


def duality_map_inv(xs: DualPoint) -> PrimalPoint:
    """Inverse duality mapping J*; J* o J and J o J* are identities."""
    sp = xs.space
    nrm = norm_dual(xs)
    if nrm <= sp.theta_tol:
        return sp.zero_primal()
    c = xs.coords
    out = np.sign(c) * np.abs(c) ** (sp.q - 1.0) / nrm ** (sp.q - 2.0)
    return PrimalPoint(out, sp)


def smoothness(x: PrimalPoint, y: PrimalPoint) -> float:
    """One-sided derivative of t -> ||x + t y|| at t = 0+, i.e. <J(x), y>/||x||.

    Raises DegenerateInputError when x is numerically the origin, where the
    norm is not differentiable.
    """
    nrm = norm_primal(x)
    if nrm <= x.space.theta_tol:
        raise DegenerateInputError("smoothness functional is undefined at the origin")
    return pair(duality_map(x), y) / nrm
