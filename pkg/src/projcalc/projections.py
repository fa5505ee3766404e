"""Closed-form metric projections onto four convex sets.

Supported sets, all centered at the origin of a weighted p-norm space:

* ``Ball(r)``            -- points with ||x|| <= r; projection is radial
  scaling (r/||x||) x outside, identity inside.
* ``Cylinder(r, mask)``  -- points whose masked part satisfies ||x_M|| <= r;
  projection rescales the masked part and leaves the rest alone.
* ``CoordSubspace(mask)``-- coordinate subspace; projection truncates the
  complement coordinates to zero, for every exponent p.
* ``PositiveCone()``     -- componentwise nonnegative vectors; projection is
  the componentwise positive part.

``variational_residual`` turns the variational characterization
u = P(x)  iff  <J(x - u), u - z> >= 0 for all z in the set
into a falsifiable sampled quantity: the minimum of the pairing over a
list of feasible competitors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatchError, PreconditionError, UnsupportedSetError
from .space import PrimalPoint, duality_map, is_theta, norm_primal, pair

# Boundary band, relative to the radius. Boundary cases are constructed
# exactly in tests, so the band only has to absorb rounding.
DEFAULT_BAND_SCALE = 1e-9

SET_MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class Ball:
    r: float

    def __post_init__(self):
        if not self.r > 0.0:
            raise ValueError(f"ball radius must be positive, got {self.r}")


@dataclass(frozen=True)
class Cylinder:
    r: float
    mask: frozenset[int]

    def __post_init__(self):
        if not self.r > 0.0:
            raise ValueError(f"cylinder radius must be positive, got {self.r}")
        object.__setattr__(self, "mask", frozenset(self.mask))
        if not self.mask:
            raise ValueError("cylinder mask must be nonempty")


@dataclass(frozen=True)
class CoordSubspace:
    mask: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "mask", frozenset(self.mask))


@dataclass(frozen=True)
class PositiveCone:
    pass


ConvexSet = Ball | Cylinder | CoordSubspace | PositiveCone


class RegionKind(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class RegionTag:
    kind: RegionKind
    band: float


# -- masks -------------------------------------------------------------------


def check_mask(mask: frozenset[int], n: int) -> None:
    for i in mask:
        if not (0 <= i < n):
            raise DimensionMismatchError(f"mask index {i} outside 0..{n - 1}")


def mask_complement(mask: frozenset[int], n: int) -> frozenset[int]:
    check_mask(mask, n)
    return frozenset(range(n)) - mask


def _mask_array(mask: frozenset[int], n: int) -> np.ndarray:
    check_mask(mask, n)
    sel = np.zeros(n, dtype=bool)
    if mask:
        sel[sorted(mask)] = True
    return sel


def mask_restrict(point, mask: frozenset[int]):
    """Zero out every coordinate outside the mask (x = x_M + x_Mbar exactly)."""
    sel = _mask_array(frozenset(mask), point.space.n)
    return type(point)(np.where(sel, point.coords, 0.0), point.space)


def _masked(set_: ConvexSet, x: PrimalPoint) -> PrimalPoint:
    if isinstance(set_, Ball):
        return x
    return mask_restrict(x, set_.mask)


# -- positive/negative parts --------------------------------------------------


def pos_part(f):
    """Componentwise positive part; zero entries land in neither part."""
    return type(f)(np.where(f.coords > 0.0, f.coords, 0.0), f.space)


def neg_part(f):
    """Componentwise negative part, so that f = pos_part(f) + neg_part(f)."""
    return type(f)(np.where(f.coords < 0.0, f.coords, 0.0), f.space)


# -- membership and regions ----------------------------------------------------


def set_contains(set_: ConvexSet, x: PrimalPoint, tol: float = SET_MEMBERSHIP_TOL) -> bool:
    if isinstance(set_, Ball):
        return norm_primal(x) <= set_.r * (1.0 + tol)
    if isinstance(set_, Cylinder):
        return norm_primal(mask_restrict(x, set_.mask)) <= set_.r * (1.0 + tol)
    if isinstance(set_, CoordSubspace):
        comp = mask_complement(set_.mask, x.space.n)
        return norm_primal(mask_restrict(x, comp)) <= tol * max(1.0, norm_primal(x))
    if isinstance(set_, PositiveCone):
        return bool(np.all(x.coords >= -tol * max(1.0, norm_primal(x))))
    raise UnsupportedSetError(f"unknown set variant {set_!r}")


def classify_region(set_: ConvexSet, x: PrimalPoint, band: float | None = None) -> RegionTag:
    """Interior/Boundary/Exterior of a ball or cylinder, with a tolerance band.

    The positive cone and coordinate subspaces are rejected: their geometry is
    handled by dedicated logic rather than a radius comparison.
    """
    if not isinstance(set_, (Ball, Cylinder)):
        raise UnsupportedSetError("region classification needs a ball or cylinder")
    if band is None:
        band = DEFAULT_BAND_SCALE * set_.r
    nrm = norm_primal(_masked(set_, x))
    if abs(nrm - set_.r) <= band:
        kind = RegionKind.BOUNDARY
    elif nrm < set_.r - band:
        kind = RegionKind.INTERIOR
    else:
        kind = RegionKind.EXTERIOR
    return RegionTag(kind=kind, band=band)


# -- projections ---------------------------------------------------------------


def project(set_: ConvexSet, x: PrimalPoint) -> PrimalPoint:
    """Nearest point of the set in the weighted p-norm (closed form)."""
    sp = x.space
    if isinstance(set_, Ball):
        nrm = norm_primal(x)
        if nrm <= set_.r:
            return x
        return (set_.r / nrm) * x
    if isinstance(set_, Cylinder):
        xm = mask_restrict(x, set_.mask)
        nrm = norm_primal(xm)
        if nrm <= set_.r:
            return x
        xmbar = x - xm
        return (set_.r / nrm) * xm + xmbar
    if isinstance(set_, CoordSubspace):
        return mask_restrict(x, set_.mask)
    if isinstance(set_, PositiveCone):
        return pos_part(x)
    raise UnsupportedSetError(f"unknown set variant {set_!r}")


def variational_residual(
    set_: ConvexSet,
    x: PrimalPoint,
    u: PrimalPoint,
    z_samples: list[PrimalPoint],
) -> float:
    """min_z <J(x - u), u - z> over the given feasible competitors.

    A value >= -tol is consistent with u being the projection of x; a
    clearly negative value certifies that it is not. Every sample must lie
    in the set.
    """
    if not z_samples:
        raise PreconditionError("variational residual needs at least one competitor")
    for z in z_samples:
        if not set_contains(set_, z):
            raise PreconditionError("competitor sample lies outside the set")
    g = duality_map(x - u)
    if is_theta(g):
        return 0.0
    return min(pair(g, u - z) for z in z_samples)
