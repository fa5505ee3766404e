"""Fréchet coderivative fibers of the projection operators, in closed form.

For a query dual vector y*, the coderivative of the projection P at xbar is
the set of x* whose graph-quotient limsup is nonpositive (see ``oracle`` for
the sampled version of that definition). Wherever P has a Fréchet
derivative, the fiber is the singleton {(grad P(xbar))^T y*}:

* interior points:  {y*}
* exterior ball:    {(r/||xb||) (y* - <y*, xb>/||xb||^2 J(xb))}
* exterior cylinder: the same formula through the masked part, plus the
  untouched unmasked part of y*.

On the boundary the fiber degenerates: the query theta* yields {theta*},
the query J(xb) yields the empty set, and for any other query the closed
forms characterize membership of theta* only. For the positive cone the
theta*-membership test is a componentwise sign condition; at the origin the
fiber of a nonnegative query psi is the componentwise order interval
[theta*, psi].

Every verdict carries named condition evaluations with numeric slacks so a
failed case can be reproduced from its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .decomposition import Anchor, o_star
from .derivatives import DirectionKind, classify_direction
from .errors import NotOnBoundaryError, PreconditionError
from .projections import Ball, Cylinder, RegionKind, classify_region, mask_restrict
from .space import (
    DualPoint,
    PrimalPoint,
    duality_map,
    duality_map_inv,
    norm_dual,
    norm_primal,
    pair,
)

# Relative tolerance on the alignment equality <y*_M, xb_M> = -r ||y*_M||_q;
# both sides scale like r * ||y*||.
ALIGNMENT_TOL = 1e-9

# Relative tolerance for recognizing the special queries theta* and J(xb).
QUERY_MATCH_TOL = 1e-9

# Componentwise zero test for cone sign conditions.
COORD_ZERO_TOL = 1e-12


class Verdict(Enum):
    MEMBER = "member"
    NOT_MEMBER = "not_member"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ConditionReport:
    name: str
    holds: bool
    slack: float


@dataclass(frozen=True)
class Singleton:
    value: DualPoint


@dataclass(frozen=True)
class EmptyFiber:
    pass


@dataclass(frozen=True)
class ThetaMembership:
    verdict: Verdict
    certificates: tuple[ConditionReport, ...]


@dataclass(frozen=True)
class OrderInterval:
    lo: DualPoint
    hi: DualPoint


CoderivResult = Singleton | EmptyFiber | ThetaMembership | OrderInterval


def _exterior_singleton(r: float, xm: PrimalPoint, ym: DualPoint, rest: DualPoint) -> DualPoint:
    nrm = norm_primal(xm)
    a = pair(ym, xm) / nrm**2
    return (r / nrm) * (ym - a * duality_map(xm)) + rest


def coderiv_ball(r: float, xbar: PrimalPoint, ystar: DualPoint, band: float | None = None) -> CoderivResult:
    """Coderivative fiber of the ball projection at xbar for the query y*."""
    tag = classify_region(Ball(r), xbar, band)
    if tag.kind is RegionKind.INTERIOR:
        return Singleton(value=ystar)
    if tag.kind is RegionKind.EXTERIOR:
        return Singleton(value=_exterior_singleton(r, xbar, ystar, xbar.space.zero_dual()))
    ny = norm_dual(ystar)
    if ny <= xbar.space.theta_tol:
        return Singleton(value=xbar.space.zero_dual())
    jx = duality_map(xbar)
    if norm_dual(ystar - jx) <= QUERY_MATCH_TOL * max(1.0, norm_dual(jx)):
        return EmptyFiber()
    return sphere_theta_member(r, xbar, ystar, band)


def sphere_theta_member(
    r: float, xbar: PrimalPoint, ystar: DualPoint, band: float | None = None
) -> ThetaMembership:
    """Decide whether theta* belongs to the sphere-point fiber of y*.

    Membership holds exactly when the reflected candidate -J*(y*) points out
    of the ball and <y*, xbar> = -r ||y*||_q. In a p-norm space the equality
    forces y* to be a negative multiple of J(xbar), which the certificate
    list records, together with the weaker necessary conditions that hold in
    any uniformly convex and uniformly smooth norm and the p = 2 parallel
    test.
    """
    if band is None:
        band = 1e-9 * r
    nx = norm_primal(xbar)
    if abs(nx - r) > band:
        raise NotOnBoundaryError("theta*-membership is a sphere-point question")
    ny = norm_dual(ystar)
    if ny <= xbar.space.theta_tol:
        raise PreconditionError("the zero query is handled by the fiber dispatch")

    certs: list[ConditionReport] = []
    anchor = Anchor.at(xbar)
    pairing = pair(ystar, xbar)

    eq_slack = pairing + r * ny
    eq_holds = abs(eq_slack) <= ALIGNMENT_TOL * r * ny
    certs.append(
        ConditionReport(
            name="pairing with base point equals -r times dual norm",
            holds=eq_holds,
            slack=eq_slack,
        )
    )

    v = -duality_map_inv(ystar)
    cls = classify_direction(Ball(r), xbar, v, band)
    certs.append(
        ConditionReport(
            name="reflected candidate -J*(y*) leaves the ball",
            holds=cls.kind is DirectionKind.UP,
            slack=cls.slope,
        )
    )

    # Necessary conditions valid beyond p-norm spaces, reported as evidence.
    certs.append(
        ConditionReport(
            name="pairing with base point is nonpositive",
            holds=pairing <= ALIGNMENT_TOL * r * ny,
            slack=pairing,
        )
    )
    osy = o_star(anchor, ystar)
    josy = duality_map_inv(osy)
    njosy = norm_primal(josy)
    if njosy <= xbar.space.theta_tol:
        certs.append(
            ConditionReport(
                name="reflected tangential component -J*(o*(y*)) stays in the ball",
                holds=True,
                slack=0.0,
            )
        )
        balance = 0.0
    else:
        tcls = classify_direction(Ball(r), xbar, -josy, band)
        certs.append(
            ConditionReport(
                name="reflected tangential component -J*(o*(y*)) stays in the ball",
                holds=tcls.kind is DirectionKind.DOWN,
                slack=tcls.slope,
            )
        )
        balance = (pairing / r**2) * pair(anchor.xbar_star, josy) + njosy**2
    certs.append(
        ConditionReport(
            name="tangential balance term is nonpositive",
            holds=balance <= ALIGNMENT_TOL * max(1.0, ny**2),
            slack=balance,
        )
    )

    if xbar.space.p == 2.0:
        par_slack = norm_dual(osy)
        certs.append(
            ConditionReport(
                name="hilbert test: y* parallel to base point with negative pairing",
                holds=par_slack <= 1e-8 * ny and pairing < 0.0,
                slack=par_slack,
            )
        )

    if eq_holds:
        c = ny / r
        align = norm_dual(ystar + c * duality_map(xbar))
        certs.append(
            ConditionReport(
                name="y* is a negative multiple of J(xbar)",
                holds=align <= 1e-8 * ny,
                slack=align,
            )
        )

    slope_band = 1e-12 * max(1.0, ny)
    if eq_holds and cls.kind is DirectionKind.UP and cls.slope > slope_band:
        verdict = Verdict.MEMBER
    elif eq_holds:
        # Equality within tolerance but a degenerate (parallel) direction
        # classification: numerically undecidable.
        verdict = Verdict.UNDETERMINED
    else:
        verdict = Verdict.NOT_MEMBER
    return ThetaMembership(verdict=verdict, certificates=tuple(certs))


def coderiv_cylinder(
    r: float,
    mask: frozenset[int],
    xbar: PrimalPoint,
    ystar: DualPoint,
    band: float | None = None,
) -> CoderivResult:
    """Coderivative fiber of the cylinder projection at xbar for the query y*."""
    cyl = Cylinder(r=r, mask=frozenset(mask))
    tag = classify_region(cyl, xbar, band)
    if tag.kind is RegionKind.INTERIOR:
        return Singleton(value=ystar)
    if tag.kind is RegionKind.EXTERIOR:
        xm = mask_restrict(xbar, cyl.mask)
        ym = mask_restrict(ystar, cyl.mask)
        return Singleton(value=_exterior_singleton(r, xm, ym, ystar - ym))
    ny = norm_dual(ystar)
    if ny <= xbar.space.theta_tol:
        return Singleton(value=xbar.space.zero_dual())
    jx = duality_map(xbar)
    if norm_dual(ystar - jx) <= QUERY_MATCH_TOL * max(1.0, norm_dual(jx)):
        return EmptyFiber()
    return cylinder_theta_member(r, cyl.mask, xbar, ystar, band)


def cylinder_theta_member(
    r: float,
    mask: frozenset[int],
    xbar: PrimalPoint,
    ystar: DualPoint,
    band: float | None = None,
) -> ThetaMembership:
    """Decide whether theta* belongs to the cylinder boundary fiber of y*.

    The three conditions are jointly equivalent to membership: the unmasked
    part of y* vanishes, the masked reflected candidate points out of the
    masked ball, and <y*_M, xbar_M> = -r ||y*_M||_q.
    """
    cyl = Cylinder(r=r, mask=frozenset(mask))
    if band is None:
        band = 1e-9 * r
    xm = mask_restrict(xbar, cyl.mask)
    if abs(norm_primal(xm) - r) > band:
        raise NotOnBoundaryError("theta*-membership needs a boundary point")
    ny = norm_dual(ystar)
    if ny <= xbar.space.theta_tol:
        raise PreconditionError("the zero query is handled by the fiber dispatch")

    certs: list[ConditionReport] = []
    ym = mask_restrict(ystar, cyl.mask)
    ymbar = ystar - ym
    tail = norm_dual(ymbar)
    tail_zero = tail <= QUERY_MATCH_TOL * ny
    certs.append(
        ConditionReport(
            name="unmasked part of y* vanishes",
            holds=tail_zero,
            slack=tail,
        )
    )

    nym = norm_dual(ym)
    pairing = pair(ym, xm)
    eq_slack = pairing + r * nym
    eq_holds = nym > xbar.space.theta_tol and abs(eq_slack) <= ALIGNMENT_TOL * r * nym
    certs.append(
        ConditionReport(
            name="masked pairing equals -r times masked dual norm",
            holds=eq_holds,
            slack=eq_slack,
        )
    )

    w = -mask_restrict(duality_map_inv(ystar), cyl.mask)
    cls = classify_direction(cyl, xbar, w, band)
    dir_up = cls.kind is DirectionKind.UP
    certs.append(
        ConditionReport(
            name="masked reflected candidate -(J*(y*))_M leaves the cylinder",
            holds=dir_up,
            slack=cls.slope,
        )
    )

    if eq_holds and tail_zero:
        c = nym / r
        align = norm_dual(ym + c * duality_map(xm))
        certs.append(
            ConditionReport(
                name="y*_M is a negative multiple of J(xbar_M)",
                holds=align <= 1e-8 * nym,
                slack=align,
            )
        )

    slope_band = 1e-12 * max(1.0, ny)
    if tail_zero and eq_holds and dir_up and cls.slope > slope_band:
        verdict = Verdict.MEMBER
    elif tail_zero and eq_holds:
        verdict = Verdict.UNDETERMINED
    else:
        verdict = Verdict.NOT_MEMBER
    return ThetaMembership(verdict=verdict, certificates=tuple(certs))


def cone_theta_member(f: PrimalPoint, phi: DualPoint) -> ThetaMembership:
    """Componentwise sign test for theta* membership in the cone fiber of phi.

    With strictly positive weights a null set is empty, so membership holds
    exactly when no coordinate has (phi != 0 and f > 0) and none has
    (phi < 0 and f <= 0). Violating coordinates are listed as certificates;
    a violation at a strictly negative coordinate of f is additionally
    flagged, because no vanishing perturbation of f can expose it to the
    projection there.
    """
    certs: list[ConditionReport] = []
    tol = COORD_ZERO_TOL
    fc = f.coords
    pc = phi.coords
    ok = True
    for i in range(f.space.n):
        if abs(pc[i]) > tol and fc[i] > tol:
            ok = False
            certs.append(
                ConditionReport(
                    name=f"coordinate {i}: dual is nonzero where the point is positive",
                    holds=False,
                    slack=float(min(abs(pc[i]), fc[i])),
                )
            )
        if pc[i] < -tol and fc[i] <= tol:
            ok = False
            suffix = ""
            if fc[i] < -tol:
                suffix = " (strictly negative coordinate: invisible to vanishing perturbations)"
            certs.append(
                ConditionReport(
                    name=f"coordinate {i}: dual is negative where the point is nonpositive" + suffix,
                    holds=False,
                    slack=float(-pc[i]),
                )
            )
    if ok:
        certs.append(
            ConditionReport(name="no sign conflicts on any coordinate", holds=True, slack=0.0)
        )
    verdict = Verdict.MEMBER if ok else Verdict.NOT_MEMBER
    return ThetaMembership(verdict=verdict, certificates=tuple(certs))


def cone_jf_member(f: PrimalPoint) -> ThetaMembership:
    """For nonnegative f, J(f) always belongs to its own fiber."""
    min_coord = float(np.min(f.coords))
    if min_coord < -COORD_ZERO_TOL:
        raise PreconditionError("the point must lie in the positive cone")
    cert = ConditionReport(name="point lies in the positive cone", holds=True, slack=min_coord)
    return ThetaMembership(verdict=Verdict.MEMBER, certificates=(cert,))


def cone_interval_at_origin(psi: DualPoint) -> OrderInterval:
    """Fiber of a nonnegative query at the origin: the order interval [theta*, psi]."""
    if float(np.min(psi.coords)) < -COORD_ZERO_TOL:
        raise PreconditionError("the query must lie in the nonnegative dual cone")
    return OrderInterval(lo=psi.space.zero_dual(), hi=psi)


def interval_contains(interval: OrderInterval, phi: DualPoint, tol: float = COORD_ZERO_TOL) -> bool:
    """Componentwise lo <= phi <= hi, with a zero-threshold band."""
    lo = interval.lo.coords
    hi = interval.hi.coords
    return bool(np.all(phi.coords >= lo - tol) and np.all(phi.coords <= hi + tol))
