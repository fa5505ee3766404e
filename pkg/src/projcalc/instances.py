"""Deterministic test-instance generation.

Every instance is a (space, set, point) triple reproducible from a seed.
Boundary points are constructed exactly: the raw draw is rescaled so the
relevant (masked) norm equals the radius to machine precision.
"""

from __future__ import annotations

import numpy as np

from .projections import Ball, ConvexSet, CoordSubspace, Cylinder, PositiveCone, mask_restrict
from .space import PrimalPoint, SpaceConfig, norm_primal

_KIND_CODES = {"ball": 1, "cylinder": 2, "cone": 3, "subspace": 4}
_REGIME_CODES = {"interior": 1, "boundary": 2, "exterior": 3}


def _rng(seed: int, kind: str, regime: str) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([seed, _KIND_CODES[kind], _REGIME_CODES[regime]])
    )


def make_weights(n: int, mode: str, rng: np.random.Generator) -> np.ndarray:
    if mode == "ones":
        return np.ones(n)
    if mode == "random":
        return rng.uniform(0.5, 2.0, size=n)
    raise ValueError(f"unknown weights mode {mode!r}")


def pick_mask(n: int, density: float, rng: np.random.Generator) -> frozenset[int]:
    k = max(1, int(round(density * n)))
    k = min(k, n)
    return frozenset(rng.choice(n, size=k, replace=False).tolist())


def _nonzero_draw(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    while not np.any(v):
        v = rng.standard_normal(n)
    return v


def gen_instance(
    kind: str,
    regime: str,
    seed: int,
    n: int = 8,
    p: float = 2.0,
    r: float = 1.0,
    mask_density: float = 0.5,
    weights_mode: str = "ones",
) -> tuple[SpaceConfig, ConvexSet, PrimalPoint]:
    """Build a reproducible instance of the given kind and regime.

    Regimes: interior / boundary / exterior. For the cone, "boundary" means
    at least one zero and one positive coordinate, "exterior" at least one
    strictly negative coordinate, "interior" all strictly positive. For a
    subspace, "interior" is a point of the subspace and "exterior" one with
    a nonzero complement part.
    """
    rng = _rng(seed, kind, regime)
    space = SpaceConfig(n=n, p=p, weights=make_weights(n, weights_mode, rng))

    if kind == "ball":
        set_: ConvexSet = Ball(r=r)
        x = space.primal(_nonzero_draw(rng, n))
        target = _target_norm(regime, r, rng)
        x = (target / norm_primal(x)) * x
        return space, set_, x

    if kind == "cylinder":
        mask = pick_mask(n, mask_density, rng)
        set_ = Cylinder(r=r, mask=mask)
        raw = _nonzero_draw(rng, n)
        x = space.primal(raw)
        xm = mask_restrict(x, mask)
        while norm_primal(xm) <= space.theta_tol:
            x = space.primal(_nonzero_draw(rng, n))
            xm = mask_restrict(x, mask)
        target = _target_norm(regime, r, rng)
        x = (target / norm_primal(xm)) * xm + (x - xm)
        return space, set_, x

    if kind == "cone":
        set_ = PositiveCone()
        mags = np.abs(_nonzero_draw(rng, n)) + 0.1
        if regime == "interior":
            coords = mags
        elif regime == "exterior":
            coords = mags.copy()
            neg = rng.choice(n, size=max(1, n // 3), replace=False)
            coords[neg] *= -1.0
        elif regime == "boundary":
            coords = mags.copy()
            idx = rng.permutation(n)
            zeros = idx[: max(1, n // 3)]
            coords[zeros] = 0.0
            if n >= 3:
                negs = idx[max(1, n // 3) : max(1, n // 3) + max(1, n // 4)]
                coords[negs] *= -1.0
        else:
            raise ValueError(f"unknown regime {regime!r}")
        return space, set_, space.primal(coords)

    if kind == "subspace":
        mask = pick_mask(n, mask_density, rng)
        set_ = CoordSubspace(mask=mask)
        x = space.primal(_nonzero_draw(rng, n))
        if regime in ("interior", "boundary"):
            x = mask_restrict(x, mask)
        return space, set_, x

    raise ValueError(f"unknown instance kind {kind!r}")


def _target_norm(regime: str, r: float, rng: np.random.Generator) -> float:
    if regime == "interior":
        return r * rng.uniform(0.2, 0.8)
    if regime == "boundary":
        return r
    if regime == "exterior":
        return r * (1.1 + rng.uniform(0.0, 1.0))
    raise ValueError(f"unknown regime {regime!r}")


def sample_in_set(
    set_: ConvexSet, space: SpaceConfig, rng: np.random.Generator, count: int
) -> list[PrimalPoint]:
    """Feasible competitor samples, one generator per set variant."""
    out = []
    for _ in range(count):
        v = rng.standard_normal(space.n)
        if isinstance(set_, Ball):
            x = space.primal(v)
            nrm = norm_primal(x)
            scale = set_.r * rng.uniform(0.0, 1.0) / max(nrm, space.theta_tol)
            out.append(scale * x)
        elif isinstance(set_, Cylinder):
            x = space.primal(v)
            xm = mask_restrict(x, set_.mask)
            nrm = norm_primal(xm)
            if nrm <= space.theta_tol:
                out.append(x - xm)
                continue
            scale = set_.r * rng.uniform(0.0, 1.0) / nrm
            out.append(scale * xm + (x - xm))
        elif isinstance(set_, PositiveCone):
            out.append(space.primal(np.abs(v)))
        elif isinstance(set_, CoordSubspace):
            out.append(mask_restrict(space.primal(v), set_.mask))
        else:
            raise ValueError(f"unknown set variant {set_!r}")
    return out
