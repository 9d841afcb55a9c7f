"""Modulus-exponent parameter points, the piecewise sieve parameter
functions, subregion classification and Type-II range assembly."""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import Catalog, default_catalog
from .regions import NumericPiece, RegionError, contains, merge_intervals

__all__ = [
    "ThetaParams",
    "TypeIIRangeReport",
    "AmbiguityError",
    "kappa",
    "kappa_prime",
    "tau",
    "tau_prime",
    "nu",
    "nu_prime",
    "classify",
    "type_ii_range",
]


class AmbiguityError(RegionError):
    """Point sits on a subregion boundary; all matches are listed."""

    def __init__(self, matches):
        self.matches = list(matches)
        super().__init__("ambiguous classification: " + ", ".join(self.matches))


# ---------------------------------------------------------------------------
# Piecewise parameter functions (eps enters exactly as printed)
# ---------------------------------------------------------------------------


def kappa(theta: float, eps: float = 0.0) -> float:
    """Sieve starting point for a total modulus exponent theta."""
    if not 0.5 <= theta < 4 / 7:
        raise ValueError("kappa is defined for 1/2 <= theta < 4/7")
    if theta <= 17 / 32 - eps:
        return (5 - 8 * theta) / 6 - eps
    if theta <= 7 / 13 - eps:
        return (5 - 8 * theta) / 12 - 3 * eps
    return (3 - 5 * theta) / 7 - 2 * eps


def kappa_prime(theta: float, eps: float = 0.0) -> float:
    if not 0.5 <= theta < 4 / 7:
        raise ValueError("kappa_prime is defined for 1/2 <= theta < 4/7")
    if 7 / 13 - eps < theta <= 11 / 20 - eps:
        return (11 - 20 * theta) / 6 - 2 * eps
    return kappa(theta, eps)


def tau(theta: float, eps: float = 0.0) -> float:
    if not 0.5 <= theta < 4 / 7:
        raise ValueError("tau is defined for 1/2 <= theta < 4/7")
    if theta <= 11 / 21:
        return 3 * (1 - theta) / 5 - eps
    if theta <= 6 / 11 - eps:
        return 2 / 7 - eps
    return (5 - 6 * theta) / 7 - eps


def tau_prime(theta: float, eps: float = 0.0) -> float:
    if not 0.5 <= theta < 4 / 7:
        raise ValueError("tau_prime is defined for 1/2 <= theta < 4/7")
    if 7 / 13 - eps < theta <= 11 / 20 - eps:
        return (5 - 6 * theta) / 7
    return tau(theta, eps)


def nu(theta: float) -> float:
    """Smooth-modulus Type-II width parameter."""
    if not 0.5 < theta < 9 / 17:
        raise ValueError("nu is defined for 1/2 < theta < 9/17")
    return 1 - 2 * max(6 * theta - 11 / 4, 16 * theta - 8)


def nu_prime(theta: float) -> float:
    if not 0.5 < theta < 9 / 17:
        raise ValueError("nu_prime is defined for 1/2 < theta < 9/17")
    return 1 - 2 * max(120 / 17 * theta - 56 / 17, 16 * theta - 8)


# ---------------------------------------------------------------------------
# Parameter points
# ---------------------------------------------------------------------------

DELTA_DEFAULT = 1e-100


@dataclass(frozen=True)
class ThetaParams:
    """One, two or three modulus exponents plus the small constants.

    theta is always the total exponent.  In two-parameter mode theta1 >=
    theta2 is required (the standard normalisation); a three-parameter point
    carries theta3 as well and reduces to two parameters via theta2+theta3
    where needed.
    """

    theta1: float
    theta2: float | None = None
    theta3: float | None = None
    eps: float = 0.0
    delta: float = DELTA_DEFAULT
    overrides: tuple[tuple[str, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        parts = [self.theta1] + [t for t in (self.theta2, self.theta3) if t is not None]
        if self.theta3 is not None and self.theta2 is None:
            raise ValueError("theta3 requires theta2")
        for t in parts:
            if not 0 < t < 1:
                raise ValueError("each exponent must lie in (0, 1)")
        if not 0 < sum(parts) < 1:
            raise ValueError("total exponent must lie in (0, 1)")
        if self.theta2 is not None and self.theta3 is None and self.theta1 < self.theta2:
            raise ValueError("two-parameter mode requires theta1 >= theta2")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")

    @property
    def arity(self) -> int:
        return 1 + (self.theta2 is not None) + (self.theta3 is not None)

    @property
    def theta(self) -> float:
        return self.theta1 + (self.theta2 or 0.0) + (self.theta3 or 0.0)

    def reduce_to_two(self) -> "ThetaParams":
        """Three-parameter point folded to (theta1, theta2 + theta3)."""
        if self.theta3 is None:
            return self
        t1, t2 = self.theta1, self.theta2 + self.theta3
        if t1 < t2:
            t1, t2 = t2, t1
        return ThetaParams(t1, t2, eps=self.eps, delta=self.delta, overrides=self.overrides)

    def with_overrides(self, **kw: float) -> "ThetaParams":
        merged = dict(self.overrides)
        merged.update(kw)
        return ThetaParams(
            self.theta1, self.theta2, self.theta3, self.eps, self.delta,
            tuple(sorted(merged.items())),
        )

    def values(self) -> dict[str, float]:
        """Evaluation dictionary for affine forms (derived values included)."""
        th = self.theta
        out = {
            "theta": th,
            "theta1": self.theta1,
            "eps": self.eps,
            "eps2": self.eps * self.eps,
            # delta is an arbitrarily small positive constant; numerically 0.
            "delta": 0.0 if self.delta <= 1e-50 else self.delta,
        }
        if self.theta2 is not None:
            out["theta2"] = self.theta2
        if self.theta3 is not None:
            out["theta3"] = self.theta3
        if 0.5 <= th < 4 / 7:
            out["kappa"] = kappa(th, self.eps)
            out["kappap"] = kappa_prime(th, self.eps)
            out["tau"] = tau(th, self.eps)
            out["taup"] = tau_prime(th, self.eps)
        if 0.5 < th < 9 / 17:
            out["nu"] = nu(th)
            out["nup"] = nu_prime(th)
        out.update(dict(self.overrides))
        return out


def theta_only(theta: float, eps: float = 0.0) -> ThetaParams:
    return ThetaParams(theta, eps=eps)


# ---------------------------------------------------------------------------
# Classification and Type-II assembly
# ---------------------------------------------------------------------------

CATALOG_GROUPS = {"a_catalog": "a_catalog", "e_catalog": "e_catalog", "master": "master"}


def classify(params: ThetaParams, catalog_name: str, cat: Catalog | None = None) -> list[str]:
    """All regions of the named group containing (theta1, theta2)."""
    cat = cat or default_catalog()
    if catalog_name not in cat.groups:
        raise RegionError(f"unknown classification group {catalog_name!r}")
    p = params.reduce_to_two()
    if p.arity != 2:
        raise RegionError("classification needs a two-parameter point")
    point = [p.theta1, p.theta2]
    vals = p.values()
    out = []
    for name in cat.groups[catalog_name]:
        if contains(cat.region(name), point, vals, cat):
            out.append(name)
    return out


@dataclass
class RawRange:
    lo: float
    hi: float
    src: str


@dataclass
class TypeIIRangeReport:
    point: ThetaParams
    matched_region: str
    raw_ranges: list[RawRange]
    merged: list[NumericPiece]
    kappa_start: float | None
    note: str = ""


def _climb(start: float, merged: list[NumericPiece]) -> float:
    """Lift the starting point through every range piece that covers it."""
    k = start
    moved = True
    while moved:
        moved = False
        for p in merged:
            lo_ok = k > p.lo if p.lo_open else k >= p.lo
            if lo_ok and k < p.hi:
                k = p.hi
                moved = True
    return k


def type_ii_range(
    params: ThetaParams, cat: Catalog | None = None, family: str = "auto"
) -> TypeIIRangeReport:
    """Raw and merged Type-II ranges plus the lifted starting point.

    family selects the subregion family to search: 'a' (absolute-value
    factored moduli), 'e' (bilinear) or 'auto' (a first, then e).
    """
    cat = cat or default_catalog()
    p = params.reduce_to_two()
    vals = p.values()

    if p.arity == 1:
        th = p.theta1
        if th < 0.5:
            return TypeIIRangeReport(
                params, "bombieri_vinogradov", [], [], None,
                note="asymptotic (exponent of distribution) regime",
            )
        if th >= 4 / 7:
            raise RegionError("single-exponent mode covers theta < 4/7")
        union = cat.ranges["theta_mode"]
        raw = [RawRange(*pc.endpoints(vals), pc.src) for pc in union.pieces]
        merged = merge_intervals(union, vals)
        start = _climb(kappa(th, p.eps), merged)
        return TypeIIRangeReport(params, "theta_mode", raw, merged, start)

    point = [p.theta1, p.theta2]
    # The two leaf families model different modulus settings and may overlap
    # on the parameter plane; search them in order unless one is forced.
    if family == "a":
        search = ["a_leaves"]
    elif family == "e":
        search = ["e_leaves"]
    else:
        search = ["a_leaves", "e_leaves"]
    leaf = None
    for grp in search:
        leaves = [
            name for name in cat.groups[grp] if contains(cat.region(name), point, vals, cat)
        ]
        if len(leaves) > 1:
            raise AmbiguityError(leaves)
        if leaves:
            leaf = leaves[0]
            break
    if leaf is None:
        if contains(cat.region("Imaster"), point, vals, cat):
            return TypeIIRangeReport(
                params, "Imaster", [], [], None,
                note="asymptotic (exponent of distribution) regime",
            )
        if contains(cat.region("Jmaster"), point, vals, cat):
            return TypeIIRangeReport(
                params, "Jmaster", [], [], None,
                note="asymptotic (exponent of distribution) regime",
            )
        raise RegionError("no catalogued subregion contains the point")
    union = cat.ranges[leaf]
    raw = [RawRange(*pc.endpoints(vals), pc.src) for pc in union.pieces]
    merged = merge_intervals(union, vals)
    th = p.theta
    start = _climb(kappa(th, p.eps), merged) if 0.5 <= th < 4 / 7 else None
    return TypeIIRangeReport(params, leaf, raw, merged, start)
