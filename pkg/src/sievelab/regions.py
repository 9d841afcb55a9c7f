"""Parametric affine regions, partition predicates and interval unions.

Everything here evaluates over exponent vectors (alpha vectors): points whose
coordinates t1..tk live on the log-x scale.  Region predicates are boolean
trees of affine comparisons plus two non-local atom kinds, membership of a
grouped point in another region and exists-bipartition ("splits") into a
two-dimensional region.  All evaluation is vectorised over (N, k) arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "AffineForm",
    "Atom",
    "Comparison",
    "Membership",
    "Splits",
    "Descending",
    "BoolNode",
    "RegionSpec",
    "IntervalPiece",
    "IntervalUnion",
    "AlphaVector",
    "RegionError",
    "contains",
    "contains_many",
    "partitions_into",
    "merge_intervals",
    "interval_contains",
]

# Parameter names an affine form may reference.  theta/theta1..3, eps, delta
# come straight from the parameter point; the rest are the derived piecewise
# sieve parameters evaluated at that point.
PARAM_NAMES = (
    "theta",
    "theta1",
    "theta2",
    "theta3",
    "eps",
    "eps2",
    "delta",
    "kappa",
    "kappap",
    "tau",
    "taup",
    "nu",
    "nup",
)

# Pseudo-variables usable in dimension-generic regions.
SPECIALS = ("tsum", "tmin", "tmax")


class RegionError(ValueError):
    """Domain/configuration error raised by region evaluation."""


@dataclass(frozen=True)
class AffineForm:
    """constant + sum(param coefficients) + sum(variable coefficients).

    Variable indices are 1-based (t1, t2, ...).  The tsum/tmin/tmax pseudo
    variables let dimension-generic families constrain the sum, minimum or
    maximum coordinate; tmin/tmax are only piecewise-linear and are rejected
    as interval endpoints.
    """

    const: Fraction = Fraction(0)
    params: tuple[tuple[str, Fraction], ...] = ()
    vars: tuple[tuple[int, Fraction], ...] = ()
    specials: tuple[tuple[str, Fraction], ...] = ()

    @staticmethod
    def make(const=0, params=None, vars=None, specials=None) -> "AffineForm":
        def norm(d):
            if not d:
                return ()
            items = [(k, Fraction(v)) for k, v in sorted(dict(d).items()) if Fraction(v) != 0]
            return tuple(items)

        return AffineForm(Fraction(const), norm(params), norm(vars), norm(specials))

    def __add__(self, other: "AffineForm") -> "AffineForm":
        p = dict(self.params)
        for k, v in other.params:
            p[k] = p.get(k, Fraction(0)) + v
        w = dict(self.vars)
        for k, v in other.vars:
            w[k] = w.get(k, Fraction(0)) + v
        s = dict(self.specials)
        for k, v in other.specials:
            s[k] = s.get(k, Fraction(0)) + v
        return AffineForm.make(self.const + other.const, p, w, s)

    def __neg__(self) -> "AffineForm":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + (-other)

    def scale(self, c) -> "AffineForm":
        c = Fraction(c)
        return AffineForm.make(
            self.const * c,
            {k: v * c for k, v in self.params},
            {k: v * c for k, v in self.vars},
            {k: v * c for k, v in self.specials},
        )

    @property
    def max_var(self) -> int:
        return max((i for i, _ in self.vars), default=0)

    def param_part(self, params: dict[str, float]) -> float:
        """Evaluate the point-independent part (constant + parameters)."""
        acc = float(self.const)
        for name, coef in self.params:
            if name not in params:
                raise RegionError(f"missing parameter {name!r}")
            acc += float(coef) * params[name]
        return acc

    def interval(self, lo: np.ndarray, hi: np.ndarray, params: dict[str, float]):
        """Range of the form over an axis-aligned box (interval arithmetic)."""
        base = self.param_part(params)
        a, b = base, base
        for i, coef in self.vars:
            c = float(coef)
            if c >= 0:
                a += c * lo[i - 1]
                b += c * hi[i - 1]
            else:
                a += c * hi[i - 1]
                b += c * lo[i - 1]
        for name, coef in self.specials:
            c = float(coef)
            if name == "tsum":
                v0, v1 = lo.sum(), hi.sum()
            elif name == "tmin":
                v0, v1 = lo.min(), hi.min()
            else:
                v0, v1 = lo.max(), hi.max()
            if c >= 0:
                a += c * v0
                b += c * v1
            else:
                a += c * v1
                b += c * v0
        return a, b

    def eval_points(self, x: np.ndarray, params: dict[str, float]) -> np.ndarray:
        """Evaluate on an (N, k) array of points; returns shape (N,)."""
        n, k = x.shape
        acc = np.full(n, self.param_part(params))
        for i, coef in self.vars:
            if i > k:
                raise RegionError(f"variable t{i} out of range for dimension {k}")
            acc += float(coef) * x[:, i - 1]
        for name, coef in self.specials:
            if name == "tsum":
                acc += float(coef) * x.sum(axis=1)
            elif name == "tmin":
                acc += float(coef) * x.min(axis=1)
            elif name == "tmax":
                acc += float(coef) * x.max(axis=1)
        return acc

    def eval_scalar(self, params: dict[str, float]) -> float:
        """Evaluate a point-free form (interval endpoints)."""
        if self.vars or self.specials:
            raise RegionError("form references point variables; scalar context")
        return self.param_part(params)


# ---------------------------------------------------------------------------
# Region atoms and boolean tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    lhs: AffineForm
    rel: str  # one of '<', '<=', '>', '>='
    rhs: AffineForm

    def eval(self, x, params, catalog):
        a = self.lhs.eval_points(x, params)
        b = self.rhs.eval_points(x, params)
        if self.rel == "<":
            return a < b
        if self.rel == "<=":
            return a <= b
        if self.rel == ">":
            return a > b
        if self.rel == ">=":
            return a >= b
        raise RegionError(f"bad relation {self.rel!r}")


@dataclass(frozen=True)
class Membership:
    """Grouped-point membership in a named region.

    groups is a tuple of index tuples; the tested point is the vector of the
    group sums.  An empty groups tuple means the full point is passed through.
    """

    region: str
    groups: tuple[tuple[int, ...], ...] = ()

    def eval(self, x, params, catalog):
        target = catalog.region(self.region)
        if self.groups:
            cols = []
            for grp in self.groups:
                col = np.zeros(x.shape[0])
                for i in grp:
                    if i > x.shape[1]:
                        raise RegionError(f"group index t{i} out of range")
                    col += x[:, i - 1]
                cols.append(col)
            pts = np.stack(cols, axis=1)
        else:
            pts = x
        return target.eval(pts, params, catalog)


@dataclass(frozen=True)
class Splits:
    """Exists-bipartition of the coordinates into a 2-dimensional region.

    True iff some subset I of the indices (taken with its complement J, either
    of which may be empty) satisfies (sum_I, sum_J) in region.  An optional
    appended coordinate (an affine scalar in the parameters) joins the
    multiset before bipartitioning.
    """

    region: str
    append: AffineForm | None = None

    def eval(self, x, params, catalog):
        target = catalog.region(self.region)
        n, k = x.shape
        if self.append is not None:
            extra = np.full(n, self.append.eval_scalar(params))
            x = np.concatenate([x, extra[:, None]], axis=1)
            k += 1
        if k > 24:
            raise RegionError("bipartition enumeration capped at 24 coordinates")
        total = x.sum(axis=1)
        ok = np.zeros(n, dtype=bool)
        for mask in range(1 << k):
            sel = [i for i in range(k) if mask >> i & 1]
            s = x[:, sel].sum(axis=1) if sel else np.zeros(n)
            t = total - s
            pts = np.stack([s, t], axis=1)
            ok |= target.eval(pts, params, catalog)
            if ok.all():
                break
        return ok


@dataclass(frozen=True)
class Descending:
    """Strictly decreasing coordinates (dimension-generic ordering atom)."""

    def eval(self, x, params, catalog):
        if x.shape[1] < 2:
            return np.ones(x.shape[0], dtype=bool)
        return (x[:, :-1] > x[:, 1:]).all(axis=1)


@dataclass(frozen=True)
class BoolNode:
    op: str  # 'and' | 'or' | 'not' | 'atom' | 'const'
    children: tuple = ()
    atom: object = None
    value: bool = True

    def eval(self, x, params, catalog):
        if self.op == "atom":
            return self.atom.eval(x, params, catalog)
        if self.op == "const":
            return np.full(x.shape[0], self.value, dtype=bool)
        if self.op == "not":
            return ~self.children[0].eval(x, params, catalog)
        if self.op == "and":
            out = np.ones(x.shape[0], dtype=bool)
            for c in self.children:
                if not out.any():
                    break
                out &= c.eval(x, params, catalog)
            return out
        if self.op == "or":
            out = np.zeros(x.shape[0], dtype=bool)
            for c in self.children:
                if out.all():
                    break
                out |= c.eval(x, params, catalog)
            return out
        raise RegionError(f"bad node op {self.op!r}")


Atom = (Comparison, Membership, Splits, Descending)


@dataclass
class RegionSpec:
    """A named region: boolean tree over atoms, with optional per-variable
    bounding intervals used as the sampling box by the quadrature engine."""

    name: str
    dimension: int | None  # None means any dimension
    tree: BoolNode
    bounds: dict[int, tuple[AffineForm, AffineForm]] = field(default_factory=dict)

    def eval(self, x: np.ndarray, params: dict[str, float], catalog) -> np.ndarray:
        if self.dimension is not None and x.shape[1] > self.dimension:
            raise RegionError(
                f"region {self.name} has dimension {self.dimension}, got {x.shape[1]}"
            )
        return self.tree.eval(x, params, catalog)

    def referenced_regions(self) -> set[str]:
        out: set[str] = set()

        def walk(node: BoolNode):
            if node.op == "atom":
                if isinstance(node.atom, (Membership, Splits)):
                    out.add(node.atom.region)
            for c in node.children:
                walk(c)

        walk(self.tree)
        return out

    def box(self, params: dict[str, float], dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Evaluated bounding box (lo, hi) arrays for the given dimension."""
        lo = np.empty(dim)
        hi = np.empty(dim)
        for i in range(1, dim + 1):
            if i not in self.bounds:
                raise RegionError(f"region {self.name} has no bound for t{i}")
            blo, bhi = self.bounds[i]
            lo[i - 1] = blo.eval_scalar(params)
            hi[i - 1] = bhi.eval_scalar(params)
        return lo, hi


def definitely(region: RegionSpec, lo: np.ndarray, hi: np.ndarray, params, catalog):
    """Tri-state box test: True/False when the region verdict is constant
    over the whole box [lo, hi], None when undecided.  Used to prune
    provably dead sampling cells without bias."""
    return _definite_node(region.tree, lo, hi, params, catalog)


def _definite_node(node: BoolNode, lo, hi, params, catalog):
    if node.op == "const":
        return node.value
    if node.op == "not":
        sub = _definite_node(node.children[0], lo, hi, params, catalog)
        return None if sub is None else not sub
    if node.op in ("and", "or"):
        want_all = node.op == "and"
        results = [_definite_node(c, lo, hi, params, catalog) for c in node.children]
        if want_all:
            if any(r is False for r in results):
                return False
            return True if all(r is True for r in results) else None
        if any(r is True for r in results):
            return True
        return False if all(r is False for r in results) else None
    atom = node.atom
    if isinstance(atom, Comparison):
        la, lb = atom.lhs.interval(lo, hi, params)
        ra, rb = atom.rhs.interval(lo, hi, params)
        if atom.rel == "<":
            return True if lb < ra else (False if la >= rb else None)
        if atom.rel == "<=":
            return True if lb <= ra else (False if la > rb else None)
        if atom.rel == ">":
            return True if la > rb else (False if lb <= ra else None)
        if atom.rel == ">=":
            return True if la >= rb else (False if lb < ra else None)
    if isinstance(atom, Membership):
        target = catalog.region(atom.region)
        if atom.groups:
            glo = np.array([sum(lo[i - 1] for i in grp) for grp in atom.groups])
            ghi = np.array([sum(hi[i - 1] for i in grp) for grp in atom.groups])
        else:
            glo, ghi = lo, hi
        return _definite_node(target.tree, glo, ghi, params, catalog)
    if isinstance(atom, Splits):
        target = catalog.region(atom.region)
        k = len(lo)
        if atom.append is not None:
            extra = atom.append.eval_scalar(params)
            lo = np.append(lo, extra)
            hi = np.append(hi, extra)
            k += 1
        total_lo, total_hi = lo.sum(), hi.sum()
        any_maybe = False
        for mask in range(1 << k):
            sel = [i for i in range(k) if mask >> i & 1]
            s_lo = sum(lo[i] for i in sel)
            s_hi = sum(hi[i] for i in sel)
            pair_lo = np.array([s_lo, total_lo - s_hi])
            pair_hi = np.array([s_hi, total_hi - s_lo])
            sub = _definite_node(target.tree, pair_lo, pair_hi, params, catalog)
            if sub is True:
                return True
            if sub is None:
                any_maybe = True
        return None if any_maybe else False
    return None


# ---------------------------------------------------------------------------
# Interval unions with affine endpoints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalPiece:
    lo: AffineForm
    hi: AffineForm
    lo_open: bool = True
    hi_open: bool = True
    src: str = ""

    def endpoints(self, params: dict[str, float]) -> tuple[float, float]:
        return self.lo.eval_scalar(params), self.hi.eval_scalar(params)


@dataclass(frozen=True)
class NumericPiece:
    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = True


@dataclass
class IntervalUnion:
    pieces: list[IntervalPiece]

    def evaluated(self, params: dict[str, float]) -> list[NumericPiece]:
        out = []
        for p in self.pieces:
            lo, hi = p.endpoints(params)
            out.append(NumericPiece(lo, hi, p.lo_open, p.hi_open))
        return out


def merge_numeric(pieces: list[NumericPiece]) -> list[NumericPiece]:
    """Canonical sorted disjoint union.

    Empty pieces (hi <= lo, up to equality with both ends closed) are
    dropped; two pieces merge iff they overlap or touch with at least one
    closed endpoint at the junction.
    """
    live = []
    for p in pieces:
        if p.hi < p.lo:
            continue
        if p.hi == p.lo and (p.lo_open or p.hi_open):
            continue
        live.append(p)
    live.sort(key=lambda p: (p.lo, p.lo_open))
    out: list[NumericPiece] = []
    for p in live:
        if out:
            q = out[-1]
            joins = p.lo < q.hi or (p.lo == q.hi and not (p.lo_open and q.hi_open))
            if joins:
                if (p.hi, not p.hi_open) > (q.hi, not q.hi_open):
                    out[-1] = NumericPiece(q.lo, p.hi, q.lo_open, p.hi_open)
                continue
        out.append(p)
    return out


def merge_intervals(u: IntervalUnion, params: dict[str, float]) -> list[NumericPiece]:
    """Merged numeric pieces of the union at the given parameter point."""
    return merge_numeric(u.evaluated(params))


def interval_contains(pieces, x: float, params: dict[str, float] | None = None) -> bool:
    """Membership in a union, respecting open/closed endpoints.

    Accepts either an IntervalUnion (params required) or a list of numeric
    pieces.
    """
    if isinstance(pieces, IntervalUnion):
        pieces = pieces.evaluated(params or {})
    for p in pieces:
        lo_ok = x > p.lo if p.lo_open else x >= p.lo
        hi_ok = x < p.hi if p.hi_open else x <= p.hi
        if lo_ok and hi_ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Alpha vectors
# ---------------------------------------------------------------------------

SUM_SLACK = 1e-12


@dataclass(frozen=True)
class AlphaVector:
    """Sorted-descending vector of positive exponents with sum <= 1."""

    alphas: tuple[float, ...]

    def __init__(self, alphas):
        entries = tuple(float(a) for a in alphas)
        if not entries:
            raise ValueError("alpha vector must be nonempty")
        if any(a <= 0 or a >= 1 for a in entries):
            raise ValueError("alpha entries must lie in (0, 1)")
        if any(entries[i] < entries[i + 1] for i in range(len(entries) - 1)):
            entries = tuple(sorted(entries, reverse=True))
        if sum(entries) > 1 + SUM_SLACK:
            raise ValueError("alpha entries must sum to at most 1")
        object.__setattr__(self, "alphas", entries)

    def __len__(self) -> int:
        return len(self.alphas)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.alphas, dtype=float)


# ---------------------------------------------------------------------------
# Top-level operations (catalog passed explicitly)
# ---------------------------------------------------------------------------


def _as_points(point) -> np.ndarray:
    if isinstance(point, AlphaVector):
        arr = point.as_array()[None, :]
    else:
        arr = np.atleast_2d(np.asarray(point, dtype=float))
    return arr


def contains(region: RegionSpec, point, params: dict[str, float], catalog) -> bool:
    """True iff the point satisfies the region's boolean tree as written."""
    return bool(region.eval(_as_points(point), params, catalog)[0])


def contains_many(region: RegionSpec, x: np.ndarray, params: dict[str, float], catalog) -> np.ndarray:
    return region.eval(np.asarray(x, dtype=float), params, catalog)


def partitions_into(alpha, region2d: RegionSpec, params: dict[str, float], catalog) -> bool:
    """Exists-bipartition of the alpha entries landing in the 2-d region."""
    if isinstance(alpha, AlphaVector):
        entries = alpha.alphas
    else:
        entries = tuple(float(a) for a in alpha)
    if len(entries) > 24:
        raise RegionError("bipartition enumeration capped at 24 entries")
    if region2d.dimension not in (2, None):
        raise RegionError("partition target must be two-dimensional")
    x = np.asarray(entries, dtype=float)[None, :]
    atom = Splits(region2d.name)
    return bool(atom.eval(x, params, catalog)[0])
