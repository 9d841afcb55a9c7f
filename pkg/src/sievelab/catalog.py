"""Region catalog: structured-text records for every named region, Type-II
range list and integral definition.

The grammar is line-oriented (see docs/catalog_format.md and the shipped
data/catalog.txt).  Records:

    region NAME dim=<k|any>
      bound t<i> = [EXPR, EXPR]          # optional sampling box, per variable
      where BOOLEXPR                     # may continue over multiple lines
    end

    ranges NAME
      piece (EXPR, EXPR) src=LABEL       # ( ) open, [ ] closed endpoints
      ...
    end

    integral NAME dim=<k> region=NAME weight=<reciprocal|buchstab|one> \
        mult=<rational> [sorted]

    group NAME: member1 member2 ...

BOOLEXPR uses and/or/not, parentheses, comparison chains over affine
expressions (variables t1..t9, tsum/tmin/tmax, parameter names), and the
atoms in(NAME), in(NAME; 1, 2+3), splits(NAME), splits(NAME; append=EXPR)
and descending.  Parsing and serialisation round-trip losslessly.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .regions import (
    PARAM_NAMES,
    AffineForm,
    BoolNode,
    Comparison,
    Descending,
    IntervalPiece,
    IntervalUnion,
    Membership,
    RegionError,
    RegionSpec,
    Splits,
)

__all__ = ["Catalog", "IntegralDef", "load_catalog", "default_catalog", "dumps"]

ENV_VAR = "SIEVELAB_CATALOG"

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><=|>=|<|>|\+|-|\*|/|\(|\)|,|;|=))"
)


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise RegionError(f"cannot tokenize {text[pos:]!r}")
            break
        out.append(m.group(m.lastgroup))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise RegionError("unexpected end of expression")
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise RegionError(f"expected {tok!r}, got {got!r}")

    # ----- boolean grammar -----

    def parse_bool(self) -> BoolNode:
        node = self.parse_and()
        children = [node]
        while self.peek() == "or":
            self.next()
            children.append(self.parse_and())
        return children[0] if len(children) == 1 else BoolNode("or", tuple(children))

    def parse_and(self) -> BoolNode:
        node = self.parse_unary()
        children = [node]
        while self.peek() == "and":
            self.next()
            children.append(self.parse_unary())
        return children[0] if len(children) == 1 else BoolNode("and", tuple(children))

    def parse_unary(self) -> BoolNode:
        tok = self.peek()
        if tok == "not":
            self.next()
            return BoolNode("not", (self.parse_unary(),))
        if tok == "true" or tok == "false":
            self.next()
            return BoolNode("const", value=(tok == "true"))
        if tok == "descending":
            self.next()
            return BoolNode("atom", atom=Descending())
        if tok == "in":
            return self._parse_in()
        if tok == "splits":
            return self._parse_splits()
        if tok == "(":
            # Either a boolean parenthesis or an arithmetic one starting a
            # comparison chain; try the comparison first and backtrack.
            save = self.i
            try:
                return self._parse_chain()
            except RegionError:
                self.i = save
            self.next()
            node = self.parse_bool()
            self.expect(")")
            return node
        return self._parse_chain()

    def _parse_in(self) -> BoolNode:
        self.expect("in")
        self.expect("(")
        name = self.next()
        groups: list[tuple[int, ...]] = []
        if self.peek() == ";":
            self.next()
            while True:
                grp = [self._var_index(self.next())]
                while self.peek() == "+":
                    self.next()
                    grp.append(self._var_index(self.next()))
                groups.append(tuple(grp))
                if self.peek() == ",":
                    self.next()
                    continue
                break
        self.expect(")")
        return BoolNode("atom", atom=Membership(name, tuple(groups)))

    def _parse_splits(self) -> BoolNode:
        self.expect("splits")
        self.expect("(")
        name = self.next()
        append = None
        if self.peek() == ";":
            self.next()
            self.expect("append")
            self.expect("=")
            append = self.parse_affine()
        self.expect(")")
        return BoolNode("atom", atom=Splits(name, append))

    @staticmethod
    def _var_index(tok: str) -> int:
        m = re.fullmatch(r"t(\d+)", tok)
        if not m:
            raise RegionError(f"expected variable t<i>, got {tok!r}")
        return int(m.group(1))

    def _parse_chain(self) -> BoolNode:
        first = self.parse_affine()
        rel = self.peek()
        if rel not in ("<", "<=", ">", ">="):
            raise RegionError(f"expected relation after expression, got {rel!r}")
        comps = []
        lhs = first
        while self.peek() in ("<", "<=", ">", ">="):
            op = self.next()
            rhs = self.parse_affine()
            comps.append(Comparison(lhs, op, rhs))
            lhs = rhs
        if len(comps) == 1:
            return BoolNode("atom", atom=comps[0])
        return BoolNode("and", tuple(BoolNode("atom", atom=c) for c in comps))

    # ----- affine grammar -----

    def parse_affine(self) -> AffineForm:
        node = self.parse_term()
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term(self) -> AffineForm:
        node = self.parse_factor()
        while self.peek() in ("*", "/"):
            op = self.next()
            rhs = self.parse_factor()
            if op == "*":
                if _is_const(rhs):
                    node = node.scale(rhs.const)
                elif _is_const(node):
                    node = rhs.scale(node.const)
                else:
                    raise RegionError("nonlinear product in affine expression")
            else:
                if not _is_const(rhs) or rhs.const == 0:
                    raise RegionError("division must be by a nonzero constant")
                node = node.scale(Fraction(1) / rhs.const)
        return node

    def parse_factor(self) -> AffineForm:
        tok = self.next()
        if tok == "-":
            return -self.parse_factor()
        if tok == "(":
            node = self.parse_affine()
            self.expect(")")
            return node
        if re.fullmatch(r"\d+\.\d+|\d+", tok):
            return AffineForm.make(const=Fraction(tok))
        if re.fullmatch(r"t\d+", tok):
            return AffineForm.make(vars={int(tok[1:]): 1})
        if tok in ("tsum", "tmin", "tmax"):
            return AffineForm.make(specials={tok: 1})
        if tok in PARAM_NAMES:
            return AffineForm.make(params={tok: 1})
        raise RegionError(f"unknown symbol {tok!r}")


def _is_const(form: AffineForm) -> bool:
    return not form.params and not form.vars and not form.specials


def parse_bool_expr(text: str) -> BoolNode:
    p = _Parser(_tokenize(text))
    node = p.parse_bool()
    if p.peek() is not None:
        raise RegionError(f"trailing tokens in {text!r}")
    return node


def parse_affine_expr(text: str) -> AffineForm:
    p = _Parser(_tokenize(text))
    node = p.parse_affine()
    if p.peek() is not None:
        raise RegionError(f"trailing tokens in {text!r}")
    return node


# ---------------------------------------------------------------------------
# Catalog records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralDef:
    name: str
    dim: int
    region: str
    weight: str  # 'reciprocal' | 'buchstab' | 'one'
    mult: Fraction
    sorted: bool = False


@dataclass
class Catalog:
    regions: dict[str, RegionSpec] = field(default_factory=dict)
    ranges: dict[str, IntervalUnion] = field(default_factory=dict)
    integrals: dict[str, IntegralDef] = field(default_factory=dict)
    groups: dict[str, list[str]] = field(default_factory=dict)

    def region(self, name: str) -> RegionSpec:
        try:
            return self.regions[name]
        except KeyError:
            raise RegionError(f"unknown region {name!r}") from None

    def validate(self) -> None:
        """No dangling references anywhere in the catalog."""
        for spec in self.regions.values():
            for ref in spec.referenced_regions():
                if ref not in self.regions:
                    raise RegionError(f"region {spec.name} references unknown {ref!r}")
        for name in self.ranges:
            # theta_mode is a standalone range list; everything else must
            # name a catalogued subregion.
            if name != "theta_mode" and name not in self.regions:
                raise RegionError(f"ranges record for unknown region {name!r}")
        for spec in self.integrals.values():
            if spec.region not in self.regions:
                raise RegionError(f"integral {spec.name} references unknown {spec.region!r}")
        for grp, members in self.groups.items():
            for m in members:
                if m not in self.regions:
                    raise RegionError(f"group {grp} lists unknown region {m!r}")


def loads(text: str) -> Catalog:
    cat = Catalog()
    lines = text.splitlines()
    i = 0

    def strip(line: str) -> str:
        return line.split("#", 1)[0].strip()

    while i < len(lines):
        line = strip(lines[i])
        i += 1
        if not line:
            continue
        if line.startswith("region "):
            m = re.fullmatch(r"region\s+(\S+)\s+dim=(any|\d+)", line)
            if not m:
                raise RegionError(f"bad region header: {line!r}")
            name = m.group(1)
            dim = None if m.group(2) == "any" else int(m.group(2))
            bounds: dict[int, tuple[AffineForm, AffineForm]] = {}
            where_text: list[str] = []
            in_where = False
            while i < len(lines):
                body = strip(lines[i])
                i += 1
                if body == "end":
                    break
                if not body:
                    continue
                if body.startswith("bound "):
                    bm = re.fullmatch(r"bound\s+t(\d+)\s*=\s*\[(.*),(.*)\]", body)
                    if not bm:
                        raise RegionError(f"bad bound line: {body!r}")
                    bounds[int(bm.group(1))] = (
                        parse_affine_expr(bm.group(2)),
                        parse_affine_expr(bm.group(3)),
                    )
                    continue
                if body.startswith("where "):
                    in_where = True
                    where_text.append(body[len("where ") :])
                    continue
                if in_where:
                    where_text.append(body)
                    continue
                raise RegionError(f"unexpected line in region {name}: {body!r}")
            if not where_text:
                raise RegionError(f"region {name} has no where clause")
            tree = parse_bool_expr(" ".join(where_text))
            cat.regions[name] = RegionSpec(name, dim, tree, bounds)
        elif line.startswith("ranges "):
            name = line.split()[1]
            pieces: list[IntervalPiece] = []
            while i < len(lines):
                body = strip(lines[i])
                i += 1
                if body == "end":
                    break
                if not body:
                    continue
                pm = re.fullmatch(r"piece\s+([(\[])(.*),(.*)([)\]])\s+src=(\S+)", body)
                if not pm:
                    raise RegionError(f"bad piece line: {body!r}")
                pieces.append(
                    IntervalPiece(
                        lo=parse_affine_expr(pm.group(2)),
                        hi=parse_affine_expr(pm.group(3)),
                        lo_open=pm.group(1) == "(",
                        hi_open=pm.group(4) == ")",
                        src=pm.group(5),
                    )
                )
            cat.ranges[name] = IntervalUnion(pieces)
        elif line.startswith("integral "):
            m = re.fullmatch(
                r"integral\s+(\S+)\s+dim=(\d+)\s+region=(\S+)\s+weight=(\S+)"
                r"\s+mult=(\S+)(\s+sorted)?",
                line,
            )
            if not m:
                raise RegionError(f"bad integral line: {line!r}")
            cat.integrals[m.group(1)] = IntegralDef(
                name=m.group(1),
                dim=int(m.group(2)),
                region=m.group(3),
                weight=m.group(4),
                mult=Fraction(m.group(5)),
                sorted=bool(m.group(6)),
            )
        elif line.startswith("group "):
            m = re.fullmatch(r"group\s+(\S+)\s*:\s*(.*)", line)
            if not m:
                raise RegionError(f"bad group line: {line!r}")
            cat.groups[m.group(1)] = m.group(2).split()
        else:
            raise RegionError(f"unrecognised catalog line: {line!r}")
    cat.validate()
    return cat


def load_catalog(path: str) -> Catalog:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


_DEFAULT: Catalog | None = None


def default_catalog() -> Catalog:
    """Catalog from SIEVELAB_CATALOG if set, else the packaged data file."""
    global _DEFAULT
    env = os.environ.get(ENV_VAR)
    if env:
        return load_catalog(env)
    if _DEFAULT is None:
        text = resources.files("sievelab.data").joinpath("catalog.txt").read_text()
        _DEFAULT = loads(text)
    return _DEFAULT


# ---------------------------------------------------------------------------
# Serialisation (lossless round-trip)
# ---------------------------------------------------------------------------


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _affine_str(form: AffineForm) -> str:
    terms: list[str] = []

    def emit(coef: Fraction, sym: str) -> None:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = sym if mag == 1 else f"{_frac_str(mag)}*{sym}"
        terms.append((sign, body))

    if form.const != 0 or not (form.params or form.vars or form.specials):
        terms.append(("-" if form.const < 0 else "+", _frac_str(abs(form.const))))
    for name, coef in form.params:
        emit(coef, name)
    for idx, coef in form.vars:
        emit(coef, f"t{idx}")
    for name, coef in form.specials:
        emit(coef, name)
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _bool_str(node: BoolNode, parent: str = "or") -> str:
    if node.op == "const":
        return "true" if node.value else "false"
    if node.op == "atom":
        a = node.atom
        if isinstance(a, Comparison):
            return f"{_affine_str(a.lhs)} {a.rel} {_affine_str(a.rhs)}"
        if isinstance(a, Membership):
            if a.groups:
                grps = ", ".join("+".join(f"t{i}" for i in g) for g in a.groups)
                return f"in({a.region}; {grps})"
            return f"in({a.region})"
        if isinstance(a, Splits):
            if a.append is not None:
                return f"splits({a.region}; append={_affine_str(a.append)})"
            return f"splits({a.region})"
        if isinstance(a, Descending):
            return "descending"
        raise RegionError(f"unknown atom {a!r}")
    if node.op == "not":
        inner = _bool_str(node.children[0], "not")
        return f"not {inner}"
    sep = f" {node.op} "
    body = sep.join(_bool_str(c, node.op) for c in node.children)
    need_paren = (node.op == "or" and parent in ("and", "not")) or (
        node.op == "and" and parent == "not"
    )
    return f"({body})" if need_paren else body


def dumps(cat: Catalog) -> str:
    out: list[str] = []
    for name, spec in cat.regions.items():
        dim = "any" if spec.dimension is None else str(spec.dimension)
        out.append(f"region {name} dim={dim}")
        for idx in sorted(spec.bounds):
            lo, hi = spec.bounds[idx]
            out.append(f"  bound t{idx} = [{_affine_str(lo)}, {_affine_str(hi)}]")
        out.append(f"  where {_bool_str(spec.tree)}")
        out.append("end")
    for name, union in cat.ranges.items():
        out.append(f"ranges {name}")
        for p in union.pieces:
            lb = "(" if p.lo_open else "["
            rb = ")" if p.hi_open else "]"
            out.append(f"  piece {lb}{_affine_str(p.lo)}, {_affine_str(p.hi)}{rb} src={p.src}")
        out.append("end")
    for spec in cat.integrals.values():
        tail = " sorted" if spec.sorted else ""
        out.append(
            f"integral {spec.name} dim={spec.dim} region={spec.region} "
            f"weight={spec.weight} mult={_frac_str(spec.mult)}{tail}"
        )
    for name, members in cat.groups.items():
        out.append(f"group {name}: {' '.join(members)}")
    return "\n".join(out) + "\n"
