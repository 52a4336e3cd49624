"""Family records for the 85 codimension-2 Q-Fano WCIs and the curated database.

The database file is line oriented (see data/families.db): one `family` header
per family followed by indented `point` center lines and optional `case`,
`c1`, `c2`, `c3` and `gamma` lines.  The file carries the paper-truth
annotations; computed results are diffed against it, never written back.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple

DB_ENV_VAR = "WCIRIG_DB"
DEFAULT_DB = os.path.join(os.path.dirname(__file__), "data", "families.db")

LETTERS = ("x", "y", "z", "s", "t", "u", "v", "w")

# Paper section 1 partition of the 85 families by birational type.
RIGID_IDS = frozenset({1, 8, 14, 20, 24, 31, 37, 45, 47, 51, 59, 60, 64, 71, 75, 76, 78, 84, 85})
DP_IDS = frozenset({2, 4, 5, 11, 12, 13})
FANO_IDS = frozenset(range(1, 86)) - RIGID_IDS - DP_IDS


class DatabaseError(ValueError):
    """Malformed or inconsistent database content."""


@dataclass(frozen=True)
class FamilyRecord:
    id: int
    weights: Tuple[int, ...]
    degrees: Tuple[int, int]

    def __post_init__(self):
        if not (1 <= self.id <= 85):
            raise ValueError(f"family id {self.id} out of range")
        if len(self.weights) != 6 or any(w <= 0 for w in self.weights):
            raise ValueError("need six positive weights")
        if tuple(sorted(self.weights)) != self.weights:
            raise ValueError("weights must be stored ascending")
        if self.degrees[0] > self.degrees[1]:
            raise ValueError("degrees must satisfy d1 <= d2")

    def coordinate_names(self) -> Tuple[str, ...]:
        """x,y,z,s,t,u per run of equal weights, with indices inside runs."""
        groups: list[list[int]] = []
        for j, w in enumerate(self.weights):
            if groups and self.weights[groups[-1][0]] == w:
                groups[-1].append(j)
            else:
                groups.append([j])
        names = [""] * 6
        for letter, grp in zip(LETTERS, groups):
            if len(grp) == 1:
                names[grp[0]] = letter
            else:
                for k, j in enumerate(grp):
                    names[j] = f"{letter}{k}"
        return tuple(names)


def anticanonical_degree(f: FamilyRecord) -> Fraction:
    """(A^3) = d1*d2 / prod(weights), exact."""
    prod = 1
    for w in f.weights:
        prod *= w
    return Fraction(f.degrees[0] * f.degrees[1], prod)


def check_anticanonical(f: FamilyRecord) -> bool:
    return sum(f.weights) - f.degrees[0] - f.degrees[1] == 1


def degree_c2(f: FamilyRecord) -> Fraction:
    """(-K . c2(X)), from c(X) = prod(1+a_i h) / ((1+d1 h)(1+d2 h)).

    Feeds the Riemann-Roch consistency check
    24 = (-K . c2) + sum over the basket of (r - 1/r).
    """
    a = f.weights
    d1, d2 = f.degrees
    e1 = sum(a)
    e2 = (e1 * e1 - sum(w * w for w in a)) // 2
    coeff = e2 - e1 * (d1 + d2) + d1 * d1 + d1 * d2 + d2 * d2
    return coeff * anticanonical_degree(f)


@dataclass(frozen=True)
class WeightedSpace:
    weights: Tuple[int, ...]

    def __post_init__(self):
        if not (2 <= len(self.weights) <= 6) or any(w <= 0 for w in self.weights):
            raise ValueError("need 2..6 positive weights")


def _gcd_all(xs: Sequence[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def well_form(space: WeightedSpace, degrees: Sequence[int]) -> tuple[WeightedSpace, Tuple[int, ...], int]:
    """Normalize to a well-formed space; returns (space, degrees, total factor).

    Stage 1 divides everything by the gcd of all weights.  Stage 2 removes a
    prime shared by all weights but one (degrees transform by the same prime).
    A degree that does not transform integrally signals a degenerate stratum.
    """
    w = list(space.weights)
    ds = list(degrees)
    factor = 1

    g = _gcd_all(w)
    if g > 1:
        for d in ds:
            if d % g:
                raise DatabaseError(f"degree {d} not divisible by overall gcd {g}")
        w = [x // g for x in w]
        ds = [d // g for d in ds]
        factor *= g

    changed = True
    while changed:
        changed = False
        for j in range(len(w)):
            others = [w[i] for i in range(len(w)) if i != j]
            g = _gcd_all(others)
            if g > 1:
                for d in ds:
                    if d % g:
                        raise DatabaseError(
                            f"degree {d} fails to transform under well-forming by {g}")
                w = [x // g if i != j else x for i, x in enumerate(w)]
                ds = [d // g for d in ds]
                factor *= g
                changed = True
                break
    return WeightedSpace(tuple(w)), tuple(ds), factor


@dataclass(frozen=True)
class CenterAnnotation:
    """One singular-point row of the big table."""

    indices: Tuple[int, ...]              # stratum index set J (0-based)
    r: int
    type_: Tuple[int, int, int]           # normalized 1/r(w1,w2,w3)
    count: int
    method: str                           # TEST_CLASS | CONE | BAD_LINK | QI | EI | FANO_LINK | DP_LINK
    params: Tuple[int, ...] = ()
    target: Tuple[int, ...] = ()          # FANO_LINK ambient weights as printed
    iso: str = ""                         # isolating polynomial set, display only
    conds: Tuple[str, ...] = ()
    dagger: Optional[tuple] = None        # (monomial, sb, se, tb, te, mult)
    phantom: bool = False                 # printed in the paper but not on X
    note: str = ""

    def type_str(self) -> str:
        return f"1/{self.r}({self.type_[0]},{self.type_[1]},{self.type_[2]})"

    def method_str(self) -> str:
        if self.method == "TEST_CLASS":
            return f"TEST_CLASS({self.params[0]},{self.params[1]})"
        if self.method == "CONE":
            return f"CONE({self.params[0]})"
        if self.method == "BAD_LINK":
            return "BAD_LINK(" + ",".join(str(p) for p in self.params) + ")"
        if self.method == "FANO_LINK":
            return f"FANO_LINK({self.params[0]};" + ",".join(str(t) for t in self.target) + ")"
        if self.method == "DP_LINK":
            return f"DP_LINK({self.params[0]})"
        return self.method


@dataclass(frozen=True)
class GammaCurve:
    """Equations of the curve (x0 = x1 = 0)_X from the paper's curve tables."""

    variables: Tuple[Tuple[str, int], ...]
    equations: Tuple[str, str]
    conditions: str = ""


@dataclass
class TableAnnotation:
    id: int
    a3: Fraction
    case: Optional[str]                    # "1".."5" when the table prints one
    centers: list[CenterAnnotation] = field(default_factory=list)
    c1: Optional[str] = None               # monomial required by (C1)
    c2: Tuple[Tuple[int, int, int, int], ...] = ()
    c3: bool = False
    gamma: Optional[GammaCurve] = None

    def basket_rows(self) -> list[CenterAnnotation]:
        return [c for c in self.centers if not c.phantom]


_TYPE_RE = re.compile(r"^1/(\d+)\((\d+),(\d+),(\d+)\)$")
_METHOD_RE = re.compile(r"^([A-Z_]+)(?:\(([^)]*)\))?$")


def _parse_point_line(line: str, lineno: int) -> CenterAnnotation:
    tokens = line.split()
    fields: dict = {}
    i = 0
    def take(expected: str) -> str:
        nonlocal i
        if i >= len(tokens) or tokens[i] != expected:
            raise DatabaseError(f"line {lineno}: expected '{expected}'")
        i += 1
        if i >= len(tokens):
            raise DatabaseError(f"line {lineno}: missing value after '{expected}'")
        value = tokens[i]
        i += 1
        return value

    indices = tuple(int(t) for t in take("point").split(","))
    m = _TYPE_RE.match(take("type"))
    if not m:
        raise DatabaseError(f"line {lineno}: bad type string")
    r = int(m.group(1))
    type_ = (int(m.group(2)), int(m.group(3)), int(m.group(4)))
    count = int(take("count"))
    mm = _METHOD_RE.match(take("method"))
    if not mm:
        raise DatabaseError(f"line {lineno}: bad method")
    method = mm.group(1)
    params: Tuple[int, ...] = ()
    target: Tuple[int, ...] = ()
    if mm.group(2) is not None:
        raw = mm.group(2)
        if method == "FANO_LINK":
            deg, _, ws = raw.partition(";")
            params = (int(deg),)
            target = tuple(int(t) for t in ws.split(","))
        else:
            params = tuple(int(t) for t in raw.split(","))
    iso = ""
    conds: Tuple[str, ...] = ()
    dagger = None
    phantom = False
    note = ""
    while i < len(tokens):
        key = tokens[i]
        i += 1
        if key == "phantom":
            phantom = True
        elif key in ("iso", "conds", "dagger", "note"):
            if i >= len(tokens):
                raise DatabaseError(f"line {lineno}: missing value after '{key}'")
            value = tokens[i]
            i += 1
            if key == "iso":
                iso = value
            elif key == "conds":
                conds = tuple(value.split(","))
            elif key == "note":
                note = value
            else:
                mono, _, nums = value.partition(";")
                sb, se, tb, te, mult = (int(t) for t in nums.split(","))
                dagger = (mono, sb, se, tb, te, mult)
        else:
            raise DatabaseError(f"line {lineno}: unknown token {key!r}")
    if method not in ("TEST_CLASS", "CONE", "BAD_LINK", "QI", "EI", "FANO_LINK", "DP_LINK"):
        raise DatabaseError(f"line {lineno}: unknown method {method}")
    return CenterAnnotation(indices=indices, r=r, type_=type_, count=count,
                            method=method, params=params, target=target, iso=iso,
                            conds=conds, dagger=dagger, phantom=phantom, note=note)


def load_database(path: Optional[str] = None) -> list[tuple[FamilyRecord, TableAnnotation]]:
    """Parse and validate the families database (85 records)."""
    if path is None:
        path = os.environ.get(DB_ENV_VAR) or DEFAULT_DB
    records: list[tuple[FamilyRecord, TableAnnotation]] = []
    current: Optional[tuple[FamilyRecord, TableAnnotation]] = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                if line.startswith("family "):
                    parts = [p.strip() for p in line.split("|")]
                    fid = int(parts[0].split()[1])
                    weights = tuple(int(t) for t in parts[1].split()[1].split(","))
                    degrees = tuple(int(t) for t in parts[2].split()[1].split(","))
                    a3 = Fraction(parts[3].split()[1])
                    case = None
                    for extra in parts[4:]:
                        k, v = extra.split()
                        if k == "case":
                            case = v
                        else:
                            raise DatabaseError(f"line {lineno}: unknown header field {k}")
                    fam = FamilyRecord(fid, weights, (degrees[0], degrees[1]))
                    current = (fam, TableAnnotation(id=fid, a3=a3, case=case))
                    records.append(current)
                elif line.startswith("point "):
                    if current is None:
                        raise DatabaseError(f"line {lineno}: point before any family")
                    current[1].centers.append(_parse_point_line(line, lineno))
                elif line.startswith("c1 "):
                    current[1].c1 = line.split(None, 1)[1].strip()
                elif line.startswith("c2 "):
                    types = []
                    for chunk in line.split(None, 1)[1].split(";"):
                        nums = tuple(int(t) for t in chunk.strip("() ").split(","))
                        if len(nums) != 4:
                            raise DatabaseError(f"line {lineno}: WCI curve type needs 4 entries")
                        types.append(nums)
                    current[1].c2 = tuple(types)
                elif line == "c3":
                    current[1].c3 = True
                elif line.startswith("gamma "):
                    body = line.split(None, 1)[1]
                    pieces = [p.strip() for p in body.split("::")]
                    if len(pieces) < 3:
                        raise DatabaseError(f"line {lineno}: gamma needs vars :: eq1 :: eq2")
                    varspec = tuple(
                        (name, int(w))
                        for name, w in (tok.split(":") for tok in pieces[0].split(",")))
                    conds = pieces[3] if len(pieces) > 3 else ""
                    current[1].gamma = GammaCurve(varspec, (pieces[1], pieces[2]), conds)
                else:
                    raise DatabaseError(f"line {lineno}: unrecognized line {line!r}")
            except (ValueError, IndexError) as exc:
                if isinstance(exc, DatabaseError):
                    raise
                raise DatabaseError(f"line {lineno}: {exc}") from exc

    if len(records) != 85:
        raise DatabaseError(f"expected 85 families, found {len(records)}")
    seen = set()
    for fam, ann in records:
        if fam.id in seen:
            raise DatabaseError(f"duplicate family {fam.id}")
        seen.add(fam.id)
        if not check_anticanonical(fam):
            raise DatabaseError(f"family {fam.id} violates the anticanonical relation")
        if anticanonical_degree(fam) <= 0:
            raise DatabaseError(f"family {fam.id} has nonpositive degree")
    records.sort(key=lambda pair: pair[0].id)
    return records
