"""Sparse multivariate polynomials over exact rationals with a weighted grading.

A polynomial lives in a ring with a fixed ordered tuple of (name, weight)
variables.  Terms map exponent tuples to nonzero Fraction coefficients; the
weighted degree of a term is sum(e_i * w_i).  Monomials are ordered by
graded lex (degree first, then exponent tuple with the leftmost variable
largest), which fixes a canonical term order for printing, leading terms
and exact division.

No floating point enters anywhere; coefficients are Fractions throughout.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]

_MASK = (1 << 64) - 1


class GradingError(ValueError):
    """A substitution or construction would break the weighted grading."""


def monomials_of_degree(weights: Sequence[int], d: int) -> list[Exponent]:
    """All exponent tuples e with sum(e_i * weights_i) == d, in graded-lex order.

    Graded-lex here means the exponent of the first variable decreases first,
    e.g. weights (1,1), d=2 gives [(2,0),(1,1),(0,2)].
    """
    if not weights:
        raise ValueError("weights must be nonempty")
    if d < 0:
        return []
    n = len(weights)
    out: list[Exponent] = []
    stack: list[int] = []

    def rec(i: int, rem: int) -> None:
        if i == n - 1:
            q, r = divmod(rem, weights[i])
            if r == 0:
                out.append(tuple(stack) + (q,))
            return
        w = weights[i]
        for e in range(rem // w, -1, -1):
            stack.append(e)
            rec(i + 1, rem - e * w)
            stack.pop()

    rec(0, d)
    return out


def count_monomials(weights: Sequence[int], d: int) -> int:
    """Number of monomials of weighted degree d (coin-problem DP, no enumeration)."""
    if d < 0:
        return 0
    dp = [0] * (d + 1)
    dp[0] = 1
    for w in weights:
        for t in range(w, d + 1):
            dp[t] += dp[t - w]
    return dp[d]


class SeededRNG:
    """SplitMix64 stream; deterministic across platforms and Python versions."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def coefficient(self) -> int:
        # positive in 1..97 so generic-member identities never see accidental zeros
        return 1 + self.next_u64() % 97

    def derive(self, label: str) -> "SeededRNG":
        child = SeededRNG(self.state)
        for ch in label:
            child.state = (child.state * 1000003 + ord(ch) + 1) & _MASK
            child.next_u64()
        return child


class Ring:
    """A fixed weighted variable tuple; factory for polynomials in it."""

    def __init__(self, *variables: Tuple[str, int]):
        if not variables:
            raise ValueError("a ring needs at least one variable")
        names = tuple(n for n, _ in variables)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for n, w in variables:
            if w <= 0:
                raise GradingError(f"variable {n} has nonpositive weight {w}")
        self.variables: Tuple[Tuple[str, int], ...] = tuple(variables)
        self.names = names
        self.weights = tuple(w for _, w in variables)
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ring) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def __repr__(self) -> str:
        inner = ",".join(f"{n}:{w}" for n, w in self.variables)
        return f"Ring({inner})"

    def zero(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {})

    def const(self, c) -> "GradedPolynomial":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return GradedPolynomial(self, {(0,) * len(self.names): c})

    def var(self, name: str) -> "GradedPolynomial":
        i = self._index[name]
        e = [0] * len(self.names)
        e[i] = 1
        return GradedPolynomial(self, {tuple(e): Fraction(1)})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "GradedPolynomial":
        e = [0] * len(self.names)
        for n, k in exps.items():
            e[self._index[n]] = k
        c = Fraction(coeff)
        if c == 0:
            return self.zero()
        return GradedPolynomial(self, {tuple(e): c})

    def monomials_of_degree(self, d: int) -> list[Exponent]:
        return monomials_of_degree(self.weights, d)

    def generic(self, d: int, rng: SeededRNG,
                exclusions: Iterable[Exponent] = ()) -> "GradedPolynomial":
        """A homogeneous degree-d member with deterministic coefficients in 1..97."""
        excl = set(exclusions)
        terms = {}
        for e in self.monomials_of_degree(d):
            if e in excl:
                continue
            terms[e] = Fraction(rng.coefficient())
        return GradedPolynomial(self, terms)

    def parse(self, text: str, placeholders: Mapping[str, int] | None = None) -> "GradedPolynomial":
        """Parse "s0*y + s1*y + z^2 + A*y^3"; single capital letters are coefficients.

        Placeholder letters map to the given integers (default: distinct values
        2,3,5,... in order of appearance).  Used for the fixture equation
        templates of the curve tables.
        """
        found: Dict[str, int] = dict(placeholders or {})
        primes = [2, 3, 5, 7, 11, 13, 17, 19, 23]
        result = self.zero()
        for part in text.replace("-", "+-").split("+"):
            part = part.strip()
            if not part:
                continue
            sign = 1
            if part.startswith("-"):
                sign = -1
                part = part[1:].strip()
            coeff = Fraction(sign)
            exps: Dict[str, int] = {}
            for factor in part.split("*"):
                factor = factor.strip()
                if "^" in factor:
                    base, _, k = factor.partition("^")
                    power = int(k)
                else:
                    base, power = factor, 1
                base = base.strip()
                if base.isdigit():
                    coeff *= Fraction(int(base)) ** power
                elif base in self._index:
                    exps[base] = exps.get(base, 0) + power
                elif len(base) == 1 and base.isupper():
                    if base not in found:
                        found[base] = primes[len(found) % len(primes)]
                    coeff *= Fraction(found[base]) ** power
                else:
                    raise ValueError(f"unknown symbol {base!r} in {text!r}")
            result = result + self.monomial(exps, coeff)
        return result


class GradedPolynomial:
    """Immutable sparse polynomial in a Ring.  Arithmetic is exact."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Dict[Exponent, Fraction]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def term_degree(self, e: Exponent) -> int:
        w = self.ring.weights
        return sum(ei * wi for ei, wi in zip(e, w))

    def degrees(self) -> set[int]:
        return {self.term_degree(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_degree(self) -> int | None:
        """The common degree, or None for the zero polynomial; raises if mixed."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise GradingError(f"polynomial is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def coefficient(self, exps: Mapping[str, int]) -> Fraction:
        e = [0] * len(self.ring.names)
        for n, k in exps.items():
            e[self.ring._index[n]] = k
        return self.terms.get(tuple(e), Fraction(0))

    def degree_in(self, name: str) -> int:
        """Largest exponent of one variable (zero polynomial gives -1)."""
        i = self.ring._index[name]
        return max((e[i] for e in self.terms), default=-1)

    def sorted_terms(self) -> list[Tuple[Exponent, Fraction]]:
        """Terms in descending graded-lex order (the canonical form)."""
        key = lambda item: (self.term_degree(item[0]), item[0])
        return sorted(self.terms.items(), key=key, reverse=True)

    def leading(self) -> Tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = lambda e: (self.term_degree(e), e)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "GradedPolynomial") -> None:
        if self.ring != other.ring:
            raise ValueError("polynomials live in different rings")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return GradedPolynomial(self.ring, out)

    def __neg__(self) -> "GradedPolynomial":
        return GradedPolynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "GradedPolynomial":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return self.ring.zero()
            return GradedPolynomial(self.ring, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                if s is None:
                    out[e] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return GradedPolynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GradedPolynomial":
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- structural operations -------------------------------------------

    def set_zero(self, names: Iterable[str]) -> "GradedPolynomial":
        """Partial evaluation: the named variables are set to 0."""
        idx = [self.ring._index[n] for n in names]
        out = {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)}
        return GradedPolynomial(self.ring, out)

    def morph(self, target: Ring, images: Mapping[str, "GradedPolynomial"]) -> "GradedPolynomial":
        """Ring map sending each variable to a homogeneous image of equal weight."""
        for (n, w) in self.ring.variables:
            img = images.get(n)
            if img is None:
                raise GradingError(f"no image given for variable {n}")
            if img.ring != target:
                raise ValueError(f"image of {n} lives in the wrong ring")
            if not img.is_zero() and img.homogeneous_degree() != w:
                raise GradingError(
                    f"image of {n} has degree {img.homogeneous_degree()}, expected {w}")
        result = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for (n, _), k in zip(self.ring.variables, e):
                if k:
                    term = term * (images[n] ** k)
            result = result + term
        return result

    def substitute(self, name: str, replacement: "GradedPolynomial") -> "GradedPolynomial":
        """Replace one variable by a homogeneous polynomial of the same weight."""
        if replacement.ring != self.ring:
            raise ValueError("replacement must live in the same ring")
        w = self.ring.weights[self.ring._index[name]]
        if not replacement.is_zero() and replacement.homogeneous_degree() != w:
            raise GradingError(
                f"substituting {name} (weight {w}) by a degree-"
                f"{replacement.homogeneous_degree()} polynomial breaks the grading")
        images = {n: self.ring.var(n) for n in self.ring.names}
        images[name] = replacement
        return self.morph(self.ring, images)

    def divide_exact(self, divisor: "GradedPolynomial") -> "GradedPolynomial | None":
        """Exact quotient self / divisor, or None when the division fails.

        Single-divisor reduction against the graded-lex leading term; for a
        true factor the remainder reaches zero, otherwise the first stuck
        leading term certifies non-divisibility.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        de, dc = divisor.leading()
        rem = self
        q: Dict[Exponent, Fraction] = {}
        while not rem.is_zero():
            e, c = rem.leading()
            m = tuple(a - b for a, b in zip(e, de))
            if any(x < 0 for x in m):
                return None
            coeff = c / dc
            q[m] = q.get(m, Fraction(0)) + coeff
            rem = rem - GradedPolynomial(self.ring, {m: coeff}) * divisor
        return GradedPolynomial(self.ring, q)

    # -- presentation ------------------------------------------------------

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for (n, _), k in zip(self.ring.variables, e):
                if k == 1:
                    factors.append(n)
                elif k > 1:
                    factors.append(f"{n}^{k}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def generic_member(weights: Sequence[int], d: int, seed: int,
                   exclusions: Iterable[Exponent] = ()) -> GradedPolynomial:
    """Spec-level helper: generic degree-d member on anonymous variables x0..xn."""
    ring = Ring(*((f"x{i}", w) for i, w in enumerate(weights)))
    return ring.generic(d, SeededRNG(seed), exclusions)


def det(matrix: Sequence[Sequence[GradedPolynomial]]) -> GradedPolynomial:
    """Determinant of a small square matrix of polynomials (Laplace expansion)."""
    n = len(matrix)
    ring = matrix[0][0].ring
    if n == 1:
        return matrix[0][0]

    cache: Dict[Tuple[int, Tuple[int, ...]], GradedPolynomial] = {}

    def minor(row: int, cols: Tuple[int, ...]) -> GradedPolynomial:
        if row == n:
            return ring.const(1)
        key = (row, cols)
        got = cache.get(key)
        if got is not None:
            return got
        acc = ring.zero()
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            piece = entry * sub
            acc = acc + (piece if pos % 2 == 0 else -piece)
        cache[key] = acc
        return acc

    return minor(0, tuple(range(n)))
