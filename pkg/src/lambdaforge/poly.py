"""Sparse multivariate polynomials and truncated power series.

A :class:`MultiPoly` stores one term per exponent vector with a nonzero
canonical coefficient.  Values are immutable once constructed; all
operations return new objects, so sharing across threads is safe.

Canonical order everywhere is graded lexicographic (grlex) with respect
to the stored variable order, descending for serialization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

from .errors import AlignmentError, DomainError, SubstitutionError
from .rings import Coef, CoefRing, ZZ

Expvec = tuple[int, ...]

T = TypeVar("T")


def grlex_key(exps: Expvec) -> tuple:
    return (sum(exps), exps)


@dataclass(frozen=True, eq=False)
class MultiPoly:
    ring: CoefRing
    vars: tuple[str, ...]
    terms: Mapping[Expvec, Coef] = field(default_factory=dict)

    # -- construction -------------------------------------------------

    @classmethod
    def make(cls, ring: CoefRing, variables: Sequence[str],
             terms: Mapping[Expvec, Coef] | Iterable[tuple[Expvec, Coef]]) -> "MultiPoly":
        """Normalize coefficients, drop zeros, and validate exponent arity."""
        vs = tuple(variables)
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict[Expvec, Coef] = {}
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != len(vs):
                raise DomainError(f"exponent vector {exps} does not match variables {vs}")
            if any(e < 0 for e in exps):
                raise DomainError(f"negative exponent in {exps}")
            c = ring.normalize(c)
            if exps in out:
                c = ring.add(out[exps], c)
            if ring.is_zero(c):
                out.pop(exps, None)
            else:
                out[exps] = c
        return cls(ring, vs, out)

    @classmethod
    def zero(cls, ring: CoefRing, variables: Sequence[str] = ()) -> "MultiPoly":
        return cls(ring, tuple(variables), {})

    @classmethod
    def constant(cls, value, ring: CoefRing, variables: Sequence[str] = ()) -> "MultiPoly":
        return cls.make(ring, variables, {tuple([0] * len(variables)): value})

    @classmethod
    def variable(cls, name: str, ring: CoefRing, variables: Sequence[str]) -> "MultiPoly":
        vs = tuple(variables)
        if name not in vs:
            raise DomainError(f"variable {name!r} not in {vs}")
        exps = tuple(1 if v == name else 0 for v in vs)
        return cls(ring, vs, {exps: ring.one()})

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Coef:
        z = tuple([0] * len(self.vars))
        return self.terms.get(z, self.ring.zero())

    def total_degree(self) -> int:
        """Degree of the zero polynomial is -1 by convention."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def occurring_vars(self) -> set[str]:
        out: set[str] = set()
        for exps in self.terms:
            for v, e in zip(self.vars, exps):
                if e:
                    out.add(v)
        return out

    # -- equality ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.ring == other.ring and self.vars == other.vars
                and dict(self.terms) == dict(other.terms))

    def __hash__(self):
        return hash((self.ring, self.vars, frozenset(self.terms.items())))

    # -- arithmetic ----------------------------------------------------

    def _check_aligned(self, other: "MultiPoly") -> None:
        if self.ring != other.ring:
            raise AlignmentError(f"ring mismatch: {self.ring} vs {other.ring}")
        if self.vars != other.vars:
            raise AlignmentError(
                f"variable mismatch: {self.vars} vs {other.vars}; use poly_align first")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_aligned(other)
        ring = self.ring
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = ring.add(out.get(exps, 0), c)
            if ring.is_zero(s):
                out.pop(exps, None)
            else:
                out[exps] = s
        return MultiPoly(ring, self.vars, out)

    def __neg__(self) -> "MultiPoly":
        ring = self.ring
        return MultiPoly(ring, self.vars, {e: ring.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_aligned(other)
        ring = self.ring
        out: dict[Expvec, Coef] = {}
        a_items = list(self.terms.items())
        b_items = list(other.terms.items())
        if len(a_items) > len(b_items):
            a_items, b_items = b_items, a_items
        for e1, c1 in a_items:
            for e2, c2 in b_items:
                key = tuple(x + y for x, y in zip(e1, e2))
                s = ring.add(out.get(key, 0), ring.mul(c1, c2))
                if ring.is_zero(s):
                    out.pop(key, None)
                else:
                    out[key] = s
        return MultiPoly(ring, self.vars, out)

    def scale(self, c) -> "MultiPoly":
        ring = self.ring
        c = ring.normalize(c)
        if ring.is_zero(c):
            return MultiPoly.zero(ring, self.vars)
        out = {}
        for exps, v in self.terms.items():
            s = ring.mul(v, c)
            if not ring.is_zero(s):
                out[exps] = s
        return MultiPoly(ring, self.vars, out)

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"polynomial exponent must be a non-negative integer, got {n!r}")
        result = MultiPoly.constant(1, self.ring, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divide_exact_int(self, k: int) -> "MultiPoly":
        """Divide every coefficient by the integer k; must be exact."""
        ring = self.ring
        out = {}
        for exps, c in self.terms.items():
            out[exps] = ring.divide(c, ring.normalize(k))
        return MultiPoly(ring, self.vars, out)

    # -- substitution and evaluation ------------------------------------

    def substitute(self, assignment: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Ring-homomorphic substitution; every occurring variable needs an image."""
        occurring = self.occurring_vars()
        missing = occurring - set(assignment)
        if missing:
            raise SubstitutionError(f"no image for variable(s) {sorted(missing)}")
        images = {v: assignment[v] for v in occurring}
        if images:
            first = next(iter(images.values()))
            for g in images.values():
                if g.ring != first.ring or g.vars != first.vars:
                    raise AlignmentError("substitution images disagree on ring/variables")
            target_ring, target_vars = first.ring, first.vars
        else:
            target_ring, target_vars = self.ring, self.vars
        result = MultiPoly.zero(target_ring, target_vars)
        power_cache: dict[tuple[str, int], MultiPoly] = {}

        def img_pow(v: str, e: int) -> MultiPoly:
            key = (v, e)
            if key not in power_cache:
                power_cache[key] = images[v] ** e
            return power_cache[key]

        for exps, c in self.terms.items():
            term = MultiPoly.constant(c, target_ring, target_vars)
            for v, e in zip(self.vars, exps):
                if e:
                    term = term * img_pow(v, e)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Coef]) -> Coef:
        """Numeric evaluation in the coefficient ring."""
        ring = self.ring
        missing = self.occurring_vars() - set(values)
        if missing:
            raise SubstitutionError(f"no value for variable(s) {sorted(missing)}")
        vals = {v: ring.normalize(c) for v, c in values.items() if v in self.vars}
        acc = ring.zero()
        for exps, c in self.terms.items():
            t = c
            for v, e in zip(self.vars, exps):
                if e:
                    t = ring.mul(t, pow(vals[v], e, ring.modulus) if ring.modulus
                                 else vals[v] ** e)
            acc = ring.add(acc, t)
        return acc

    def evaluate_generic(self, values: Mapping[str, T], *, add: Callable[[T, T], T],
                         mul: Callable[[T, T], T], one: T,
                         from_coef: Callable[[Coef], T]) -> T:
        """Evaluate in an arbitrary commutative ring given its operations."""
        missing = self.occurring_vars() - set(values)
        if missing:
            raise SubstitutionError(f"no value for variable(s) {sorted(missing)}")
        acc: T | None = None
        for exps, c in self.terms.items():
            t = from_coef(c)
            for v, e in zip(self.vars, exps):
                for _ in range(e):
                    t = mul(t, values[v])
            acc = t if acc is None else add(acc, t)
        return from_coef(0) if acc is None else acc

    # -- ordering helpers -----------------------------------------------

    def sorted_terms(self) -> list[tuple[Expvec, Coef]]:
        """Terms in grlex-descending order."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def leading_term(self) -> tuple[Expvec, Coef]:
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        exps = max(self.terms, key=grlex_key)
        return exps, self.terms[exps]

    # -- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "vars": list(self.vars),
            "terms": [{"exps": list(e), "coef": self.ring.coef_to_str(c)}
                      for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MultiPoly":
        ring = CoefRing.from_json(obj["ring"])
        return cls.make(ring, obj["vars"],
                        [(tuple(t["exps"]), ring.coef_from_str(t["coef"])) for t in obj["terms"]])

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "MultiPoly":
        return cls.from_json_obj(json.loads(s))

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for i, (exps, c) in enumerate(self.sorted_terms()):
            factors = [f"{v}^{e}" if e > 1 else v
                       for v, e in zip(self.vars, exps) if e]
            negative = (isinstance(c, (int, Fraction)) and c < 0
                        and self.ring.modulus is None)
            mag = -c if negative else c
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if i == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"MultiPoly({self.ring}, {str(self)!r})"


def poly_align(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Embed both polynomials into the lexicographically merged variable list."""
    if a.ring != b.ring:
        raise AlignmentError(f"ring mismatch: {a.ring} vs {b.ring}")
    merged = tuple(sorted(set(a.vars) | set(b.vars)))
    return poly_embed(a, merged), poly_embed(b, merged)


def poly_embed(f: MultiPoly, variables: Sequence[str]) -> MultiPoly:
    """Reindex f onto a superset variable list (order may differ)."""
    vs = tuple(variables)
    missing = f.occurring_vars() - set(vs)
    if missing:
        raise AlignmentError(f"target variables {vs} do not cover {sorted(missing)}")
    pos = {v: i for i, v in enumerate(vs)}
    out: dict[Expvec, Coef] = {}
    for exps, c in f.terms.items():
        new = [0] * len(vs)
        for v, e in zip(f.vars, exps):
            if e:
                new[pos[v]] = e
        out[tuple(new)] = c
    return MultiPoly(f.ring, vs, out)


def poly_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a + b


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def poly_substitute(f: MultiPoly, assignment: Mapping[str, MultiPoly]) -> MultiPoly:
    return f.substitute(assignment)


@dataclass(frozen=True)
class SeriesTrunc:
    """Power series in t truncated at order N: coeffs[k] is the t^k coefficient."""

    N: int
    coeffs: tuple[MultiPoly, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.N + 1:
            raise DomainError(f"need exactly {self.N + 1} coefficients, got {len(self.coeffs)}")
        first = self.coeffs[0]
        for c in self.coeffs:
            if c.ring != first.ring or c.vars != first.vars:
                raise AlignmentError("series coefficients disagree on ring/variables")

    @classmethod
    def one_plus_linear(cls, m: MultiPoly, N: int) -> "SeriesTrunc":
        one = MultiPoly.constant(1, m.ring, m.vars)
        zero = MultiPoly.zero(m.ring, m.vars)
        return cls(N, tuple([one, m] + [zero] * (N - 1)))

    def __mul__(self, other: "SeriesTrunc") -> "SeriesTrunc":
        if self.N != other.N:
            raise AlignmentError("series truncation orders differ")
        out = []
        for k in range(self.N + 1):
            acc = MultiPoly.zero(self.coeffs[0].ring, self.coeffs[0].vars)
            for i in range(k + 1):
                if not self.coeffs[i].is_zero() and not other.coeffs[k - i].is_zero():
                    acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return SeriesTrunc(self.N, tuple(out))


def series_product_coefficient(factors: Sequence[MultiPoly], j: int, N: int | None = None) -> MultiPoly:
    """Coefficient of t^j in prod (1 + m_k t), all arithmetic truncated at t^j.

    Each factor is given by its linear coefficient m_k, which must be a
    single-term polynomial (a monomial).
    """
    if not factors:
        raise DomainError("need at least one factor")
    if N is None:
        N = j
    if j > N:
        raise DomainError(f"requested degree {j} exceeds truncation order {N}")
    ring, vs = factors[0].ring, factors[0].vars
    for m in factors:
        if len(m.terms) != 1:
            raise DomainError("each factor must be 1 + (monomial)*t")
        if m.ring != ring or m.vars != vs:
            raise AlignmentError("factors disagree on ring/variables")
    coeffs = [MultiPoly.zero(ring, vs) for _ in range(j + 1)]
    coeffs[0] = MultiPoly.constant(1, ring, vs)
    for m in factors:
        # multiply running product by (1 + m t), truncating at degree j
        for k in range(j, 0, -1):
            if not coeffs[k - 1].is_zero():
                coeffs[k] = coeffs[k] + coeffs[k - 1] * m
    return coeffs[j]
