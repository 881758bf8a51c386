"""Universal lambda-ring structure polynomials and the truncated big Witt ring.

The multiplication law P_j is the t^j coefficient of prod_{a,b<=j}(1+x_a y_b t)
rewritten in elementary symmetric generators e (of the x block) and f (of the
y block).  The composition law P_{j,i} is the t^j coefficient of the product of
(1 + x_S t) over i-element subsets S of {1..ij}, rewritten in e_1..e_{ij}.
Adams operations come from the Newton power-sum recursion with e_k -> l_k.

Both families are memoized in memory and on disk (lambda_tables/).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations

from . import tables
from .errors import DomainError, ResourceLimitError
from .poly import MultiPoly, poly_embed, series_product_coefficient
from .rings import Coef, CoefRing, ZZ
from .symfunc import newton_power_sum, to_elementary

MAX_MULT_DEGREE = 6
MAX_COMP_PRODUCT = 9

_lock = threading.Lock()
_mult_cache: dict[int, "UniversalMultPoly"] = {}
_comp_cache: dict[tuple[int, int], "UniversalCompPoly"] = {}
_adams_cache: dict[int, MultiPoly] = {}


def e_weight(exps, prefix_count: int, offset: int = 0) -> int:
    """Weight of a monomial where the k-th generator weighs k."""
    return sum((k + 1) * e for k, e in enumerate(exps[offset:offset + prefix_count]))


@dataclass(frozen=True)
class UniversalMultPoly:
    j: int
    poly: MultiPoly  # in e1..ej, f1..fj over Z

    def check_bidegree(self) -> None:
        j = self.j
        for exps in self.poly.terms:
            ew = e_weight(exps, j, 0)
            fw = e_weight(exps, j, j)
            if ew != j or fw != j:
                raise DomainError(f"P_{j} term {exps} has bidegree ({ew},{fw}) != ({j},{j})")


@dataclass(frozen=True)
class UniversalCompPoly:
    j: int
    i: int
    poly: MultiPoly  # in e1..e_{ij} over Z

    def check_weight_bound(self) -> None:
        bound = self.i * self.j
        for exps in self.poly.terms:
            w = e_weight(exps, bound, 0)
            if w > bound:
                raise DomainError(
                    f"P_{{{self.j},{self.i}}} term {exps} has weight {w} > {bound}")


def mult_polynomial(j: int) -> UniversalMultPoly:
    """The universal multiplication polynomial P_j."""
    if j < 1:
        raise DomainError(f"degree must be >= 1, got {j}")
    if j > MAX_MULT_DEGREE:
        raise ResourceLimitError(f"degree {j} exceeds limit {MAX_MULT_DEGREE}")
    with _lock:
        if j in _mult_cache:
            return _mult_cache[j]
    entry = tables.load_entry("lambda_tables", f"P_mult_{j}")
    if entry is not None and entry["meta"].get("j") == j:
        result = UniversalMultPoly(j, MultiPoly.from_json_obj(entry["poly"]))
    else:
        result = _compute_mult(j)
        tables.store_entry("lambda_tables", f"P_mult_{j}", {"j": j},
                           {"poly": result.poly.to_json_obj()})
    result.check_bidegree()
    with _lock:
        _mult_cache[j] = result
    return result


def _compute_mult(j: int) -> UniversalMultPoly:
    xs = tuple(f"x{a}" for a in range(1, j + 1))
    ys = tuple(f"y{b}" for b in range(1, j + 1))
    vs = xs + ys
    factors = []
    for a in range(j):
        for b in range(j):
            exps = [0] * (2 * j)
            exps[a] = 1
            exps[j + b] = 1
            factors.append(MultiPoly(ZZ, vs, {tuple(exps): 1}))
    coeff = series_product_coefficient(factors, j)
    expr = to_elementary(coeff, [xs, ys], prefixes=("e", "f"))
    poly = _pad_generators(expr.poly, [("e", j), ("f", j)])
    return UniversalMultPoly(j, poly)


def comp_polynomial(j: int, i: int) -> UniversalCompPoly:
    """The universal composition polynomial P_{j,i}.

    The index tuples a_1 < ... < a_i range over i-element subsets of
    {1..ij}, the convention under which P_{1,i} = e_i.
    """
    if j < 1 or i < 1:
        raise DomainError(f"indices must be >= 1, got j={j}, i={i}")
    if i * j > MAX_COMP_PRODUCT:
        raise ResourceLimitError(f"i*j = {i * j} exceeds limit {MAX_COMP_PRODUCT}")
    key = (j, i)
    with _lock:
        if key in _comp_cache:
            return _comp_cache[key]
    entry = tables.load_entry("lambda_tables", f"P_comp_{j}_{i}")
    if entry is not None and entry["meta"].get("j") == j and entry["meta"].get("i") == i:
        result = UniversalCompPoly(j, i, MultiPoly.from_json_obj(entry["poly"]))
    else:
        result = _compute_comp(j, i)
        tables.store_entry("lambda_tables", f"P_comp_{j}_{i}", {"j": j, "i": i},
                           {"poly": result.poly.to_json_obj()})
    result.check_weight_bound()
    with _lock:
        _comp_cache[key] = result
    return result


def _compute_comp(j: int, i: int) -> UniversalCompPoly:
    n = i * j
    xs = tuple(f"x{a}" for a in range(1, n + 1))
    factors = []
    for subset in combinations(range(n), i):
        exps = [0] * n
        for a in subset:
            exps[a] = 1
        factors.append(MultiPoly(ZZ, xs, {tuple(exps): 1}))
    coeff = series_product_coefficient(factors, j)
    expr = to_elementary(coeff, [xs], prefixes=("e",))
    poly = _pad_generators(expr.poly, [("e", n)])
    return UniversalCompPoly(j, i, poly)


def _pad_generators(poly: MultiPoly, spec: list[tuple[str, int]]) -> MultiPoly:
    """Embed into the full generator list e1..em (and f1..fn) in order."""
    names = tuple(f"{pref}{k}" for pref, count in spec for k in range(1, count + 1))
    return poly_embed(poly, names)


def adams_polynomial(n: int) -> MultiPoly:
    """psi^n as an integer polynomial in l1..ln (l_k standing for lambda^k)."""
    if n < 1:
        raise DomainError(f"index must be >= 1, got {n}")
    with _lock:
        if n in _adams_cache:
            return _adams_cache[n]
    p = newton_power_sum(n, n)
    result = poly_embed(
        MultiPoly(p.ring, tuple(v.replace("e", "l") for v in p.vars), dict(p.terms)),
        tuple(f"l{k}" for k in range(1, n + 1)))
    with _lock:
        _adams_cache[n] = result
    return result


# -- the weight filtration of the free lambda-ring ---------------------------


@dataclass(frozen=True)
class LambdaMonomial:
    """A monomial lambda^{i1}(x_{s1})^{e1} ... in the free lambda-ring.

    Factors are kept sorted by (generator, index); lambda^0 factors are
    absorbed into the unit at construction.
    """

    factors: tuple[tuple[str, int, int], ...]  # (generator, lambda index >= 1, exponent >= 1)

    @classmethod
    def make(cls, factors) -> "LambdaMonomial":
        merged: dict[tuple[str, int], int] = {}
        for gen, idx, exp in factors:
            if idx < 0 or exp < 0:
                raise DomainError(f"bad factor ({gen}, {idx}, {exp})")
            if idx == 0 or exp == 0:
                continue  # lambda^0 = 1
            merged[(gen, idx)] = merged.get((gen, idx), 0) + exp
        return cls(tuple(sorted((g, i, e) for (g, i), e in merged.items())))

    def weight(self) -> int:
        return sum(i * e for _, i, e in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for gen, idx, exp in self.factors:
            base = gen if idx == 1 else f"l{idx}({gen})"
            parts.append(base if exp == 1 else f"{base}^{exp}")
        return "*".join(parts)


def lambda_weight(m: LambdaMonomial) -> int:
    return m.weight()


def _one_generator_monomials(gen: str, weight: int) -> list[tuple[tuple[str, int, int], ...]]:
    """Monomials in lambda^i(gen) of weight exactly `weight` = partitions of it."""

    def parts(remaining: int, max_part: int):
        if remaining == 0:
            yield []
            return
        for part in range(min(remaining, max_part), 0, -1):
            for rest in parts(remaining - part, part):
                yield [part] + rest

    out = []
    for partition in parts(weight, weight if weight else 1):
        counts: dict[int, int] = {}
        for part in partition:
            counts[part] = counts.get(part, 0) + 1
        out.append(tuple(sorted((gen, i, e) for i, e in counts.items())))
    return out


def filtration_basis(generators: int, bound: int) -> list[LambdaMonomial]:
    """All lambda-monomials on x1..xm of weight <= bound, in canonical order
    (by weight, then by string form)."""
    if generators < 1 or bound < 0:
        raise DomainError(f"bad arguments m={generators}, i={bound}")
    gens = [f"x{s}" for s in range(1, generators + 1)]
    by_weight: list[list[LambdaMonomial]] = [[] for _ in range(bound + 1)]
    partial: list[list[tuple[int, tuple]]] = [[(0, ())]]
    for gen in gens:
        new: list[tuple[int, tuple]] = []
        for w0, factors in partial[-1]:
            for w in range(0, bound - w0 + 1):
                for extra in _one_generator_monomials(gen, w):
                    new.append((w0 + w, factors + extra))
        partial.append(new)
    for w, factors in partial[-1]:
        by_weight[w].append(LambdaMonomial.make(factors))
    out: list[LambdaMonomial] = []
    for w in range(bound + 1):
        out.extend(sorted(by_weight[w], key=str))
    return out


def filtration_count_exact(generators: int, weight: int) -> int:
    """Number of basis monomials of weight exactly `weight`."""
    return sum(1 for m in filtration_basis(generators, weight) if m.weight() == weight)


# -- truncated big Witt vectors ----------------------------------------------


@dataclass(frozen=True)
class BigWittElement:
    """A truncated big Witt vector: the series 1 + a1 t + ... + aN t^N."""

    N: int
    ring: CoefRing
    coeffs: tuple[Coef, ...]

    @classmethod
    def make(cls, ring: CoefRing, coeffs, N: int | None = None) -> "BigWittElement":
        cs = [ring.normalize(c) for c in coeffs]
        if N is None:
            N = len(cs)
        if len(cs) != N:
            raise DomainError(f"need exactly {N} coefficients, got {len(cs)}")
        if N < 1:
            raise DomainError("truncation order must be >= 1")
        return cls(N, ring, tuple(cs))

    @classmethod
    def zero(cls, ring: CoefRing, N: int) -> "BigWittElement":
        return cls.make(ring, [0] * N)

    @classmethod
    def one(cls, ring: CoefRing, N: int) -> "BigWittElement":
        return cls.make(ring, [1] + [0] * (N - 1))

    def _check(self, other: "BigWittElement") -> None:
        if self.N != other.N or self.ring != other.ring:
            raise DomainError("big Witt elements disagree on truncation or ring")

    def __str__(self) -> str:
        return "[" + ",".join(self.ring.coef_to_str(c) for c in self.coeffs) + "]"


def bigwitt_add(u: BigWittElement, v: BigWittElement) -> BigWittElement:
    """Witt addition = product of the underlying truncated series."""
    u._check(v)
    ring, N = u.ring, u.N
    a = (ring.one(),) + u.coeffs
    b = (ring.one(),) + v.coeffs
    out = []
    for k in range(1, N + 1):
        acc = ring.zero()
        for i in range(0, k + 1):
            acc = ring.add(acc, ring.mul(a[i], b[k - i]))
        out.append(acc)
    return BigWittElement.make(ring, out)


def bigwitt_neg(u: BigWittElement) -> BigWittElement:
    """Witt negation: coefficients of the inverse series."""
    ring, N = u.ring, u.N
    inv = [ring.one()]
    for k in range(1, N + 1):
        acc = ring.zero()
        for i in range(1, k + 1):
            acc = ring.add(acc, ring.mul(u.coeffs[i - 1], inv[k - i]))
        inv.append(ring.neg(acc))
    return BigWittElement.make(ring, inv[1:])


def bigwitt_mul(u: BigWittElement, v: BigWittElement) -> BigWittElement:
    """Witt multiplication via the universal polynomials P_n."""
    u._check(v)
    ring, N = u.ring, u.N
    if N > MAX_MULT_DEGREE:
        raise ResourceLimitError(
            f"truncation {N} exceeds the polynomial table limit {MAX_MULT_DEGREE}")
    out = []
    for n in range(1, N + 1):
        P = mult_polynomial(n).poly
        values = {f"e{k}": u.coeffs[k - 1] for k in range(1, n + 1)}
        values.update({f"f{k}": v.coeffs[k - 1] for k in range(1, n + 1)})
        out.append(P.evaluate(values))
    return BigWittElement.make(ring, out)


def bigwitt_lambda(n: int, u: BigWittElement, out_len: int | None = None) -> BigWittElement:
    """lambda^n on the truncated big Witt ring via P_{j,n}.

    The j-th output coefficient needs u_1..u_{jn}, so at truncation N the
    result has floor(N/n) coefficients unless a shorter out_len is given.
    """
    if n < 1:
        raise DomainError(f"lambda index must be >= 1, got {n}")
    if n == 1:
        return u if out_len is None else BigWittElement.make(u.ring, u.coeffs[:out_len])
    available = u.N // n
    if out_len is None:
        out_len = available
    if out_len > available:
        raise DomainError(
            f"insufficient truncation: coefficient {out_len} needs {out_len * n} inputs, have {u.N}")
    if out_len < 1:
        raise DomainError(f"lambda^{n} needs truncation >= {n}, have {u.N}")
    ring = u.ring
    out = []
    for j in range(1, out_len + 1):
        P = comp_polynomial(j, n).poly
        values = {f"e{k}": u.coeffs[k - 1] for k in range(1, j * n + 1)}
        out.append(P.evaluate(values))
    return BigWittElement.make(ring, out)


def bigwitt_ghost(u: BigWittElement) -> list[Coef]:
    """Ghost components gh_n = p_n(e -> coefficients), n = 1..N.

    Only defined over torsion-free rings (Z, Q) where they are injective.
    """
    if u.ring.kind not in ("integers", "rationals"):
        raise DomainError(f"ghost components need a torsion-free ring, got {u.ring}")
    out = []
    for n in range(1, u.N + 1):
        p = newton_power_sum(n, u.N)
        values = {f"e{k}": (u.coeffs[k - 1] if k <= u.N else 0) for k in range(1, n + 1)}
        out.append(p.evaluate(values))
    return out


def bigwitt_from_ghosts(ghosts, ring: CoefRing) -> BigWittElement:
    """Invert the ghost map: e_k = (1/k) sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i.

    Works over Q; over Z the division must come out exact or the input was
    not a ghost vector of an integral element.
    """
    if ring.kind not in ("integers", "rationals"):
        raise DomainError(f"ghost descent needs a torsion-free ring, got {ring}")
    from fractions import Fraction
    gs = [Fraction(ring.normalize(g)) for g in ghosts]
    es: list[Fraction] = [Fraction(1)]  # e_0
    for k in range(1, len(gs) + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            term = es[k - i] * gs[i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        es.append(acc / k)
    if ring.kind == "integers" and any(e.denominator != 1 for e in es):
        raise DomainError("ghost vector does not descend to integral coefficients")
    return BigWittElement.make(ring, [ring.normalize(e) for e in es[1:]])


def bigwitt_adams(n: int, u: BigWittElement) -> Coef:
    """psi^n evaluated on a big Witt vector (equals the n-th ghost for n <= N)."""
    if n < 1 or n > u.N:
        raise DomainError(f"adams index {n} out of range 1..{u.N}")
    psi = adams_polynomial(n)
    values = {f"l{k}": u.coeffs[k - 1] for k in range(1, n + 1)}
    return psi.evaluate(values)
