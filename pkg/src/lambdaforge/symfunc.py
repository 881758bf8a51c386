"""Symmetric polynomial recognition and reduction to elementary symmetric bases.

The reduction uses the classical leading-term subtraction algorithm under
grlex, one symmetry block at a time; variables outside the active block ride
along as inert coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import DomainError, ResourceLimitError, SymmetryError
from .poly import Expvec, MultiPoly, grlex_key, poly_embed
from .rings import CoefRing, ZZ

MAX_BLOCK_VARS = 12
MAX_REDUCTION_DEGREE = 12


@dataclass(frozen=True)
class ElemSymExpr:
    """A polynomial in elementary symmetric generators, one name block per
    symmetry block of the input (e.g. e1..em and f1..fn)."""

    blocks: tuple[tuple[str, ...], ...]      # original variable blocks
    prefixes: tuple[str, ...]                # output name prefix per block
    poly: MultiPoly

    def generator_names(self, block_index: int) -> tuple[str, ...]:
        pref = self.prefixes[block_index]
        m = len(self.blocks[block_index])
        return tuple(f"{pref}{k}" for k in range(1, m + 1))


def elementary_symmetric(k: int, variables: Sequence[str], ring: CoefRing = ZZ) -> MultiPoly:
    """e_k in the given variables; e_0 = 1, and e_k = 0 for k > #vars."""
    vs = tuple(variables)
    if k < 0:
        raise DomainError(f"negative index {k}")
    if k == 0:
        return MultiPoly.constant(1, ring, vs)
    if k > len(vs):
        return MultiPoly.zero(ring, vs)
    terms = {}
    for subset in combinations(range(len(vs)), k):
        exps = [0] * len(vs)
        for i in subset:
            exps[i] = 1
        terms[tuple(exps)] = ring.one()
    return MultiPoly(ring, vs, terms)


def _swap_exponents(f: MultiPoly, i: int, j: int) -> MultiPoly:
    out = {}
    for exps, c in f.terms.items():
        e = list(exps)
        e[i], e[j] = e[j], e[i]
        out[tuple(e)] = c
    return MultiPoly(f.ring, f.vars, out)


def symmetry_witness(f: MultiPoly, blocks: Sequence[Sequence[str]]) -> tuple[str, str] | None:
    """A violating adjacent transposition, or None if f is block-symmetric.

    Adjacent transpositions generate the full symmetric group of each block.
    """
    _check_blocks_partition(f, blocks)
    pos = {v: i for i, v in enumerate(f.vars)}
    for block in blocks:
        for a, b in zip(block, block[1:]):
            if _swap_exponents(f, pos[a], pos[b]) != f:
                return (a, b)
    return None


def is_symmetric(f: MultiPoly, blocks: Sequence[Sequence[str]]) -> bool:
    return symmetry_witness(f, blocks) is None


def _check_blocks_partition(f: MultiPoly, blocks: Sequence[Sequence[str]]) -> None:
    flat = [v for block in blocks for v in block]
    if len(flat) != len(set(flat)) or set(flat) != set(f.vars):
        raise DomainError(f"blocks {blocks} do not partition variables {f.vars}")


def _eliminate_block(g: MultiPoly, block: Sequence[str], prefix: str,
                     trace: list[Expvec] | None = None) -> MultiPoly:
    """Rewrite g, symmetric in `block`, as a polynomial in e-generators
    named prefix1..prefixm, leaving all other variables untouched."""
    m = len(block)
    sym_names = tuple(f"{prefix}{k}" for k in range(1, m + 1))
    clash = set(sym_names) & set(g.vars)
    if clash:
        raise DomainError(f"generator names {sorted(clash)} collide with input variables")
    inert = tuple(v for v in g.vars if v not in block)
    work_vars = inert + tuple(block)
    out_vars = inert + sym_names
    g = poly_embed(g, work_vars)
    ring = g.ring
    n_inert = len(inert)

    esym_cache = {k: poly_embed(elementary_symmetric(k, block, ring), work_vars)
                  for k in range(1, m + 1)}
    power_cache: dict[tuple[int, int], MultiPoly] = {}

    def esym_power(k: int, e: int) -> MultiPoly:
        key = (k, e)
        if key not in power_cache:
            power_cache[key] = esym_cache[k] ** e
        return power_cache[key]

    result = MultiPoly.zero(ring, out_vars)
    prev_lead: Expvec | None = None
    while True:
        lead: Expvec | None = None
        for exps in g.terms:
            be = exps[n_inert:]
            if any(be) and (lead is None or grlex_key(be) > grlex_key(lead)):
                lead = be
        if lead is None:
            break
        if prev_lead is not None and not grlex_key(lead) < grlex_key(prev_lead):
            raise DomainError("leading term failed to decrease; reduction bug")
        prev_lead = lead
        if trace is not None:
            trace.append(lead)
        if any(lead[i] < lead[i + 1] for i in range(m - 1)):
            raise SymmetryError(
                f"input is not symmetric in block {tuple(block)}: leading exponent {lead}",
                witness=_find_witness(g, block))
        # e-exponents from the partition shape of the leading exponent
        e_exps = [lead[i] - (lead[i + 1] if i + 1 < m else 0) for i in range(m)]
        coef_terms = {exps[:n_inert]: c for exps, c in g.terms.items()
                      if exps[n_inert:] == lead}
        coef_inert = MultiPoly(ring, inert, dict(coef_terms))

        sub = poly_embed(coef_inert, work_vars)
        mono_exps = [0] * n_inert + [0] * m
        for k, e in enumerate(e_exps, start=1):
            if e:
                sub = sub * esym_power(k, e)
                mono_exps[n_inert + k - 1] = e
        g = g - sub
        result = result + poly_embed(coef_inert, out_vars) * MultiPoly(
            ring, out_vars, {tuple(mono_exps): ring.one()})
    return result + poly_embed(MultiPoly(ring, inert, {e[:n_inert]: c for e, c in g.terms.items()}),
                               out_vars)


def _find_witness(g: MultiPoly, block: Sequence[str]) -> tuple[str, str] | None:
    pos = {v: i for i, v in enumerate(g.vars)}
    for a, b in zip(block, list(block)[1:]):
        if _swap_exponents(g, pos[a], pos[b]) != g:
            return (a, b)
    return None


def to_elementary(f: MultiPoly, blocks: Sequence[Sequence[str]],
                  prefixes: Sequence[str] | None = None,
                  trace: list[list[Expvec]] | None = None) -> ElemSymExpr:
    """Express a block-symmetric polynomial in elementary symmetric generators.

    Substituting e_k -> elementary_symmetric(k, block) back into the result
    reproduces f exactly; tests rely on that round trip.
    """
    _check_blocks_partition(f, blocks)
    if prefixes is None:
        prefixes = ("e", "f", "g", "h")[:len(blocks)]
    if len(prefixes) != len(blocks):
        raise DomainError("need one generator-name prefix per block")
    for block in blocks:
        if len(block) > MAX_BLOCK_VARS:
            raise ResourceLimitError(
                f"block of {len(block)} variables exceeds limit {MAX_BLOCK_VARS}")
    if f.total_degree() > MAX_REDUCTION_DEGREE:
        raise ResourceLimitError(
            f"degree {f.total_degree()} exceeds reduction limit {MAX_REDUCTION_DEGREE}")
    w = symmetry_witness(f, blocks)
    if w is not None:
        raise SymmetryError(f"not symmetric: swapping {w[0]} and {w[1]} changes the input",
                            witness=w)
    g = f
    for block, prefix in zip(blocks, prefixes):
        block_trace: list[Expvec] | None = [] if trace is not None else None
        g = _eliminate_block(g, block, prefix, trace=block_trace)
        if trace is not None:
            trace.append(block_trace)
    return ElemSymExpr(tuple(tuple(b) for b in blocks), tuple(prefixes), g)


def expand_elementary(expr: ElemSymExpr, ring: CoefRing | None = None) -> MultiPoly:
    """Substitute concrete elementary symmetric polynomials back in (oracle)."""
    poly = expr.poly
    ring = ring or poly.ring
    gen_names = {name for bi in range(len(expr.blocks))
                 for name in expr.generator_names(bi)}
    inert = sorted(v for v in poly.occurring_vars() if v not in gen_names)
    all_vars = tuple(sorted(set(v for block in expr.blocks for v in block) | set(inert)))
    assignment: dict[str, MultiPoly] = {}
    for bi, block in enumerate(expr.blocks):
        for k, name in enumerate(expr.generator_names(bi), start=1):
            assignment[name] = poly_embed(elementary_symmetric(k, block, ring), all_vars)
    for v in inert:
        assignment[v] = MultiPoly.variable(v, ring, all_vars)
    return poly.substitute(assignment)


def newton_power_sum(n: int, m: int) -> MultiPoly:
    """Power sum p_n in e_1..e_n over Z via the Newton recursion.

    e_k is treated as 0 for k > m, so for m < n the result is the truncated
    power sum for m underlying variables.
    """
    if n < 1:
        raise DomainError(f"index must be >= 1, got {n}")
    width = min(n, m) if m >= 1 else 0
    if width == 0:
        raise DomainError("need at least one underlying variable")
    vs = tuple(f"e{k}" for k in range(1, n + 1))
    e = {k: (MultiPoly.variable(f"e{k}", ZZ, vs) if k <= m
             else MultiPoly.zero(ZZ, vs)) for k in range(1, n + 1)}
    p: dict[int, MultiPoly] = {}
    for i in range(1, n + 1):
        acc = MultiPoly.zero(ZZ, vs)
        for k in range(1, i):
            term = e[k] * p[i - k]
            acc = acc + (term if (k - 1) % 2 == 0 else -term)
        last = e[i].scale(i)
        acc = acc + (last if (i - 1) % 2 == 0 else -last)
        p[i] = acc
    return p[n]
