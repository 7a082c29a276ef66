"""Combinatorics of layering vectors for k<x1..xn>/((x1..xn)^3 + (S)).

Layerings of the local algebra are plain triples ``(d0, d1, d2)``: d0 is the
top layer M/rad M and d2 = dim rad^2 M.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

log = logging.getLogger(__name__)

DimVec3 = tuple[int, int, int]


class EmptyStratumError(ValueError):
    """No module has the requested radical layering."""


class DecompositionError(ValueError):
    """The pair is not a nonnegative combination of the root generators."""


# -- dominance order -------------------------------------------------------------

def _as_layers(u) -> list[tuple[int, ...]]:
    layers = getattr(u, "layers", None)
    if layers is not None:
        return [tuple(x) for x in layers]
    return [(int(x),) if not isinstance(x, (tuple, list)) else tuple(x) for x in u]


def dominance_leq(u, v) -> bool:
    """u <= v iff every prefix sum of u is <= that of v, vertex by vertex.

    Accepts plain integer sequences (one vertex) or LayeringVector values.
    """
    lu, lv = _as_layers(u), _as_layers(v)
    if len(lu) != len(lv) or any(len(a) != len(b) for a, b in zip(lu, lv)):
        raise ValueError(f"cannot compare layerings of different shapes: {u} vs {v}")
    su = [0] * len(lu[0]) if lu else []
    sv = list(su)
    for a, b in zip(lu, lv):
        su = [s + x for s, x in zip(su, a)]
        sv = [s + x for s, x in zip(sv, b)]
        if any(x > y for x, y in zip(su, sv)):
            return False
    return True


def dominance_comparable(u, v) -> bool:
    return dominance_leq(u, v) or dominance_leq(v, u)


@dataclass(frozen=True)
class ThetaPair:
    """(radical layering, socle layering) with the product order."""

    rad: tuple[int, ...]
    soc: tuple[int, ...]

    def __post_init__(self):
        if sum(self.rad) != sum(self.soc):
            raise ValueError("radical and socle layerings must have equal totals")

    def __le__(self, other: "ThetaPair") -> bool:
        return dominance_leq(self.rad, other.rad) and dominance_leq(self.soc, other.soc)

    def comparable(self, other: "ThetaPair") -> bool:
        return self <= other or other <= self


def dominance_minima(values: Sequence) -> list:
    """Minimal elements (deduplicated, in first-seen order)."""
    distinct = list(dict.fromkeys(tuple(v) for v in values))
    return [
        u for u in distinct if not any(w != u and dominance_leq(w, u) for w in distinct)
    ]


# -- existence -------------------------------------------------------------------

def rad_nonempty(n: int, d: Sequence[int]) -> bool:
    """Some module has radical layering d (equivalently, by duality, socle
    layering d) iff d1 <= n*d0 and n*d2 <= (n^2-1)*d1."""
    d0, d1, d2 = d
    return d1 <= n * d0 and n * d2 <= (n * n - 1) * d1


soc_nonempty = rad_nonempty


def violated_inequality(n: int, d: Sequence[int]) -> str | None:
    """Human-readable description of the first failing inequality, if any."""
    d0, d1, d2 = d
    if d1 > n * d0:
        return f"d1 ≤ n·d0 violated ({d1} > {n * d0})"
    if n * d2 > (n * n - 1) * d1:
        return f"n·d2 ≤ (n²-1)·d1 violated ({n * d2} > {(n * n - 1) * d1})"
    return None


def _require_nonempty(n: int, d: Sequence[int]):
    if not rad_nonempty(n, d):
        raise EmptyStratumError(f"no module with radical layering {tuple(d)} for n={n}: {violated_inequality(n, d)}")


# -- Kronecker roots -------------------------------------------------------------

def tits_q(n: int, d1: int, d2: int) -> int:
    return d1 * d1 + d2 * d2 - n * d1 * d2


def root_generators(n: int) -> list[tuple[int, int]]:
    """(1,0), ..., (1,n-1), (2,2n-1), ..., (n,n^2-1)."""
    return [(1, j) for j in range(n)] + [(k, k * n - 1) for k in range(2, n + 1)]


def _pair_ok(n: int, d1: int, d2: int) -> bool:
    return d1 >= 0 and d2 >= 0 and n * d2 <= (n * n - 1) * d1


def root_decompose(n: int, d1: int, d2: int) -> list[tuple[int, int]]:
    """Write (d1, d2) as a sum of root generators, greedily: peel off
    (n, n^2-1) while d2 > n^2-1, then (1, 0) while d1 > n, then finish the
    small case.  Falls back to exhaustive search if a step breaks the
    inequality (it should not)."""
    if not _pair_ok(n, d1, d2):
        raise DecompositionError(f"({d1},{d2}) violates n*d2 <= (n^2-1)*d1 for n={n}")
    out: list[tuple[int, int]] = []
    a, b = d1, d2
    try:
        while b > n * n - 1:
            a, b = a - n, b - (n * n - 1)
            out.append((n, n * n - 1))
            _step_check(n, a, b)
        while a > n:
            a -= 1
            out.append((1, 0))
            _step_check(n, a, b)
        while a > 0:
            if a == 1 or b == n * a - 1:
                out.append((a, b))
                a, b = 0, 0
            elif b >= n:
                out.append((1, n - 1))
                a, b = a - 1, b - (n - 1)
                _step_check(n, a, b)
            else:
                out.append((1, b))
                out.extend([(1, 0)] * (a - 1))
                a, b = 0, 0
        if b != 0:
            raise AssertionError("leftover d2 with d1 = 0")
    except AssertionError as exc:
        log.warning("greedy root decomposition of (%d,%d) failed (%s); using exhaustive search", d1, d2, exc)
        found = exhaustive_decompositions(n, d1, d2, limit=1)
        if not found:
            raise DecompositionError(f"no decomposition of ({d1},{d2})") from None
        return list(found[0])
    return out


def _step_check(n, a, b):
    if not _pair_ok(n, a, b):
        raise AssertionError(f"intermediate ({a},{b}) violates the inequality")


def exhaustive_decompositions(n: int, d1: int, d2: int, limit: int | None = None) -> list[tuple[tuple[int, int], ...]]:
    """All multisets of root generators summing to (d1, d2), as sorted tuples.
    Independent of :func:`root_decompose`; used as its oracle."""
    gens = root_generators(n)
    results: list[tuple[tuple[int, int], ...]] = []

    def rec(i, a, b, acc):
        if limit is not None and len(results) >= limit:
            return
        if a == 0 and b == 0:
            results.append(tuple(sorted(acc)))
            return
        if i == len(gens):
            return
        g1, g2 = gens[i]
        kmax = a // g1
        if g2:
            kmax = min(kmax, b // g2)
        for k in range(kmax, -1, -1):
            rec(i + 1, a - k * g1, b - k * g2, acc + [gens[i]] * k)

    rec(0, d1, d2, [])
    return results


def roots_table(n: int, max_coord: int) -> list[dict]:
    """Lattice points with q <= 1 in [0, max]^2, flagged as generators or as
    the excluded point (1, n)."""
    gens = set(root_generators(n))
    rows = []
    for d1 in range(max_coord + 1):
        for d2 in range(max_coord + 1):
            q = tits_q(n, d1, d2)
            if q <= 1:
                rows.append(
                    {
                        "d1": d1,
                        "d2": d2,
                        "q": q,
                        "is_generator": (d1, d2) in gens,
                        "is_excluded": (d1, d2) == (1, n),
                    }
                )
    return rows


# -- generic invariants ----------------------------------------------------------

def h0_generic(n: int, d: Sequence[int]) -> int:
    """Generic dimension of the common kernel of the C-blocks."""
    _require_nonempty(n, d)
    d0, d1, d2 = d
    return max(d0 - (n * d1 - d2), 0)


def h1_generic(n: int, d: Sequence[int]) -> int:
    """Generic dimension of the common kernel of the A-blocks."""
    _require_nonempty(n, d)
    d0, d1, d2 = d
    return max(d1 - n * d2, 0)


def exceptional_parameter(n: int, d: Sequence[int]) -> tuple[int, int] | None:
    """(a, family) if d is (a, n(a-1), (n^2-1)(a-1)) [family 1] or
    ((n^2-1)(a-1), n(a-1)+1, a-1) [family 2] for some a >= 1."""
    d0, d1, d2 = d
    a = d0
    if a >= 1 and (d1, d2) == (n * (a - 1), (n * n - 1) * (a - 1)):
        return a, 1
    a = d2 + 1
    if (d0, d1) == ((n * n - 1) * (a - 1), n * (a - 1) + 1):
        return a, 2
    return None


def exceptional_vectors(n: int, a: int) -> tuple[DimVec3, DimVec3]:
    return (a, n * (a - 1), (n * n - 1) * (a - 1)), ((n * n - 1) * (a - 1), n * (a - 1) + 1, a - 1)


def socdim_formula_certified(n: int, d: Sequence[int]) -> bool:
    """Whether :func:`generic_socdim` is backed by a proof for d: components
    (h0 = h1 = 0, or exceptional with a >= 2), and h1 > 0 with h0 = 0."""
    if not rad_nonempty(n, d):
        return False
    h0, h1 = h0_generic(n, d), h1_generic(n, d)
    exc = exceptional_parameter(n, d)
    if h1 > 0:
        return h0 == 0
    return h0 == 0 or (exc is not None and exc[0] >= 2) or d[1] == 0


def generic_socdim(n: int, d: Sequence[int]) -> DimVec3:
    """Closed-form generic socle layering of the stratum with radical layering d.

    h = d1 - n*d2 > 0 uses the h-branch formula; otherwise the exceptional
    rows (a >= 2) swap the two exceptional families and everything else is
    reversed.  Layerings with d1 = 0 are semisimple and map to themselves.
    See :func:`socdim_formula_certified` for where the formula is proven.
    """
    _require_nonempty(n, d)
    d0, d1, d2 = (int(x) for x in d)
    h = d1 - n * d2
    hval = None
    if h > 0:
        if (n * n - 1) * d2 >= d0:
            hval = (d2 + h, d1 - h, d0)
        else:
            hval = (d2 + h, d1 - h + d0 - (n * n - 1) * d2, (n * n - 1) * d2)
    exc = exceptional_parameter(n, d)
    if exc is not None and exc[0] >= 2:
        e1, e2 = exceptional_vectors(n, exc[0])
        row = e2 if exc[1] == 1 else e1
        if hval is not None and hval != row:
            log.warning("exceptional row %s and h-branch value %s disagree for %s", row, hval, tuple(d))
        return row
    if hval is not None:
        return hval
    if d1 == 0:
        return (d0, 0, 0)
    return (d2, d1, d0)


def generic_raddim(n: int, d_soc: Sequence[int]) -> DimVec3:
    """Generic radical layering of the stratum with socle layering d_soc.
    By duality this is the same closed form as :func:`generic_socdim`."""
    return generic_socdim(n, d_soc)


def fixed_point_check(n: int, d: Sequence[int]) -> bool:
    """Necessary condition for a component: raddim(socdim(d)) == d."""
    _require_nonempty(n, d)
    dp = generic_socdim(n, d)
    if not soc_nonempty(n, dp):
        return False
    return generic_raddim(n, dp) == tuple(d)


# -- components ------------------------------------------------------------------

def regular_conditions(n: int, d: Sequence[int]) -> bool:
    d0, d1, d2 = d
    return d1 <= n * d0 and d1 <= n * d2 and d2 <= n * d1 - d0 and d0 <= n * d1 - d2


@dataclass(frozen=True)
class ComponentEntry:
    layering: DimVec3
    generic_socdim: DimVec3
    exceptional: bool
    h0: int
    h1: int


@dataclass
class ComponentReport:
    n: int
    d: int
    entries: list[ComponentEntry]
    excluded: list[DimVec3] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def layerings(self) -> list[DimVec3]:
        return [e.layering for e in self.entries]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "components": [
                {
                    "layering": list(e.layering),
                    "generic_socdim": list(e.generic_socdim),
                    "exceptional": e.exceptional,
                    "h0": e.h0,
                    "h1": e.h1,
                }
                for e in self.entries
            ],
            "excluded": [list(x) for x in self.excluded],
            "notes": list(self.notes),
        }

    def table(self) -> str:
        lines = [f"components of rep_{self.d} for n={self.n}  (* = exceptional)"]
        lines.append(f"{'layering':<16}{'generic socdim':<18}{'h0':>4}{'h1':>4}")
        for e in self.entries:
            lay = "(" + ",".join(map(str, e.layering)) + ")" + ("*" if e.exceptional else "")
            soc = "(" + ",".join(map(str, e.generic_socdim)) + ")"
            lines.append(f"{lay:<16}{soc:<18}{e.h0:>4}{e.h1:>4}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


def triples(total: int):
    for d0 in range(total + 1):
        for d1 in range(total - d0 + 1):
            yield (d0, d1, total - d0 - d1)


@lru_cache(maxsize=None)
def _components(n: int, d: int) -> ComponentReport:
    regular = [t for t in triples(d) if regular_conditions(n, t)]
    exceptional: list[DimVec3] = []
    excluded: list[DimVec3] = []
    notes: list[str] = []
    if (d - 1) % (n * n + n) == 0 and d >= 1:
        a = (d - 1) // (n * n + n) + 1
        for v in exceptional_vectors(n, a):
            if rad_nonempty(n, v):
                exceptional.append(v)
            else:
                excluded.append(v)
                msg = f"exceptional vector {v} (a={a}) is not a radical layering of any module; excluded"
                notes.append(msg)
                log.warning(msg)
    entries = []
    for t in sorted(set(regular) | set(exceptional)):
        entries.append(
            ComponentEntry(t, generic_socdim(n, t), t in exceptional, h0_generic(n, t), h1_generic(n, t))
        )
    return ComponentReport(n, d, entries, excluded, notes)


def components(n: int, d: int) -> ComponentReport:
    """The layerings whose strata closures are the irreducible components of
    rep_d, each annotated with its generic socle layering."""
    if n < 2 or d < 0:
        raise ValueError("need n >= 2 and d >= 0")
    rep = _components(n, d)
    return ComponentReport(rep.n, rep.d, list(rep.entries), list(rep.excluded), list(rep.notes))


def theta_separated(n: int, d: int) -> bool:
    """Distinct components have distinct, pairwise incomparable (raddim, socdim)."""
    pairs = [ThetaPair(e.layering, e.generic_socdim) for e in components(n, d).entries]
    for p, q in itertools.combinations(pairs, 2):
        if p == q or p.comparable(q):
            return False
    return True


def multiset(pairs) -> Counter:
    return Counter(pairs)
