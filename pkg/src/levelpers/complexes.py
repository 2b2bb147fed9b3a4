"""Finite simplicial complexes, vertex-valued PL maps, and filtrations.

A simplex is a strictly sorted tuple of integer vertex ids.  A vertex
value map extends linearly over each simplex; its critical values are
the distinct vertex values, with one regular (midpoint) value per gap
plus one sentinel below the minimum and one above the maximum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

Simplex = tuple[int, ...]

__all__ = [
    "Simplex",
    "SimplicialComplex",
    "VertexValuedMap",
    "CriticalGrid",
    "Filtration",
    "facets",
    "build_complex",
    "critical_values",
    "lower_star_filtration",
    "telescope",
]


def facets(simplex: Simplex) -> list[Simplex]:
    """Codimension-one faces, each with one vertex removed."""
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


@dataclass(frozen=True)
class SimplicialComplex:
    """A set of simplices closed under taking faces."""

    vertices: tuple[int, ...]
    simplices: frozenset[Simplex]

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def simplices_of_dim(self, d: int) -> list[Simplex]:
        return sorted(s for s in self.simplices if len(s) == d + 1)

    def __contains__(self, simplex: Simplex) -> bool:
        return tuple(simplex) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)


def build_complex(maximal_simplices) -> SimplicialComplex:
    """Close a family of simplices under faces, in canonical sorted form."""
    simplices: set[Simplex] = set()
    vertices: set[int] = set()
    for raw in maximal_simplices:
        vs = tuple(int(v) for v in raw)
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate vertex in simplex {list(raw)}")
        vs = tuple(sorted(vs))
        vertices.update(vs)
        for k in range(1, len(vs) + 1):
            simplices.update(itertools.combinations(vs, k))
    return SimplicialComplex(tuple(sorted(vertices)), frozenset(simplices))


@dataclass(frozen=True)
class VertexValuedMap:
    """A simplicial complex with one finite real value per vertex."""

    complex: SimplicialComplex
    values: dict[int, float]

    def __post_init__(self) -> None:
        cleaned = {}
        for v, x in self.values.items():
            x = float(x)
            if not math.isfinite(x):
                raise ValueError(f"value for vertex {v} is not finite")
            cleaned[int(v)] = x
        object.__setattr__(self, "values", cleaned)
        for v in self.complex.vertices:
            if v not in self.values:
                raise ValueError(f"no value for vertex {v}")
        for v in self.values:
            if v not in self.complex.vertices:
                raise ValueError(f"value given for unknown vertex {v}")

    def min_on(self, simplex: Simplex) -> float:
        return min(self.values[v] for v in simplex)

    def max_on(self, simplex: Simplex) -> float:
        return max(self.values[v] for v in simplex)

    def is_constant_on(self, simplex: Simplex) -> bool:
        return self.min_on(simplex) == self.max_on(simplex)


@dataclass(frozen=True)
class CriticalGrid:
    """Sorted critical values interleaved with one regular value per gap.

    regulars[0] sits below the smallest critical and regulars[-1] above
    the largest, so every critical index has a regular neighbour on both
    sides.
    """

    criticals: tuple[float, ...]
    regulars: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.regulars) != len(self.criticals) + 1:
            raise ValueError("need exactly one regular value per gap plus two sentinels")
        merged = self.points
        if any(merged[i] >= merged[i + 1] for i in range(len(merged) - 1)):
            raise ValueError("critical and regular values must interleave strictly")

    @classmethod
    def from_criticals(cls, values) -> "CriticalGrid":
        crit = tuple(sorted(set(float(v) for v in values)))
        if not crit:
            raise ValueError("no critical values")
        regs = [crit[0] - 1.0]
        regs.extend((a + b) / 2.0 for a, b in zip(crit, crit[1:]))
        regs.append(crit[-1] + 1.0)
        return cls(crit, tuple(regs))

    @property
    def points(self) -> tuple[float, ...]:
        """All grid values, regulars and criticals interleaved in order."""
        out = []
        for i, c in enumerate(self.criticals):
            out.append(self.regulars[i])
            out.append(c)
        out.append(self.regulars[-1])
        return tuple(out)

    def regular_below(self, k: int) -> float:
        """The regular value immediately below the k-th critical."""
        return self.regulars[k]

    def regular_above(self, k: int) -> float:
        """The regular value immediately above the k-th critical."""
        return self.regulars[k + 1]

    def critical_index(self, t: float) -> int:
        try:
            return self.criticals.index(t)
        except ValueError:
            raise ValueError(f"{t} is not a critical value") from None

    def in_range(self, x: float) -> bool:
        return self.criticals[0] <= x <= self.criticals[-1]


def critical_values(f: VertexValuedMap, extra_criticals=()) -> CriticalGrid:
    """Grid of the distinct vertex values, optionally with extra probes.

    Extra values only add zero-multiplicity rows to every downstream
    table; barcodes must not change under them.
    """
    if not f.complex.vertices:
        raise ValueError("empty complex has no critical values")
    vals = set(f.values[v] for v in f.complex.vertices)
    vals.update(float(x) for x in extra_criticals)
    return CriticalGrid.from_criticals(vals)


def lower_star_filtration(f: VertexValuedMap) -> list[tuple[Simplex, float]]:
    """Simplices ordered by (max vertex value, dimension, lexicographic).

    Every face precedes its cofaces, so the order is a valid filtration
    order for column reduction.
    """
    entries = [(s, f.max_on(s)) for s in f.complex.simplices]
    entries.sort(key=lambda e: (e[1], len(e[0]), e[0]))
    return entries


@dataclass
class Filtration:
    """Nested stages K_0 <= K_1 <= ... with strictly increasing times."""

    stages: list[SimplicialComplex]
    times: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("filtration needs at least one stage")
        if len(self.stages) != len(self.times):
            raise ValueError("stage and time counts differ")
        self.times = [float(t) for t in self.times]
        if any(a >= b for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        for i in range(len(self.stages) - 1):
            missing = self.stages[i].simplices - self.stages[i + 1].simplices
            if missing:
                s = min(missing)
                raise ValueError(f"stage {i} is not a subcomplex of stage {i + 1}: missing simplex {list(s)}")


def telescope(filt: Filtration) -> VertexValuedMap:
    """Turn a filtration into a PL map with the same sub-level persistence.

    Each stage contributes a triangulated prism between consecutive
    times: the prism over a d-simplex is split into d+1 simplices by the
    standard staircase along the vertex order.  Copies of vertex v at
    stage i carry the value times[i].
    """
    last = len(filt.stages) - 1
    pairs = sorted({(i, v) for i, stage in enumerate(filt.stages) for v in stage.vertices})
    cid = {pair: n for n, pair in enumerate(pairs)}

    simplices: list[Simplex] = []
    for i in range(last):
        for s in filt.stages[i].simplices:
            bottoms = [cid[(i, v)] for v in s]
            tops = [cid[(i + 1, v)] for v in s]
            for k in range(len(s)):
                simplices.append(tuple(bottoms[: k + 1] + tops[k:]))
    for s in filt.stages[last].simplices:
        simplices.append(tuple(cid[(last, v)] for v in s))

    cx = build_complex(simplices)
    values = {cid[(i, v)]: filt.times[i] for (i, v) in pairs if cid[(i, v)] in set(cx.vertices)}
    return VertexValuedMap(cx, values)
