"""Persistence diagrams, the extended point metric, and the bottleneck distance.

Points below the diagonal never occur; the diagonal itself is implicit with
infinite multiplicity and is represented by the :data:`DIAGONAL` sentinel in
point-level computations.  The bottleneck distance restricts its search to
the finite candidate grid ``c * |w0 - w1|`` with ``c`` in {1/2, 1} over all
coordinates of the two diagrams, so results are exact in float arithmetic
and the brute-force oracle must agree with no tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

INF = math.inf


class _Diagonal:
    __slots__ = ()

    def __repr__(self) -> str:
        return "<diagonal>"


DIAGONAL = _Diagonal()


@dataclass(frozen=True)
class DiagramPoint:
    """A birth-death pair strictly above the diagonal; death may be +inf."""

    birth: float
    death: float
    multiplicity: int = 1

    def __post_init__(self):
        if not math.isfinite(self.birth):
            raise ValueError("birth must be finite")
        if not self.birth < self.death:
            raise ValueError(f"need birth < death, got ({self.birth}, {self.death})")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be a positive integer")

    @property
    def is_essential(self) -> bool:
        return math.isinf(self.death)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of diagram points of one homology degree."""

    degree: int
    points: tuple[DiagramPoint, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        merged: dict[tuple[float, float], int] = {}
        for p in self.points:
            key = (p.birth, p.death)
            merged[key] = merged.get(key, 0) + p.multiplicity
        pts = tuple(
            DiagramPoint(b, d, m) for (b, d), m in sorted(merged.items())
        )
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_pairs(cls, degree: int, pairs) -> "PersistenceDiagram":
        """Build from (birth, death) or (birth, death, multiplicity) tuples."""
        pts = []
        for pair in pairs:
            b, d = pair[0], pair[1]
            m = pair[2] if len(pair) > 2 else 1
            pts.append(DiagramPoint(float(b), float(d), int(m)))
        return cls(degree, tuple(pts))

    def expanded(self) -> list[tuple[float, float]]:
        """Points with multiplicity written out."""
        out: list[tuple[float, float]] = []
        for p in self.points:
            out.extend([(p.birth, p.death)] * p.multiplicity)
        return out

    def coordinates(self) -> list[float]:
        """All finite coordinates (births, and deaths when finite)."""
        out = []
        for p in self.points:
            out.append(p.birth)
            if not p.is_essential:
                out.append(p.death)
        return out

    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.points)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "points": [
                {
                    "birth": p.birth,
                    "death": "inf" if p.is_essential else p.death,
                    "multiplicity": p.multiplicity,
                }
                for p in self.points
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PersistenceDiagram":
        pts = []
        for row in obj["points"]:
            death = row["death"]
            death = INF if death == "inf" else float(death)
            pts.append(DiagramPoint(float(row["birth"]), death, int(row.get("multiplicity", 1))))
        return cls(int(obj["degree"]), tuple(pts))


def _pair_cost(p: tuple[float, float], q: tuple[float, float]) -> float:
    """Cost of matching two raw (birth, death) pairs."""
    pb, pd = p
    qb, qd = q
    p_inf, q_inf = math.isinf(pd), math.isinf(qd)
    if p_inf and q_inf:
        return abs(pb - qb)
    if p_inf or q_inf:
        return INF
    return min(max(abs(pb - qb), abs(pd - qd)), max((pd - pb) / 2, (qd - qb) / 2))


def _diagonal_cost(p: tuple[float, float]) -> float:
    b, d = p
    return INF if math.isinf(d) else (d - b) / 2


def point_distance(p, q) -> float:
    """Extended metric between diagram points; either argument may be DIAGONAL."""
    p_diag = p is DIAGONAL
    q_diag = q is DIAGONAL
    if p_diag and q_diag:
        return 0.0
    if p_diag:
        return _diagonal_cost((q.birth, q.death))
    if q_diag:
        return _diagonal_cost((p.birth, p.death))
    return _pair_cost((p.birth, p.death), (q.birth, q.death))


def candidate_costs(d1: PersistenceDiagram, d2: PersistenceDiagram) -> list[float]:
    """Sorted candidate values c*|w0 - w1|, c in {1/2, 1}, over all coordinates.

    The bottleneck distance of the pair is always an element of this list,
    or 0, or +inf.
    """
    if d1.degree != d2.degree:
        raise ValueError(f"degree mismatch: {d1.degree} vs {d2.degree}")
    coords = d1.coordinates() + d2.coordinates()
    cands = {0.0}
    for w0, w1 in itertools.combinations(coords, 2):
        gap = abs(w0 - w1)
        cands.add(gap)
        cands.add(gap / 2)
    return sorted(cands)


def _split(diagram: PersistenceDiagram):
    finite, infinite = [], []
    for b, d in diagram.expanded():
        (infinite if math.isinf(d) else finite).append((b, d))
    return finite, sorted(infinite)


def _matchable(n1: int, n2: int, allowed, diag1, diag2) -> bool:
    """Perfect-matching feasibility on the diagonal-augmented bipartite graph.

    Left nodes: points of D1 then diagonal slots for D2's points; right nodes
    symmetric.  ``allowed[i][j]`` marks usable point-point edges, ``diag1[i]``
    whether left point i may retire to the diagonal (symmetrically diag2).
    """
    n = n1 + n2
    match_right = [-1] * n

    def neighbours(i):
        if i < n1:
            for j in range(n2):
                if allowed[i][j]:
                    yield j
            if diag1[i]:
                yield n2 + i
        else:
            j2 = i - n1
            if diag2[j2]:
                yield j2
            yield from range(n2, n)

    def augment(i, seen):
        for j in neighbours(i):
            if seen[j]:
                continue
            seen[j] = True
            if match_right[j] == -1 or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    size = 0
    for i in range(n):
        if augment(i, [False] * n):
            size += 1
    return size == n


def _finite_bottleneck(f1, f2, cands) -> float:
    n1, n2 = len(f1), len(f2)
    if n1 == 0 and n2 == 0:
        return 0.0
    costs = [[_pair_cost(p, q) for q in f2] for p in f1]
    diag1_cost = [_diagonal_cost(p) for p in f1]
    diag2_cost = [_diagonal_cost(q) for q in f2]

    def feasible(lam: float) -> bool:
        allowed = [[costs[i][j] <= lam for j in range(n2)] for i in range(n1)]
        diag1 = [c <= lam for c in diag1_cost]
        diag2 = [c <= lam for c in diag2_cost]
        return _matchable(n1, n2, allowed, diag1, diag2)

    lo, hi = 0, len(cands) - 1
    if not feasible(cands[hi]):  # cannot happen: the largest candidate retires everything
        return INF
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def bottleneck_distance(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Bottleneck distance: min over multiset bijections of the max point cost.

    Points may retire to the diagonal; essential points must match essential
    points, so the result is +inf when the essential counts differ.
    """
    if d1.degree != d2.degree:
        raise ValueError(f"degree mismatch: {d1.degree} vs {d2.degree}")
    f1, i1 = _split(d1)
    f2, i2 = _split(d2)
    if len(i1) != len(i2):
        return INF
    inf_cost = max((abs(a[0] - b[0]) for a, b in zip(i1, i2)), default=0.0)
    cands = candidate_costs(d1, d2)
    fin_cost = _finite_bottleneck(f1, f2, cands)
    return max(inf_cost, fin_cost)


def bottleneck_bruteforce(d1: PersistenceDiagram, d2: PersistenceDiagram, limit: int = 12) -> float:
    """Exact bottleneck by enumerating every multiset bijection (small inputs only).

    Unmatched points pair with the diagonal.  Serves as the independent
    oracle for :func:`bottleneck_distance`.
    """
    if d1.degree != d2.degree:
        raise ValueError(f"degree mismatch: {d1.degree} vs {d2.degree}")
    p1 = d1.expanded()
    p2 = d2.expanded()
    if len(p1) + len(p2) > limit:
        raise ValueError(f"brute force limited to {limit} points, got {len(p1) + len(p2)}")

    best = INF
    n2 = len(p2)

    def recurse(i: int, used: int, current: float):
        nonlocal best
        if current >= best:
            return
        if i == len(p1):
            total = current
            for j in range(n2):
                if not used >> j & 1:
                    total = max(total, _diagonal_cost(p2[j]))
                    if total >= best:
                        return
            best = total
            return
        point = p1[i]
        for j in range(n2):
            if not used >> j & 1:
                recurse(i + 1, used | 1 << j, max(current, _pair_cost(point, p2[j])))
        recurse(i + 1, used, max(current, _diagonal_cost(point)))

    recurse(0, 0, 0.0)
    return best
