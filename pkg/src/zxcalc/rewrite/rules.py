"""The rewrite rule set as executable matchers and appliers.

Thirteen rules: S1 (spider fusion, bidirectional), S2a (identity removal),
S2b (self-loop removal, the graph residue of wire yanking), B1 (copy),
B2 (bialgebra, bidirectional), K1 (pi-copy), K2 (pi-commutation), C (colour
change, bidirectional), D1/D2 (scalar normalisation/deletion),
E (supplementarity), HOPF (the derived two-wire disconnection) and A (the
derived pi-absorption through a phased spider).

Every rule is sound up to a global scalar: for any match ``m`` on a valid
diagram ``d``, ``evaluate(apply(d, m))`` equals ``evaluate(d)`` up to a
nonzero complex factor.  This is enforced empirically by
:mod:`zxcalc.rewrite.soundness` rather than by construction: matchers are
deliberately conservative and reject shapes (self-loops where they would
change the semantics, parallel-edge corner cases) that were not verified.

Matchers enumerate deterministically in ascending vertex-id order, and
``apply`` never mutates its input: it re-validates the match against the
diagram (raising :class:`StaleMatchError` if the structure moved underneath
it) and returns a rewritten copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..graph import Diagram, VertexType
from ..phase import Phase

FORWARD = "forward"
BACKWARD = "backward"

RULE_NAMES = (
    "S1",
    "S2a",
    "S2b",
    "B1",
    "B2",
    "K1",
    "K2",
    "C",
    "D1",
    "D2",
    "E",
    "HOPF",
    "A",
)

_CLIFFORD_PI = (Phase.zero(), Phase.pi())


class StaleMatchError(Exception):
    """The diagram changed since the match was found; it no longer applies."""


@dataclass(frozen=True)
class Match:
    """An occurrence of a rule's left-hand side.

    ``data`` is a sorted tuple of (role, value) pairs; values are vertex ids
    or, for variadic rules, tuples describing the leg partition.
    """

    rule: str
    data: tuple

    def __getitem__(self, key: str):
        for k, v in self.data:
            if k == key:
                return v
        raise KeyError(key)

    def get(self, key: str, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    @property
    def vertex_ids(self) -> list[int]:
        ids = []
        for _, v in self.data:
            if isinstance(v, int):
                ids.append(v)
        return sorted(set(ids))

    def summary(self) -> str:
        return f"{self.rule} at {self.vertex_ids}"


def _match(rule: str, **data) -> Match:
    return Match(rule, tuple(sorted(data.items())))


def _other_end(edge: tuple[int, int], v: int) -> int:
    a, b = edge
    return b if a == v else a


def _spider(d: Diagram, v: int) -> bool:
    return v in d.types and d.types[v].is_spider()


def _is_point(d: Diagram, v: int, ty: VertexType, phase: Optional[Phase] = None) -> bool:
    """A point is a degree-1 spider of the given colour (and phase, if given)."""
    return (
        _spider(d, v)
        and d.types[v] is ty
        and d.degree(v) == 1
        and (phase is None or d.phases[v] == phase)
    )


class RewriteRule:
    """Base class: a named, directed rewrite with matcher and applier."""

    name: str = ""
    direction: str = FORWARD

    def find_matches(self, d: Diagram) -> list[Match]:
        raise NotImplementedError

    def _valid(self, d: Diagram, m: Match) -> bool:
        raise NotImplementedError

    def _rewrite(self, d: Diagram, m: Match) -> None:
        raise NotImplementedError

    def apply(self, d: Diagram, m: Match) -> Diagram:
        if m.rule != self.name:
            raise StaleMatchError(f"match for {m.rule} given to rule {self.name}")
        if not self._valid(d, m):
            raise StaleMatchError(f"{m.summary()} no longer applies")
        out = d.copy()
        self._rewrite(out, m)
        return out

    def __repr__(self) -> str:
        return f"<rule {self.name} {self.direction}>"


# ----------------------------------------------------------------------
# S1: spider fusion


class FuseRule(RewriteRule):
    """Adjacent same-colour spiders fuse; phases add, connecting edges vanish."""

    name = "S1"

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        vs = d.vertices()
        for i, u in enumerate(vs):
            if not _spider(d, u):
                continue
            for v in vs[i + 1 :]:
                if (
                    _spider(d, v)
                    and d.types[u] is d.types[v]
                    and d.edge_count(u, v) >= 1
                ):
                    out.append(_match(self.name, u=u, v=v))
        return out

    def _valid(self, d: Diagram, m: Match) -> bool:
        u, v = m["u"], m["v"]
        return (
            _spider(d, u)
            and _spider(d, v)
            and d.types[u] is d.types[v]
            and d.edge_count(u, v) >= 1
        )

    def _rewrite(self, d: Diagram, m: Match) -> None:
        u, v = m["u"], m["v"]
        d.phases[u] = d.phases[u] + d.phases[v]
        for edge in d.incident(v):
            if u in edge and v in edge:
                continue  # connecting edges disappear
            w = _other_end(edge, v)
            if w == v:
                d.edges.append((u, u))  # self-loop moves over
            else:
                d.edges.append((u, w) if u <= w else (w, u))
        d.remove_vertex(v)


class UnfuseRule(RewriteRule):
    """Split a spider in two (S1 read right to left).

    The match carries the legs that move to the fresh spider (as a tuple of
    (neighbour, count) pairs) and the phase the fresh spider takes with it.
    ``find_matches`` enumerates a canonical bounded family: the empty split
    (detach the full phase as a fresh point) and every single-leg split.
    Replay scripts build richer matches with :func:`unfuse_match`.
    """

    name = "S1"
    direction = BACKWARD

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        for v in d.vertices():
            if not _spider(d, v):
                continue
            out.append(unfuse_match(v, (), d.phases[v]))
            for w in sorted(set(d.neighbors(v))):
                out.append(unfuse_match(v, ((w, 1),), Phase.zero()))
        return out

    def _valid(self, d: Diagram, m: Match) -> bool:
        v = m["vertex"]
        if not _spider(d, v):
            return False
        for w, count in m["legs"]:
            if w == v or d.edge_count(v, w) < count:
                return False
        return True

    def _rewrite(self, d: Diagram, m: Match) -> None:
        v = m["vertex"]
        moved: Phase = m["new_phase"]
        fresh = d.add_vertex(d.types[v], moved)
        d.phases[v] = d.phases[v] - moved
        for w, count in m["legs"]:
            for _ in range(count):
                d.remove_edge(v, w)
                d.add_edge(fresh, w)
        d.add_edge(v, fresh)


def unfuse_match(vertex: int, legs: tuple, new_phase: Phase) -> Match:
    """Build an explicit backward-S1 match (used by derivation scripts)."""
    return _match("S1", vertex=vertex, legs=tuple(legs), new_phase=new_phase)


# ----------------------------------------------------------------------
# S2a: identity removal; S2b: self-loop removal


class IdentityRule(RewriteRule):
    """A phase-0 spider with exactly two plain legs is just a wire."""

    name = "S2a"

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        for v in d.vertices():
            if (
                _spider(d, v)
                and d.phases[v].is_zero()
                and d.degree(v) == 2
                and d.self_loops(v) == 0
            ):
                out.append(_match(self.name, vertex=v))
        return out

    def _valid(self, d: Diagram, m: Match) -> bool:
        v = m["vertex"]
        return (
            _spider(d, v)
            and d.phases[v].is_zero()
            and d.degree(v) == 2
            and d.self_loops(v) == 0
        )

    def _rewrite(self, d: Diagram, m: Match) -> None:
        v = m["vertex"]
        a, b = (_other_end(e, v) for e in d.incident(v))
        d.remove_vertex(v)
        d.edges.append((a, b) if a <= b else (b, a))


class LoopRule(RewriteRule):
    """Remove a plain self-loop from a spider (yanking a bent wire straight)."""

    name = "S2b"

    def find_matches(self, d: Diagram) -> list[Match]:
        return [
            _match(self.name, vertex=v)
            for v in d.vertices()
            if _spider(d, v) and d.self_loops(v) >= 1
        ]

    def _valid(self, d: Diagram, m: Match) -> bool:
        v = m["vertex"]
        return _spider(d, v) and d.self_loops(v) >= 1

    def _rewrite(self, d: Diagram, m: Match) -> None:
        v = m["vertex"]
        d.remove_edge(v, v)


# ----------------------------------------------------------------------
# B1 / K1 / A: copying a point through a spider
#
# All three share one mechanism: an arity-1 spider selects a single branch of
# the opposite-colour spider it is plugged into, which therefore explodes
# into one copy of the point per remaining leg.  B1 is the phase-0 copy
# through a phase-0 spider, K1 the pi-copy through a phase-0 spider, and A
# (a derived rule) the pi-copy through a spider of arbitrary phase, which
# only contributes an extra scalar.


class _PointCopyRule(RewriteRule):
    point_phase: Phase
    spider_phase_zero: bool  # if False, any spider phase is admitted

    def __init__(self, strict_scalars: bool = False):
        self.strict_scalars = strict_scalars

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        for p in d.vertices():
            if not _spider(d, p) or d.degree(p) != 1 or d.phases[p] != self.point_phase:
                continue
            (edge,) = d.incident(p)
            s = _other_end(edge, p)
            if s == p or not _spider(d, s):
                continue
            if d.types[s] is not d.types[p].opposite:
                continue
            if self.spider_phase_zero and not d.phases[s].is_zero():
                continue
            out.append(_match(self.name, point=p, spider=s))
        return out

    def _valid(self, d: Diagram, m: Match) -> bool:
        p, s = m["point"], m["spider"]
        return (
            _spider(d, p)
            and _spider(d, s)
            and d.degree(p) == 1
            and d.phases[p] == self.point_phase
            and d.types[s] is d.types[p].opposite
            and d.edge_count(p, s) == 1
            and (not self.spider_phase_zero or d.phases[s].is_zero())
        )

    def _rewrite(self, d: Diagram, m: Match) -> None:
        p, s = m["point"], m["spider"]
        colour = d.types[p]
        legs = [
            _other_end(e, s)
            for e in d.incident(s)
            if p not in e and _other_end(e, s) != s  # self-loops contribute nothing
        ]
        d.remove_vertex(p)
        d.remove_vertex(s)
        for w in legs:
            q = d.add_vertex(colour, self.point_phase)
            d.add_edge(q, w)
        if self.strict_scalars and not legs:
            # the closed point/spider pair is the scalar sqrt(2)
            d.add_vertex(VertexType.DIAMOND)


class CopyRule(_PointCopyRule):
    name = "B1"
    point_phase = Phase.zero()
    spider_phase_zero = True


class PiCopyRule(_PointCopyRule):
    name = "K1"
    point_phase = Phase.pi()
    spider_phase_zero = True


class AbsorbRule(_PointCopyRule):
    name = "A"
    point_phase = Phase.pi()
    spider_phase_zero = False


# ----------------------------------------------------------------------
# K2: pi commutes through a phased spider, negating its phase


class PiCommuteRule(RewriteRule):
    """A degree-2 pi spider moves past an opposite-colour spider.

    The spider's phase flips sign and a fresh pi vertex appears on each of
    its remaining legs.  Matches with self-loops on the target spider, or
    with both legs of the pi vertex on the same spider, are rejected: those
    shapes were not verified.
    """

    name = "K2"

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        for x in d.vertices():
            if not (
                _spider(d, x)
                and d.phases[x].is_pi()
                and d.degree(x) == 2
                and d.self_loops(x) == 0
            ):
                continue
            e1, e2 = d.incident(x)
            ends = sorted((_other_end(e1, x), _other_end(e2, x)))
            if ends[0] == ends[1]:
                continue
            for s in ends:
                if (
                    _spider(d, s)
                    and d.types[s] is d.types[x].opposite
                    and d.self_loops(s) == 0
                ):
                    out.append(_match(self.name, pi_vertex=x, spider=s))
        return out

    def _valid(self, d: Diagram, m: Match) -> bool:
        x, s = m["pi_vertex"], m["spider"]
        if not (
            _spider(d, x)
            and _spider(d, s)
            and d.phases[x].is_pi()
            and d.degree(x) == 2
            and d.self_loops(x) == 0
            and d.edge_count(x, s) == 1
            and d.types[s] is d.types[x].opposite
            and d.self_loops(s) == 0
        ):
            return False
        ends = [_other_end(e, x) for e in d.incident(x)]
        return len(set(ends)) == 2

    def _rewrite(self, d: Diagram, m: Match) -> None:
        x, s = m["pi_vertex"], m["spider"]
        colour = d.types[x]
        (w,) = [_other_end(e, x) for e in d.incident(x) if s not in e]
        other_legs = [_other_end(e, s) for e in d.incident(s) if x not in e]
        d.remove_vertex(x)
        d.phases[s] = -d.phases[s]
        d.add_edge(w, s)
        for y in other_legs:
            d.remove_edge(s, y)
            fresh = d.add_vertex(colour, Phase.pi())
            d.add_edge(s, fresh)
            d.add_edge(fresh, y)


# ----------------------------------------------------------------------
# B2: the bialgebra square


class BialgebraRule(RewriteRule):
    """Fig-style 2x2 bialgebra: a connected Z/X pair of degree 3 each
    rewrites to the complete bipartite square on four fresh spiders
    (forward), and back (backward).
    """

    name = "B2"

    def __init__(self, direction: str = FORWARD):
        self.direction = direction

    # -- forward: pair -> K22

    def _pair_matches(self, d: Diagram) -> list[Match]:
        out = []
        for z in d.vertices():
            if not (
                _spider(d, z)
                and d.types[z] is VertexType.Z
                and d.phases[z].is_zero()
                and d.degree(z) == 3
                and d.self_loops(z) == 0
            ):
                continue
            for x in sorted(set(d.neighbors(z))):
                if (
                    _spider(d, x)
                    and d.types[x] is VertexType.X
                    and d.phases[x].is_zero()
                    and d.degree(x) == 3
                    and d.self_loops(x) == 0
                    and d.edge_count(z, x) == 1
                ):
                    out.append(_match(self.name, z=z, x=x))
        return out

    def _pair_valid(self, d: Diagram, m: Match) -> bool:
        z, x = m["z"], m["x"]
        return (
            _spider(d, z)
            and _spider(d, x)
            and d.types[z] is VertexType.Z
            and d.types[x] is VertexType.X
            and d.phases[z].is_zero()
            and d.phases[x].is_zero()
            and d.degree(z) == 3
            and d.degree(x) == 3
            and d.self_loops(z) == 0
            and d.self_loops(x) == 0
            and d.edge_count(z, x) == 1
        )

    def _pair_rewrite(self, d: Diagram, m: Match) -> None:
        z, x = m["z"], m["x"]
        z_legs = [_other_end(e, z) for e in d.incident(z) if x not in e]
        x_legs = [_other_end(e, x) for e in d.incident(x) if z not in e]
        d.remove_vertex(z)
        d.remove_vertex(x)
        xs = [d.add_vertex(VertexType.X, Phase.zero()) for _ in z_legs]
        zs = [d.add_vertex(VertexType.Z, Phase.zero()) for _ in x_legs]
        for fresh, w in list(zip(xs, z_legs)) + list(zip(zs, x_legs)):
            d.add_edge(fresh, w)
        for xf in xs:
            for zf in zs:
                d.add_edge(xf, zf)

    # -- backward: K22 -> pair

    def _square_matches(self, d: Diagram) -> list[Match]:
        def candidate(v, ty):
            return (
                _spider(d, v)
                and d.types[v] is ty
                and d.phases[v].is_zero()
                and d.degree(v) == 3
                and d.self_loops(v) == 0
            )

        xs = [v for v in d.vertices() if candidate(v, VertexType.X)]
        zs = [v for v in d.vertices() if candidate(v, VertexType.Z)]
        out = []
        for i, x1 in enumerate(xs):
            for x2 in xs[i + 1 :]:
                for j, z1 in enumerate(zs):
                    for z2 in zs[j + 1 :]:
                        if all(
                            d.edge_count(a, b) == 1
                            for a in (x1, x2)
                            for b in (z1, z2)
                        ):
                            quad = {x1, x2, z1, z2}
                            outer = []
                            ok = True
                            for v in (x1, x2, z1, z2):
                                stubs = [
                                    _other_end(e, v)
                                    for e in d.incident(v)
                                    if _other_end(e, v) not in quad
                                ]
                                if len(stubs) != 1:
                                    ok = False
                                    break
                                outer.append(stubs[0])
                            if ok:
                                out.append(
                                    _match(self.name, x1=x1, x2=x2, z1=z1, z2=z2)
                                )
        return out

    def _square_valid(self, d: Diagram, m: Match) -> bool:
        try:
            x1, x2, z1, z2 = m["x1"], m["x2"], m["z1"], m["z2"]
        except KeyError:
            return False
        for v, ty in ((x1, VertexType.X), (x2, VertexType.X), (z1, VertexType.Z), (z2, VertexType.Z)):
            if not (
                _spider(d, v)
                and d.types[v] is ty
                and d.phases[v].is_zero()
                and d.degree(v) == 3
                and d.self_loops(v) == 0
            ):
                return False
        if not all(d.edge_count(a, b) == 1 for a in (x1, x2) for b in (z1, z2)):
            return False
        quad = {x1, x2, z1, z2}
        for v in quad:
            stubs = [u for u in d.neighbors(v) if u not in quad]
            if len(stubs) != 1:
                return False
        return True

    def _square_rewrite(self, d: Diagram, m: Match) -> None:
        x1, x2, z1, z2 = m["x1"], m["x2"], m["z1"], m["z2"]
        quad = {x1, x2, z1, z2}
        outer = {}
        for v in (x1, x2, z1, z2):
            (outer[v],) = [u for u in d.neighbors(v) if u not in quad]
        for v in quad:
            d.remove_vertex(v)
        z = d.add_vertex(VertexType.Z, Phase.zero())
        x = d.add_vertex(VertexType.X, Phase.zero())
        d.add_edge(z, x)
        d.add_edge(z, outer[x1])
        d.add_edge(z, outer[x2])
        d.add_edge(x, outer[z1])
        d.add_edge(x, outer[z2])

    def find_matches(self, d: Diagram) -> list[Match]:
        if self.direction == FORWARD:
            return self._pair_matches(d)
        return self._square_matches(d)

    def _valid(self, d: Diagram, m: Match) -> bool:
        if self.direction == FORWARD:
            return self._pair_valid(d, m)
        return self._square_valid(d, m)

    def _rewrite(self, d: Diagram, m: Match) -> None:
        if self.direction == FORWARD:
            self._pair_rewrite(d, m)
        else:
            self._square_rewrite(d, m)


# ----------------------------------------------------------------------
# C: colour change


class ColorChangeRule(RewriteRule):
    """X(a) equals Z(a) conjugated by a Hadamard on every leg.

    Forward turns an X spider into a Z spider with a fresh H on each plain
    edge (self-loops carry an H pair that cancels, so they stay untouched).
    Backward strips the H off every leg of a Z spider and flips its colour.
    """

    name = "C"

    def __init__(self, direction: str = FORWARD):
        self.direction = direction

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        if self.direction == FORWARD:
            for v in d.vertices():
                if _spider(d, v) and d.types[v] is VertexType.X:
                    out.append(_match(self.name, vertex=v))
            return out
        for v in d.vertices():
            if not (_spider(d, v) and d.types[v] is VertexType.Z):
                continue
            hs = self._leg_hadamards(d, v)
            if hs is not None and hs:
                out.append(_match(self.name, vertex=v, hadamards=tuple(hs)))
        return out

    @staticmethod
    def _leg_hadamards(d: Diagram, v: int) -> Optional[list[int]]:
        """The distinct H vertices on every plain leg of v, or None."""
        hs = []
        for e in d.incident(v):
            w = _other_end(e, v)
            if w == v:
                continue
            if (
                d.types.get(w) is not VertexType.H
                or d.edge_count(v, w) != 1
                or w in hs
            ):
                return None
            far = [u for u in d.neighbors(w) if u != v]
            if len(far) != 1:  # H loops back onto v; unverified shape
                return None
            hs.append(w)
        return hs

    def _valid(self, d: Diagram, m: Match) -> bool:
        v = m["vertex"]
        if self.direction == FORWARD:
            return _spider(d, v) and d.types[v] is VertexType.X
        if not (_spider(d, v) and d.types[v] is VertexType.Z):
            return False
        hs = self._leg_hadamards(d, v)
        return hs is not None and tuple(hs) == m["hadamards"] and len(hs) > 0

    def _rewrite(self, d: Diagram, m: Match) -> None:
        v = m["vertex"]
        if self.direction == FORWARD:
            d.types[v] = VertexType.Z
            for e in [e for e in d.incident(v) if _other_end(e, v) != v]:
                w = _other_end(e, v)
                d.remove_edge(v, w)
                h = d.add_vertex(VertexType.H)
                d.add_edge(v, h)
                d.add_edge(h, w)
        else:
            for h in m["hadamards"]:
                (far,) = [u for u in d.neighbors(h) if u != v]
                d.remove_vertex(h)
                d.add_edge(v, far)
            d.types[v] = VertexType.X


# ----------------------------------------------------------------------
# D1 / D2: scalar subdiagrams


class ScalarPairRule(RewriteRule):
    """An isolated point pair of opposite colours is a known scalar.

    With one phase exactly 0 the value is exactly sqrt(2): strict mode
    normalises the pair to a diamond.  In up-to-scalar mode any pair whose
    value is guaranteed nonzero (one phase in {0, pi}) is deleted.
    """

    name = "D1"

    def __init__(self, strict_scalars: bool = False):
        self.strict_scalars = strict_scalars

    def _shape_ok(self, d: Diagram, p: int, q: int) -> bool:
        if not (_spider(d, p) and _spider(d, q)):
            return False
        if d.types[q] is not d.types[p].opposite:
            return False
        if d.degree(p) != 1 or d.degree(q) != 1 or d.edge_count(p, q) != 1:
            return False
        if self.strict_scalars:
            return d.phases[p].is_zero() or d.phases[q].is_zero()
        return d.phases[p] in _CLIFFORD_PI or d.phases[q] in _CLIFFORD_PI

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        for p in d.vertices():
            for q in sorted(set(d.neighbors(p))):
                if p < q and self._shape_ok(d, p, q):
                    out.append(_match(self.name, p=p, q=q))
        return out

    def _valid(self, d: Diagram, m: Match) -> bool:
        return self._shape_ok(d, m["p"], m["q"])

    def _rewrite(self, d: Diagram, m: Match) -> None:
        d.remove_vertex(m["p"])
        d.remove_vertex(m["q"])
        if self.strict_scalars:
            d.add_vertex(VertexType.DIAMOND)


class ScalarLoopRule(RewriteRule):
    """Circles, free spiders and diamonds: the remaining scalar subdiagrams.

    An isolated spider (only self-loops) has value 1 + e^{i a}; for a = 0
    that is 2 = sqrt(2)^2, so strict mode replaces it by two diamonds.
    In up-to-scalar mode any nonzero isolated scalar vertex (a != pi) and
    any lone diamond is simply deleted.  The zero scalar (a = pi) is never
    touched: deleting it would change the map, not just its normalisation.
    """

    name = "D2"

    def __init__(self, strict_scalars: bool = False):
        self.strict_scalars = strict_scalars

    def _shape(self, d: Diagram, v: int) -> Optional[str]:
        if v not in d.types:
            return None
        ty = d.types[v]
        if ty is VertexType.DIAMOND:
            return None if self.strict_scalars else "diamond"
        if not ty.is_spider():
            return None
        if d.degree(v) != 2 * d.self_loops(v):
            return None  # has plain legs
        phase = d.phases[v]
        if self.strict_scalars:
            return "two" if phase.is_zero() else None
        return None if phase.is_pi() else "nonzero"

    def find_matches(self, d: Diagram) -> list[Match]:
        return [
            _match(self.name, vertex=v)
            for v in d.vertices()
            if self._shape(d, v) is not None
        ]

    def _valid(self, d: Diagram, m: Match) -> bool:
        return self._shape(d, m["vertex"]) is not None

    def _rewrite(self, d: Diagram, m: Match) -> None:
        kind = self._shape(d, m["vertex"])
        d.remove_vertex(m["vertex"])
        if kind == "two":
            d.add_vertex(VertexType.DIAMOND)
            d.add_vertex(VertexType.DIAMOND)


# ----------------------------------------------------------------------
# E: supplementarity


class SupplementarityRule(RewriteRule):
    """Two opposite-colour pi points on a degree-3 {0, pi} spider collapse.

    The spider and both points are consumed and a single pi point of the
    points' colour lands on the remaining wire (value scaled by +-sqrt(2)).
    Both phase variants (centre phase 0 or pi) and both colour polarities
    are matched; all four were verified by the oracle.
    """

    name = "E"

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        for t in d.vertices():
            if not (
                _spider(d, t)
                and d.phases[t] in _CLIFFORD_PI
                and d.degree(t) == 3
                and d.self_loops(t) == 0
            ):
                continue
            colour = d.types[t].opposite
            points = sorted(
                w
                for w in set(d.neighbors(t))
                if _is_point(d, w, colour, Phase.pi())
            )
            for i, p1 in enumerate(points):
                for p2 in points[i + 1 :]:
                    out.append(_match(self.name, center=t, p1=p1, p2=p2))
        return out

    def _valid(self, d: Diagram, m: Match) -> bool:
        t, p1, p2 = m["center"], m["p1"], m["p2"]
        if not (
            _spider(d, t)
            and d.phases[t] in _CLIFFORD_PI
            and d.degree(t) == 3
            and d.self_loops(t) == 0
        ):
            return False
        colour = d.types[t].opposite
        return (
            _is_point(d, p1, colour, Phase.pi())
            and _is_point(d, p2, colour, Phase.pi())
            and d.edge_count(t, p1) == 1
            and d.edge_count(t, p2) == 1
            and p1 != p2
        )

    def _rewrite(self, d: Diagram, m: Match) -> None:
        t, p1, p2 = m["center"], m["p1"], m["p2"]
        colour = d.types[t].opposite
        (rest,) = [
            _other_end(e, t) for e in d.incident(t) if p1 not in e and p2 not in e
        ]
        d.remove_vertex(p1)
        d.remove_vertex(p2)
        d.remove_vertex(t)
        fresh = d.add_vertex(colour, Phase.pi())
        d.add_edge(fresh, rest)


# ----------------------------------------------------------------------
# HOPF: the derived disconnection rule


class HopfRule(RewriteRule):
    """A Z and an X spider joined by exactly two parallel edges disconnect."""

    name = "HOPF"

    def find_matches(self, d: Diagram) -> list[Match]:
        out = []
        vs = d.vertices()
        for i, u in enumerate(vs):
            if not _spider(d, u):
                continue
            for v in vs[i + 1 :]:
                if (
                    _spider(d, v)
                    and d.types[v] is d.types[u].opposite
                    and d.edge_count(u, v) == 2
                ):
                    out.append(_match(self.name, u=u, v=v))
        return out

    def _valid(self, d: Diagram, m: Match) -> bool:
        u, v = m["u"], m["v"]
        return (
            _spider(d, u)
            and _spider(d, v)
            and d.types[v] is d.types[u].opposite
            and d.edge_count(u, v) == 2
        )

    def _rewrite(self, d: Diagram, m: Match) -> None:
        u, v = m["u"], m["v"]
        d.remove_edge(u, v)
        d.remove_edge(u, v)


# ----------------------------------------------------------------------
# registry


def get_rule(name: str, direction: str = FORWARD, strict_scalars: bool = False) -> RewriteRule:
    """Look up a rule instance by name and direction."""
    if name == "S1":
        return FuseRule() if direction == FORWARD else UnfuseRule()
    if direction == BACKWARD and name not in ("B2", "C"):
        raise ValueError(f"rule {name} has no backward direction")
    if name == "S2a":
        return IdentityRule()
    if name == "S2b":
        return LoopRule()
    if name == "B1":
        return CopyRule(strict_scalars)
    if name == "B2":
        return BialgebraRule(direction)
    if name == "K1":
        return PiCopyRule(strict_scalars)
    if name == "K2":
        return PiCommuteRule()
    if name == "C":
        return ColorChangeRule(direction)
    if name == "D1":
        return ScalarPairRule(strict_scalars)
    if name == "D2":
        return ScalarLoopRule(strict_scalars)
    if name == "E":
        return SupplementarityRule()
    if name == "HOPF":
        return HopfRule()
    if name == "A":
        return AbsorbRule(strict_scalars)
    raise ValueError(f"unknown rule {name!r}")
