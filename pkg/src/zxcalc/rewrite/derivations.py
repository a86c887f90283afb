"""Scripted derivation replays.

Each replay starts from a constructed diagram and applies an explicit,
pre-recorded sequence of rule matches; the runner re-evaluates the diagram
after every step and aborts if a step fails to match or changes the
semantics beyond a global scalar.  The scripts end in diagrams whose
evaluation is checked against the known closed forms:

=============  ===============================================================
hopf           two-wire Z/X pair disconnects into a point pair
rule_a         a pi point absorbs through a phased spider onto its legs
ghz_plug0/1    plugging z+ / z- into GHZ leaves |00> / |11>
w_plug0/1      plugging z+ / z- into the W state leaves |01>+|10> / |00>
qkd_core       decider z+ with equal x effects reduces to a nonzero scalar
=============  ===============================================================

Step sequences reference vertex ids directly; this is safe because id
allocation is deterministic (a per-diagram monotone counter) and the runner
re-validates every match structurally before applying it.
"""

from __future__ import annotations

import numpy as np

from ..graph import Diagram, VertexType
from ..phase import Phase
from ..semantics import equal_up_to_scalar, evaluate
from .rules import BACKWARD, FORWARD, _match, get_rule, unfuse_match
from .simplify import Trace

Z, X = VertexType.Z, VertexType.X


class ReplayError(Exception):
    """A scripted step failed to match or broke semantic equality."""


def _s1(u: int, v: int) -> tuple:
    return ("S1", FORWARD, _match("S1", u=u, v=v))


def _s2a(v: int) -> tuple:
    return ("S2a", FORWARD, _match("S2a", vertex=v))


def _unfuse(v: int, legs: tuple, phase: Phase) -> tuple:
    return ("S1", BACKWARD, unfuse_match(v, legs, phase))


def _b1(point: int, spider: int) -> tuple:
    return ("B1", FORWARD, _match("B1", point=point, spider=spider))


def _k1(point: int, spider: int) -> tuple:
    return ("K1", FORWARD, _match("K1", point=point, spider=spider))


def _k2(pi_vertex: int, spider: int) -> tuple:
    return ("K2", FORWARD, _match("K2", pi_vertex=pi_vertex, spider=spider))


def _d1(p: int, q: int) -> tuple:
    return ("D1", FORWARD, _match("D1", p=p, q=q))


def _hopf(u: int, v: int) -> tuple:
    return ("HOPF", FORWARD, _match("HOPF", u=u, v=v))


_T_STEP = ("T", None, None)


def _hopf_start() -> Diagram:
    d = Diagram()
    z = d.add_vertex(Z, Phase.zero())
    x = d.add_vertex(X, Phase.zero())
    d.add_input(z)
    d.add_output(x)
    d.add_edge(z, x)
    d.add_edge(z, x)
    return d


def _rule_a_start() -> Diagram:
    d = Diagram()
    s = d.add_vertex(Z, Phase(1, 3))
    p = d.add_vertex(X, Phase.pi())
    d.add_edge(p, s)
    d.add_output(s)
    d.add_output(s)
    return d


def _ghz_plugged(point: str) -> Diagram:
    from ..protocols import ghz_state

    return ghz_state().plugged("output", 0, point)


def _w_plugged(point: str) -> Diagram:
    from ..protocols import w_state

    return w_state().plugged("output", 0, point)


def _qkd_core_start() -> Diagram:
    """Decider gets z+ on wire 1; both x measurements read x- (equal)."""
    from ..protocols import w_state

    d = w_state().plugged("output", 0, "z+")
    d = d.plugged("output", 0, "x-")
    d = d.plugged("output", 0, "x-")
    return d


# Each entry: (builder, steps, expected matrix up to scalar).
# Vertex ids follow the deterministic allocation of the builders; see the
# step-by-step comments.  W-state ids: wires 0,1,2; parity 3; carrier 4;
# gadgets 5,6,7; gadget points 8,9,10; boundaries 11,12,13.
_DERIVATIONS: dict[str, tuple] = {
    # Z(0)=X(0) pair joined twice; unfuse both spiders, disconnect the inner
    # pair, fuse the halves back: the wire splits into a point pair.
    "hopf": (
        _hopf_start,
        [
            _T_STEP,  # topology move: relabel only
            _unfuse(4, ((5, 2),), Phase.zero()),  # split Z -> 4 - 8
            _unfuse(5, ((8, 2),), Phase.zero()),  # split X -> 9 - 5
            _hopf(8, 9),  # inner pair disconnects
            _s1(4, 8),
            _s1(5, 9),
        ],
        np.array([[1, 1], [0, 0]], dtype=complex),
    ),
    # X(pi) point on a Z(a) spider: detach the phase as a point, pi-copy
    # through the now-free spider, drop the closed scalar pair.
    "rule_a": (
        _rule_a_start,
        [
            _unfuse(0, (), Phase(1, 3)),  # phase moves to point 4
            _k1(1, 0),  # pi-copy: points 5, 6, 7
            _d1(4, 7),  # closed scalar pair vanishes
        ],
        np.array([0, 0, 0, 1], dtype=complex).reshape(4, 1),
    ),
    "ghz_plug0": (
        lambda: _ghz_plugged("z+"),
        [_b1(1, 0)],
        np.array([1, 0, 0, 0], dtype=complex).reshape(4, 1),
    ),
    "ghz_plug1": (
        lambda: _ghz_plugged("z-"),
        [_k1(1, 0)],
        np.array([0, 0, 0, 1], dtype=complex).reshape(4, 1),
    ),
    # z+ fuses into wire 1 of the W state and copies through it; the carrier
    # branch collapses, leaving the two-wire odd-parity spider.
    "w_plug0": (
        lambda: _w_plugged("z+"),
        [
            _unfuse(0, (), Phase(1, 4)),  # wire-1 phase off as point 14
            _b1(11, 0),  # copy: points 15, 16, 17
            _d1(14, 17),
            _s1(3, 15),  # parity absorbs the copy
            _s1(5, 16),  # gadget absorbs the copy
            _s2a(5),  # gadget is now an identity
            _s1(4, 8),  # carrier eats its gadget point
            _s2a(4),  # carrier is now an identity
            _s1(6, 7),  # remaining gadgets fuse
        ],
        np.array([0, 1, 1, 0], dtype=complex).reshape(4, 1),
    ),
    # z- pushes a pi through the same structure; the parity spider absorbs
    # it and drops out, disconnecting wire 1 entirely.
    "w_plug1": (
        lambda: _w_plugged("z-"),
        [
            _unfuse(0, (), Phase(1, 4)),
            _k1(11, 0),  # pi-copy: points 15, 16, 17
            _d1(14, 17),
            _s1(3, 15),  # parity becomes X(0), an identity
            _s2a(3),
            _s1(5, 16),  # gadget becomes X(pi)
            _k2(5, 8),  # pi commutes onto the gadget point
            _s1(4, 8),
            _s1(1, 2),  # wires 2 and 3 fuse
        ],
        np.array([1, 0, 0, 0], dtype=complex).reshape(4, 1),
    ),
    # Full measured round, equal x outcomes: the diagram closes up and
    # collapses to the nonzero scalar Z(0) spider (value 2), the
    # equal-outcome witness; unequal outcomes would leave Z(pi) = 0.
    "qkd_core": (
        _qkd_core_start,
        [
            _unfuse(0, (), Phase(1, 4)),
            _b1(11, 0),
            _d1(14, 17),
            _s1(3, 15),
            _s1(5, 16),
            _s2a(5),
            _s1(4, 8),
            _s2a(4),
            _s1(6, 7),
            _s1(1, 12),  # x- effect fuses into wire 2
            _s1(2, 13),  # x- effect fuses into wire 3
            _k2(3, 1),  # parity pi commutes through wire 2
            _s1(1, 2),  # measurement phases cancel: Z(0)
            _s2a(1),
            _s1(6, 18),  # pi lands back on the merged gadget
            _k2(6, 9),  # and commutes onto a gadget point
            _s1(9, 10),  # phases cancel: the scalar Z(0)
        ],
        np.array([[1]], dtype=complex),
    ),
}

DERIVATION_NAMES = tuple(sorted(_DERIVATIONS))


def expected_final(name: str) -> np.ndarray:
    """The paper-level closed form the replay must reach, up to scalar."""
    return _DERIVATIONS[name][2].copy()


def replay_derivation(name: str, verify: bool = True) -> Trace:
    """Run a scripted derivation end to end and return its trace.

    With ``verify`` (the default) every step is checked against the
    evaluator and the final diagram against the expected closed form;
    any mismatch raises :class:`ReplayError`.
    """
    try:
        builder, steps, expected = _DERIVATIONS[name]
    except KeyError:
        raise ReplayError(
            f"unknown derivation {name!r}; expected one of {DERIVATION_NAMES}"
        ) from None
    d = builder()
    trace = Trace()
    trace.record("start", "start", d)
    reference = evaluate(d) if verify else None
    for rule_name, direction, match in steps:
        if rule_name == "T":
            shift = d._next_id
            d = d.relabeled({v: v + shift for v in d.types})
            trace.record("T", "T (topology: vertex relabeling)", d)
            continue
        rule = get_rule(rule_name, direction)
        try:
            d = rule.apply(d, match)
        except Exception as exc:
            raise ReplayError(f"{name}: step {match.summary()} failed: {exc}") from exc
        trace.record(rule_name, match.summary(), d)
        if verify:
            verdict = equal_up_to_scalar(evaluate(d), reference)
            if not verdict.equal:
                raise ReplayError(
                    f"{name}: step {match.summary()} broke semantics "
                    f"(residual {verdict.max_residual:.3e})"
                )
    if verify:
        final = evaluate(d)
        if expected.shape != final.shape:
            raise ReplayError(
                f"{name}: final shape {final.shape} != expected {expected.shape}"
            )
        verdict = equal_up_to_scalar(final, expected)
        if not verdict.equal:
            raise ReplayError(
                f"{name}: final diagram does not match the expected form "
                f"(residual {verdict.max_residual:.3e})"
            )
    return trace
