"""Exact evaluation of diagrams to dense complex matrices.

Every vertex becomes a small complex tensor with one axis per incident edge
end; edges identify pairs of axes, which are contracted away.  Boundary
vertices contribute an identity tensor whose free axis becomes a row (output)
or column (input) index of the result.  The result of :func:`evaluate` is a
``2**m x 2**n`` matrix in big-endian wire order: the first output/input is
the most significant bit of the row/column index.

Generator semantics:

* Z spider, degree k, phase a: all-zeros entry 1, all-ones entry e^{ia},
  everything else 0 (for k = 0 this is the scalar 1 + e^{ia});
* X spider: the Z tensor conjugated by a Hadamard on every leg, i.e. the same
  map written in the |+>/|-> basis;
* H: the 2x2 Hadamard including its 1/sqrt(2) normalisation;
* boundary: an identity wire end;
* diamond: the scalar sqrt(2).

Scalars are tracked exactly; nothing is ever normalised away.  A self-loop
contracts two axes of the same vertex tensor (a partial trace).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import Diagram, VertexType

DEFAULT_MAX_QUBITS = 14
DEFAULT_TOLERANCE = 1e-9

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

# Unit effect vectors for Born-rule amplitudes.
EFFECT_VECTORS = {
    "z+": np.array([1, 0], dtype=complex),
    "z-": np.array([0, 1], dtype=complex),
    "x+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "x-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


class ResourceLimitError(Exception):
    """An evaluation would exceed the configured qubit cap."""


def spider_tensor(ty: VertexType, phase, degree: int) -> np.ndarray:
    """The generator tensor of a Z or X spider with ``degree`` legs."""
    t = np.zeros((2,) * degree, dtype=complex)
    if degree == 0:
        return np.asarray(1 + np.exp(1j * phase.radians), dtype=complex)
    t[(0,) * degree] = 1
    t[(1,) * degree] = np.exp(1j * phase.radians)
    if ty is VertexType.X:
        for axis in range(degree):
            t = np.moveaxis(np.tensordot(HADAMARD, t, axes=(1, axis)), 0, axis)
    return t


def _vertex_tensor(d: Diagram, v: int, legs: int) -> np.ndarray:
    ty = d.types[v]
    if ty.is_spider():
        return spider_tensor(ty, d.phases[v], legs)
    if ty is VertexType.H:
        return HADAMARD.copy()
    if ty is VertexType.BOUNDARY:
        return np.eye(2, dtype=complex)
    if ty is VertexType.DIAMOND:
        return np.asarray(np.sqrt(2), dtype=complex)
    raise AssertionError(f"unhandled vertex type {ty}")


def _trace_repeats(labels: list, tensor: np.ndarray) -> tuple[list, np.ndarray]:
    """Contract any label that appears twice within one tensor (self-loops)."""
    while True:
        seen = {}
        pair = None
        for i, lab in enumerate(labels):
            if lab in seen:
                pair = (seen[lab], i)
                break
            seen[lab] = i
        if pair is None:
            return labels, tensor
        i, j = pair
        tensor = np.trace(tensor, axis1=i, axis2=j)
        labels = [lab for k, lab in enumerate(labels) if k not in (i, j)]


def _contract_pair(a, b):
    """Contract two (labels, tensor) parts over all shared labels."""
    labels_a, t_a = a
    labels_b, t_b = b
    shared = [lab for lab in labels_a if lab in labels_b]
    axes_a = [labels_a.index(lab) for lab in shared]
    axes_b = [labels_b.index(lab) for lab in shared]
    t = np.tensordot(t_a, t_b, axes=(axes_a, axes_b))
    labels = [lab for lab in labels_a if lab not in shared] + [
        lab for lab in labels_b if lab not in shared
    ]
    return labels, t


def evaluate(
    d: Diagram,
    *,
    order: str = "greedy",
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> np.ndarray:
    """Contract a diagram to its ``2**m x 2**n`` matrix.

    ``order`` selects the deterministic contraction heuristic: ``"greedy"``
    always contracts the pair whose result tensor is smallest, while
    ``"sequential"`` folds parts in ascending vertex-id order.  Both give the
    same matrix up to floating-point noise; the choice only affects
    intermediate tensor sizes.
    """
    d.validate()
    m, n = len(d.outputs), len(d.inputs)
    if m + n > max_qubits:
        raise ResourceLimitError(
            f"interface has {m + n} wires, exceeding the cap of {max_qubits}"
        )
    if order not in ("greedy", "sequential"):
        raise ValueError(f"unknown contraction order {order!r}")

    # one label per edge occurrence; free labels for interface pins
    stubs: dict[int, list] = {v: [] for v in d.types}
    for idx, (a, b) in enumerate(d.edges):
        stubs[a].append(("e", idx))
        stubs[b].append(("e", idx))
    for pos, v in enumerate(d.inputs):
        stubs[v].append(("in", pos))
    for pos, v in enumerate(d.outputs):
        stubs[v].append(("out", pos))

    parts = []
    for v in d.vertices():
        labels = stubs[v]
        tensor = _vertex_tensor(d, v, len(labels))
        labels, tensor = _trace_repeats(list(labels), tensor)
        parts.append((labels, tensor))

    def result_size(a, b) -> int:
        shared = len([lab for lab in a[0] if lab in b[0]])
        return len(a[0]) + len(b[0]) - 2 * shared

    while True:
        candidates = [
            (i, j)
            for i in range(len(parts))
            for j in range(i + 1, len(parts))
            if any(lab in parts[j][0] for lab in parts[i][0])
        ]
        if not candidates:
            break
        if order == "greedy":
            i, j = min(candidates, key=lambda ij: (result_size(parts[ij[0]], parts[ij[1]]), ij))
        else:
            i, j = candidates[0]
        merged = _contract_pair(parts[i], parts[j])
        if len(merged[0]) > max_qubits:
            raise ResourceLimitError(
                f"intermediate tensor with {len(merged[0])} wires exceeds the cap "
                f"of {max_qubits}"
            )
        parts = [p for k, p in enumerate(parts) if k not in (i, j)]
        parts.append(merged)

    labels: list = []
    tensor = np.asarray(1.0 + 0j)
    for lab, t in parts:
        tensor = np.tensordot(tensor, t, axes=0)
        labels = labels + lab

    # arrange axes as out_0 .. out_{m-1}, in_0 .. in_{n-1} (big-endian)
    want = [("out", k) for k in range(m)] + [("in", k) for k in range(n)]
    perm = [labels.index(lab) for lab in want]
    tensor = np.transpose(tensor, perm) if perm else tensor
    return np.asarray(tensor, dtype=complex).reshape(2**m, 2**n)


@dataclass(frozen=True)
class EqualityVerdict:
    """Outcome of an up-to-scalar matrix comparison.

    ``scalar`` is the recovered factor with ``a ~= scalar * b``; it is absent
    when both matrices vanish.  ``max_residual`` is the largest entrywise
    deviation after scaling.
    """

    equal: bool
    scalar: Optional[complex]
    max_residual: float

    def __bool__(self) -> bool:
        return self.equal


def equal_up_to_scalar(
    a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOLERANCE
) -> EqualityVerdict:
    """Decide whether ``a = scalar * b`` for some nonzero scalar, within ``tol``.

    The scalar is recovered from the largest-magnitude entry of ``b`` and the
    residual is measured entrywise against ``tol * max(1, ||a||_inf)``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.max(np.abs(a))) if a.size else 0.0
    norm_b = float(np.max(np.abs(b))) if b.size else 0.0
    bound = tol * max(1.0, norm_a)
    if norm_a <= tol and norm_b <= tol:
        return EqualityVerdict(True, None, max(norm_a, norm_b))
    if norm_b <= tol or norm_a <= tol:
        return EqualityVerdict(False, None, max(norm_a, norm_b))
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    scalar = complex(a[idx] / b[idx])
    residual = float(np.max(np.abs(a - scalar * b)))
    if scalar != 0 and residual <= bound:
        return EqualityVerdict(True, scalar, residual)
    return EqualityVerdict(False, scalar, residual)


def born_probability(state: Diagram, effects) -> float:
    """Born-rule probability of a joint post-selection on a state diagram.

    ``state`` must have no inputs and n outputs; ``effects`` is a sequence of
    n labels from z+/z-/x+/x- giving the unit effect on each output wire.
    Returns ``|<effects|state>|^2 / <state|state>``.
    """
    effects = list(effects)
    if state.inputs:
        raise ValueError("born_probability expects a state (no inputs)")
    if len(effects) != len(state.outputs):
        raise ValueError(
            f"{len(state.outputs)} output wires but {len(effects)} effects"
        )
    vec = evaluate(state).reshape(-1)
    norm_sq = float(np.real(np.vdot(vec, vec)))
    if norm_sq <= 1e-24:  # numerically zero state
        raise ValueError("state has zero norm")
    bra = np.asarray(1.0 + 0j)
    for label in effects:
        try:
            bra = np.kron(bra, EFFECT_VECTORS[label])
        except KeyError:
            raise ValueError(f"unknown effect {label!r}") from None
    amp = complex(np.dot(np.conj(bra), vec))
    return float(abs(amp) ** 2 / norm_sq)
