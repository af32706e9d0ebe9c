"""Geometric decomposition of the neuron-space map.

Writing Wstar = U S V' splits one neuron-map step g(Wstar y + bstar)
into rotate-by-V', stretch-by-S, rotate/reflect-by-U, shift, squash.
SVD signs are not unique, so a fixed convention is applied:

1. flip column pairs (U_j, V_j) so each V column's largest-magnitude
   entry is positive;
2. if det(V) < 0, flip the last column pair (pushes any reflection
   into U, making V' a proper rotation);
3. in the 2-D case, if V' then rotates by >= 180 degrees, negate U and
   V wholesale (legal for even dimension: preserves U S V' and both
   determinants) so the reported rotation lands in [0, 180).

The complementary branch (rotation + 180, reflection axis + 90) is
always carried in the classification, since either branch describes the
same orthogonal map.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .network import Mlp, effective_pair, neuron_encode

ORTHO_TOL = 1.0e-8


@dataclass(frozen=True)
class SvdTriple:
    u: np.ndarray  # (L, L)
    s: np.ndarray  # (L,) descending
    v: np.ndarray  # (L, L); Wstar = u @ diag(s) @ v.T


@dataclass(frozen=True)
class OrthoClassification:
    kind: str  # 'rotation' | 'reflection'
    angle_degrees: float  # CCW rotation angle, or reflection-axis angle
    determinant: float
    alternate_angle_degrees: float  # the other sign branch's angle


@dataclass(frozen=True)
class SubstepTrace:
    """Point sets H0..H4: encode, rotate, stretch, rotate/reflect, squash."""

    sets: tuple  # five (m, L) arrays

    def __iter__(self):
        return iter(self.sets)


@dataclass(frozen=True)
class CompressionReport:
    max_deriv: float
    certified: bool  # max activation slope <= 1 on the sampled states
    n_samples: int
    activation: str


def _rotation_angle_2d(q: np.ndarray) -> float:
    return math.degrees(math.atan2(q[1, 0], q[0, 0])) % 360.0


def svd_wstar(net: Mlp) -> SvdTriple:
    """SVD of the effective neuron-space matrix under the fixed sign convention."""
    wstar = effective_pair(net).wstar
    u, s, vt = np.linalg.svd(wstar)
    v = vt.T.copy()
    u = u.copy()
    for j in range(v.shape[1]):
        if v[np.argmax(np.abs(v[:, j])), j] < 0:
            v[:, j] = -v[:, j]
            u[:, j] = -u[:, j]
    if np.linalg.det(v) < 0:
        v[:, -1] = -v[:, -1]
        u[:, -1] = -u[:, -1]
    if v.shape[0] == 2 and _rotation_angle_2d(v.T) >= 180.0:
        v = -v
        u = -u
    return SvdTriple(u, s, v)


def stretch_count(s, threshold: float = 1.0) -> int:
    """How many singular values exceed the neutral-stretch threshold."""
    return int(np.sum(np.asarray(s) > threshold))


def _check_orthogonal(q: np.ndarray) -> None:
    q = np.asarray(q, dtype=float)
    if q.shape[0] != q.shape[1]:
        raise ValueError("not orthogonal: non-square")
    if np.max(np.abs(q.T @ q - np.eye(q.shape[0]))) > ORTHO_TOL:
        raise ValueError("not orthogonal")


def classify_orthogonal_2d(q: np.ndarray) -> OrthoClassification:
    """Name a 2x2 orthogonal map: CCW rotation angle, or reflection axis.

    Rotation angle lives in [0, 360); a reflection is reported by the
    angle of its fixed axis to the +x axis, in [0, 180).
    """
    q = np.asarray(q, dtype=float)
    _check_orthogonal(q)
    if q.shape != (2, 2):
        raise ValueError("classify_orthogonal_2d needs a 2x2 matrix")
    det = float(np.linalg.det(q))
    if det > 0:
        angle = _rotation_angle_2d(q)
        return OrthoClassification("rotation", angle, det, (angle + 180.0) % 360.0)
    axis = (0.5 * math.degrees(math.atan2(q[1, 0], q[0, 0]))) % 180.0
    return OrthoClassification("reflection", axis, det, (axis + 90.0) % 180.0)


def principal_angles(q: np.ndarray):
    """Principal rotation angles (degrees) of an orthogonal matrix, any size.

    From the real Schur form, which for orthogonal q is block diagonal:
    each 2x2 block is a plane rotation, each 1x1 block contributes 0
    (eigenvalue +1) or 180 (eigenvalue -1).  Returns (angles, det).
    """
    q = np.asarray(q, dtype=float)
    _check_orthogonal(q)
    t, _ = scipy.linalg.schur(q, output="real")
    angles = []
    i = 0
    n = t.shape[0]
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > 1.0e-12:
            angles.append(math.degrees(math.atan2(t[i + 1, i], t[i, i])) % 360.0)
            i += 2
        else:
            angles.append(0.0 if t[i, i] > 0 else 180.0)
            i += 1
    return angles, float(np.linalg.det(q))


def trace_substeps(net: Mlp, phase_points: np.ndarray) -> SubstepTrace:
    """Push phase-space points through the five neuron-space sub-steps.

    H0 encodes the points; H1 = V'H0, H2 = S H1, H3 = U H2,
    H4 = g(H3 + bstar).  H4 coincides with neuron_step(H0).
    """
    pair = effective_pair(net)
    triple = svd_wstar(net)
    h0 = np.atleast_2d(neuron_encode(net, phase_points))
    h1 = h0 @ triple.v
    h2 = h1 * triple.s
    h3 = h2 @ triple.u.T
    h4 = net.activation.value(h3 + pair.bstar)
    return SubstepTrace((h0, h1, h2, h3, h4))


def compression_certificate(net: Mlp, samples: np.ndarray) -> CompressionReport:
    """Largest activation slope seen across samples and neurons.

    For sigmoidal activations this certifies the squash sub-step only
    ever contracts (slope <= 1).
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    w1, b1 = net.layers[0].weights, net.layers[0].bias
    slopes = net.activation.deriv(samples @ w1.T + b1)
    max_deriv = float(np.max(slopes))
    return CompressionReport(max_deriv, max_deriv <= 1.0, samples.shape[0],
                             net.activation.name)


def write_substeps(trace: SubstepTrace, csv_path) -> None:
    """CSV export: one row per point per sub-step set."""
    width = trace.sets[0].shape[1]
    with open(str(csv_path), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["set_id", "idx"] + [f"y{k + 1}" for k in range(width)])
        for set_id, points in enumerate(trace.sets):
            for idx, row in enumerate(points):
                writer.writerow([set_id, idx] + [format(v, ".17g") for v in row])
