"""Exact binary (K=2) beamforming in (near) linear time.

With ``x_n`` in {-1, +1} the objective ``|h0 + sum_n x_n h_n|^2`` equals
``max_{|y|=1} (sum_n |v_n . y|)^2`` where ``v_n`` is ``h_n`` as a plane
vector. The lines through the origin orthogonal to the ``v_n`` cut the unit
circle into arcs; on each arc the sign pattern ``sgn(v_n . y)`` is fixed, the
inner sum is linear (``w_m . y``) and its maximizer is a clamped projection.
Sweeping the arcs counterclockwise, only the channels on the line being
crossed change sign, so every ``w_m`` costs O(|group|) to update.

The arrangement has 2M arcs but ``(w . y)^2`` is invariant under ``y -> -y``
(every sign flips, so ``w -> -w``), hence M arcs covering half the circle are
enough. This is why the sweep below stops after M segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BINARY, BeamConfig, Instance

LINE_TOL = 1e-9


def sgn(z):
    """Sign with ``sgn(0) = +1``."""
    return np.where(np.asarray(z) >= 0, 1.0, -1.0)


@dataclass(frozen=True)
class NormalVec:
    v: tuple[float, float]
    source_index: int


@dataclass(frozen=True)
class RankOne:
    quotients: np.ndarray


@dataclass(frozen=True)
class RankTwo:
    pass


def normal_matrix(inst: Instance) -> np.ndarray:
    """Rows ``v_n = (Re h_n, Im h_n)`` for n = 0..N (row 0 is h0)."""
    h = np.concatenate(([inst.h0.to_complex()], inst.gains))
    return np.column_stack((h.real, h.imag))


def normal_vectors(inst: Instance) -> list[NormalVec]:
    return [NormalVec((float(a), float(b)), n) for n, (a, b) in enumerate(normal_matrix(inst))]


def detect_rank(inst: Instance, tol: float = LINE_TOL) -> RankOne | RankTwo:
    """Classify whether every ``h_n`` is a real multiple of ``h0``.

    Collinearity is tested through the sine of the angle between ``h_n`` and
    ``h0``, so the Gram matrix of the channels is never formed.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    h0 = inst.h0.to_complex()
    cross = inst.gains * np.conj(h0)
    if np.all(np.abs(cross.imag) <= tol * inst.betas * inst.h0.beta):
        return RankOne(cross.real / inst.h0.beta**2)
    return RankTwo()


def solve_rank_one(quotients) -> BeamConfig:
    """``x_n = sgn(r_n)`` makes every term of ``1 + sum r_n x_n`` nonnegative."""
    return BeamConfig.from_signs(sgn(np.asarray(quotients, dtype=float)))


@dataclass(frozen=True)
class TangentPartition:
    """Deduplicated tangent lines and the half-circle of arcs between them.

    ``line_angles[m]`` is the direction of line m, increasing counterclockwise
    from the start line and spanning less than pi. Arc m runs from line m to
    line m+1; the last arc closes at ``line_angles[0] + pi``. Group m
    (``members[offsets[m]:offsets[m+1]]``) holds the indices ``n`` whose
    normal ``v_n`` is orthogonal to line m.
    """

    line_angles: np.ndarray
    members: np.ndarray
    offsets: np.ndarray

    @property
    def m(self) -> int:
        return len(self.line_angles)

    @property
    def lines(self) -> np.ndarray:
        return np.column_stack((np.cos(self.line_angles), np.sin(self.line_angles)))

    @property
    def groups(self) -> list[np.ndarray]:
        return np.split(self.members, self.offsets[1:-1])

    @property
    def seg_start(self) -> np.ndarray:
        return self.line_angles

    @property
    def seg_end(self) -> np.ndarray:
        return np.append(self.line_angles[1:], self.line_angles[0] + math.pi)

    @property
    def segments(self) -> np.ndarray:
        return np.column_stack((self.seg_start, self.seg_end))

    @property
    def midpoints(self) -> np.ndarray:
        mid = 0.5 * (self.seg_start + self.seg_end)
        return np.column_stack((np.cos(mid), np.sin(mid)))


def build_partition(v: np.ndarray, start: int = 0, tol: float = LINE_TOL) -> TangentPartition:
    """Group the normals by tangent line and order the lines counterclockwise.

    ``v`` has one row per channel; zero rows have no tangent line and are left
    out. ``start`` picks which line plays the role of the first one.
    """
    nz = np.flatnonzero(np.any(v != 0.0, axis=1))
    if nz.size == 0:
        raise ValueError("no nonzero normal vectors")
    # direction of the line orthogonal to v_n, folded onto [0, pi)
    ang = np.mod(np.arctan2(v[nz, 1], v[nz, 0]) + 0.5 * math.pi, math.pi)
    order = np.argsort(ang, kind="stable")
    ang = ang[order]
    members = nz[order]

    new_line = np.empty(ang.size, dtype=bool)
    new_line[0] = True
    new_line[1:] = np.diff(ang) > tol
    gid = np.cumsum(new_line) - 1
    n_lines = int(gid[-1]) + 1
    # a line just below pi is the same line as one just above 0
    if n_lines > 1 and ang[0] + math.pi - ang[-1] <= tol:
        last = gid == n_lines - 1
        gid[last] = 0
        ang = np.where(last, ang - math.pi, ang)
        n_lines -= 1
        resort = np.argsort(gid, kind="stable")
        gid, ang, members = gid[resort], ang[resort], members[resort]

    first = np.flatnonzero(np.r_[True, np.diff(gid) != 0])
    line_angles = ang[first]
    offsets = np.append(first, ang.size)

    start %= n_lines
    if start:
        split = offsets[start]
        members = np.concatenate((members[split:], members[:split]))
        line_angles = np.concatenate((line_angles[start:], line_angles[:start] + math.pi))
        sizes = np.diff(offsets)
        sizes = np.concatenate((sizes[start:], sizes[:start]))
        offsets = np.concatenate(([0], np.cumsum(sizes)))
    return TangentPartition(line_angles, members, offsets)


@dataclass(frozen=True)
class SegmentCandidate:
    w: np.ndarray
    y_star: np.ndarray
    objective: float


def coefficients_from_scratch(part: TangentPartition, v: np.ndarray) -> np.ndarray:
    """``w_m = sum_n sgn(v_n . y'_m) v_n`` for every arc; O(N*M), for checking."""
    s = sgn(v @ part.midpoints.T)  # (N+1, M)
    return s.T @ v


def sweep_coefficients(part: TangentPartition, v: np.ndarray) -> np.ndarray:
    """All ``w_m`` by the incremental update across each crossed line.

    ``w_{m+1} = w_m - 2 * sum_{n in V_{m+1}} sgn(v_n . y'_m) v_n`` with
    ``y'_m`` the midpoint of arc m. The running sum is a cumulative sum.
    """
    mids = part.midpoints
    w1 = sgn(v @ mids[0]) @ v
    if part.m == 1:
        return w1[None, :]
    sizes = np.diff(part.offsets)
    gid = np.repeat(np.arange(part.m), sizes)
    tail = gid >= 1
    idx = part.members[tail]
    prev_mid = mids[gid[tail] - 1]
    s = sgn(np.einsum("ij,ij->i", v[idx], prev_mid))
    flip = 2.0 * s[:, None] * v[idx]
    delta = np.zeros((part.m, 2))
    np.add.at(delta, gid[tail], flip)
    return w1[None, :] - np.cumsum(delta, axis=0)


def _project_to_arcs(w: np.ndarray, start: np.ndarray, end: np.ndarray):
    """Maximize ``w_m . y`` over the closed arc [start_m, end_m] of the unit circle."""
    norm = np.hypot(w[:, 0], w[:, 1])
    phi = np.arctan2(w[:, 1], w[:, 0])
    width = end - start
    rel = np.mod(phi - start, 2.0 * math.pi)
    inside = rel <= width
    ys = np.column_stack((np.cos(start), np.sin(start)))
    ye = np.column_stack((np.cos(end), np.sin(end)))
    use_end = np.einsum("ij,ij->i", w, ye) > np.einsum("ij,ij->i", w, ys)
    y = np.where(use_end[:, None], ye, ys)
    safe = np.where(norm > 0, norm, 1.0)
    y = np.where(inside[:, None] & (norm[:, None] > 0), w / safe[:, None], y)
    obj = np.einsum("ij,ij->i", w, y) ** 2
    obj = np.where(norm > 0, obj, 0.0)
    return y, obj


def segment_candidates(inst: Instance, start: int = 0) -> tuple[TangentPartition, list[SegmentCandidate]]:
    v = normal_matrix(inst)
    part = build_partition(v, start=start)
    w = sweep_coefficients(part, v)
    y, obj = _project_to_arcs(w, part.seg_start, part.seg_end)
    return part, [SegmentCandidate(w[i], y[i], float(obj[i])) for i in range(part.m)]


def solve_binary_optimal(inst: Instance, start: int = 0) -> BeamConfig:
    """Globally optimal binary beam (phases in {pi, 2*pi}).

    Rank-one instances are solved by sign matching; otherwise the tangent-line
    sweep evaluates every arc and keeps the best one (first in sweep order on
    ties).
    """
    if inst.n == 0:
        return BeamConfig((), BINARY)
    rank = detect_rank(inst)
    if isinstance(rank, RankOne):
        return solve_rank_one(rank.quotients)

    v = normal_matrix(inst)
    part = build_partition(v, start=start)
    w = sweep_coefficients(part, v)
    _, obj = _project_to_arcs(w, part.seg_start, part.seg_end)
    best = int(np.argmax(obj))

    # x_n = sgn(v0.y* * vn.y*). Signs are read at the arc midpoint: they agree
    # with the signs at y* wherever those are nonzero, and stay well defined
    # when y* sits on a line (notably v0's, where sgn(v0.y*) would be 0).
    s = sgn(v @ part.midpoints[best])
    x = s[0] * s[1:]
    x[inst.betas == 0.0] = 1.0
    return BeamConfig.from_signs(x)
