"""Numerical continuation of lifts through orbit maps.

Given orbit maps ``p: V -> C^m`` and ``q: W -> C^n`` and a map ``f`` between
their images, a lift is a ``w(t)`` with ``q(w(t)) = f(p(v(t)))`` along a path
``v(t)`` in ``V``.  Away from reflection hyperplanes the fiber of ``q`` is a
free orbit and the lift is pinned down by continuity, checked against the
fiber gap.  Near a reflection hyperplane of order ``r`` the ``r`` nearby
fiber points merge; there the lift is chosen so that the ratio of the
transverse coordinates upstairs and downstairs varies continuously.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .group import Representation, is_pseudoreflection, isotropy_classes
from .invariants import InvariantBasis
from .quasilinear import QuotientMap, codim_one_matching
from .strata import gauss_newton, stratify

__all__ = [
    "PathSpec",
    "WallEvent",
    "LiftedPath",
    "MonodromyResult",
    "LiftingError",
    "NoSolution",
    "StepCollapse",
    "PathTooCloseToDeepLocus",
    "TangentialApproach",
    "TrackingLost",
    "fiber",
    "lift_along_path",
    "monodromy",
    "circle_loop",
]


class LiftingError(RuntimeError):
    pass


class NoSolution(LiftingError):
    """Multi-start Gauss-Newton found no point of the fiber."""


class StepCollapse(LiftingError):
    """Step halving exhausted its budget."""


class PathTooCloseToDeepLocus(LiftingError):
    """The path comes within ``wall_margin`` of a codimension >= 2 fixed space."""


class TangentialApproach(LiftingError):
    """The path meets a reflection hyperplane without crossing it transversally."""


class TrackingLost(LiftingError):
    """A loop's endpoint is not a group translate of its start."""


@dataclass(frozen=True)
class PathSpec:
    """Piecewise-linear path through ``waypoints`` with ``samples_per_segment`` steps per piece."""

    waypoints: tuple[tuple[complex, ...], ...]
    samples_per_segment: int = 16
    closed: bool = False

    def __post_init__(self):
        pts = tuple(tuple(complex(x) for x in p) for p in self.waypoints)
        object.__setattr__(self, "waypoints", pts)
        if len(pts) < 2:
            raise ValueError("a path needs at least two waypoints")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("waypoints have different dimensions")
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            if a == b:
                raise ValueError("waypoints %d and %d coincide" % (k, k + 1))
        if self.closed and pts[0] != pts[-1]:
            raise ValueError("closed path must end at its first waypoint")
        if self.samples_per_segment < 1:
            raise ValueError("samples_per_segment must be >= 1")

    @property
    def dim(self) -> int:
        return len(self.waypoints[0])

    @property
    def segments(self) -> int:
        return len(self.waypoints) - 1

    def point(self, t: float) -> np.ndarray:
        """Position at parameter ``t`` in ``[0, segments]``."""
        k = min(int(math.floor(t)), self.segments - 1)
        s = t - k
        a = np.asarray(self.waypoints[k])
        b = np.asarray(self.waypoints[k + 1])
        return a + s * (b - a)

    def parameters(self) -> list[float]:
        n = self.samples_per_segment
        return [k + j / n for k in range(self.segments) for j in range(n)] + [float(self.segments)]

    def to_json(self) -> dict:
        return {
            "waypoints": [[[z.real, z.imag] for z in p] for p in self.waypoints],
            "samples_per_segment": self.samples_per_segment,
            "closed": self.closed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PathSpec":
        def num(x):
            return complex(x[0], x[1]) if isinstance(x, list) else complex(x)
        return cls(tuple(tuple(num(x) for x in p) for p in data["waypoints"]),
                   int(data.get("samples_per_segment", 16)), bool(data.get("closed", False)))


def circle_loop(center: Sequence[complex], radius: float, winding: int = 1, coordinate: int = 0,
                waypoints: int = 64, samples_per_segment: int = 4) -> PathSpec:
    """Polygonal loop ``center + radius e^{2 pi i winding s}`` in one coordinate."""
    c = np.asarray(center, dtype=complex)
    total = waypoints * max(abs(winding), 1)
    pts = []
    for j in range(total + 1):
        p = c.copy()
        if winding:
            p[coordinate] += radius * np.exp(2j * np.pi * winding * j / total)
        else:
            # a loop that goes out and back without enclosing anything
            p[coordinate] += radius * (1 + 0.5j * math.sin(2 * np.pi * j / total)) \
                if 0 < j < total else radius
        pts.append(tuple(p))
    pts[-1] = pts[0]
    return PathSpec(tuple(pts), samples_per_segment, closed=True)


# ---------------------------------------------------------------------------
# fiber geometry
# ---------------------------------------------------------------------------


@dataclass
class _Wall:
    functional: np.ndarray  # unit row vector vanishing on the hyperplane
    element: int            # pseudoreflection generating the isotropy group
    order: int
    component: int


def _walls(rep: Representation) -> list[_Wall]:
    out = []
    comp = 0
    for cls in isotropy_classes(rep):
        if rep.dim - cls.fixed_dim != 1:
            continue
        for member in cls.members:
            for i in member.element_indices:
                ok, r = is_pseudoreflection(rep.elements[i])
                if ok and r == member.order:
                    M = rep.elements[i].numeric() - np.eye(rep.dim)
                    row = M[int(np.argmax(np.linalg.norm(M, axis=1)))]
                    out.append(_Wall(row / np.linalg.norm(row), i, r, comp))
                    break
        comp += 1
    return out


def _deep_bases(basis: InvariantBasis) -> list[np.ndarray]:
    strat = stratify(basis)
    out = []
    for space in strat.deep_locus:
        if not space:
            out.append(np.zeros((basis.rep.dim, 0), dtype=complex))
            continue
        B = np.array([[complex(x) for x in v] for v in space], dtype=complex).T
        Q, _ = np.linalg.qr(B)
        out.append(Q)
    return out


def _segment_distance(a: np.ndarray, b: np.ndarray, Q: np.ndarray) -> float:
    """Distance from the segment ``[a, b]`` to the subspace spanned by the columns of ``Q``."""
    def perp(x):
        return x - Q @ (Q.conj().T @ x) if Q.shape[1] else x
    pa, pd = perp(a), perp(b - a)
    den = float(np.vdot(pd, pd).real)
    s = 0.0 if den == 0 else min(1.0, max(0.0, -float(np.vdot(pd, pa).real) / den))
    return float(np.linalg.norm(pa + s * pd))


def _dedupe(points: Sequence[np.ndarray], tol: float) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol for q in out):
            out.append(p)
    return out


class _FiberSolver:
    def __init__(self, basis: InvariantBasis, tol: float, seed: int, starts: int = 16):
        self.basis = basis
        self.qnum = basis.numeric()
        self.group = [g.numeric() for g in basis.rep.elements]
        self.tol = tol
        self.rng = np.random.default_rng(seed)
        self.starts = starts
        self.degrees = np.asarray(basis.degrees, dtype=float)

    def residual(self, w: np.ndarray, z: np.ndarray) -> float:
        return float(np.linalg.norm(self.qnum(w) - z))

    def accept(self, res: float, z: np.ndarray) -> bool:
        return res <= self.tol * max(1.0, float(np.linalg.norm(z)))

    def solve(self, z: np.ndarray, guess: np.ndarray | None = None) -> np.ndarray:
        """Some point ``w`` with ``q(w) = z``: Newton from ``guess``, then multi-start."""
        inner = self.tol * 1e-4 * max(1.0, float(np.linalg.norm(z)))
        best, best_res = None, math.inf
        if guess is not None:
            X, res = gauss_newton(self.qnum, z, guess[None, :].astype(complex), 60, inner)
            best, best_res = X[0], float(res[0])
            if self.accept(best_res, z):
                return best
        scale = max((abs(zj) ** (1.0 / d) for zj, d in zip(z, self.degrees)), default=0.0)
        scale = scale if scale > 0 else 1.0
        dim = self.basis.rep.dim
        X0 = (self.rng.standard_normal((self.starts, dim))
              + 1j * self.rng.standard_normal((self.starts, dim))) * scale / math.sqrt(2 * dim)
        X, res = gauss_newton(self.qnum, z, X0, 80, inner)
        k = int(np.argmin(res))
        if res[k] < best_res:
            best, best_res = X[k], float(res[k])
        if not self.accept(best_res, z):
            raise NoSolution("no fiber point found for %s (best residual %.3g)" % (z, best_res))
        return best

    def orbit(self, w: np.ndarray) -> list[np.ndarray]:
        return [g @ w for g in self.group]


def fiber(basis: InvariantBasis, z: Sequence[complex], tol: float = 1e-8,
          seed: int = 0) -> list[np.ndarray]:
    """All points of ``W`` over ``z``: one Newton solution and its group orbit."""
    solver = _FiberSolver(basis, tol, seed)
    zz = np.asarray(z, dtype=complex)
    if zz.shape != (basis.m,):
        raise ValueError("target has shape %s, expected (%d,)" % (zz.shape, basis.m))
    w = solver.solve(zz)
    scale = max(1.0, float(np.linalg.norm(w)))
    # near a fixed point the solution is only accurate to about tol^(1/deg);
    # collapse each cluster of orbit points to its centroid
    radius = 10 * tol ** (1.0 / max(basis.degrees)) * scale
    clusters: list[list[np.ndarray]] = []
    for p in solver.orbit(w):
        for c in clusters:
            if np.linalg.norm(p - c[0]) <= radius:
                c.append(p)
                break
        else:
            clusters.append([p])
    return [np.mean(c, axis=0) if len(c) > 1 else c[0] for c in clusters]


def _gap(points: Sequence[np.ndarray]) -> float:
    best = math.inf
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            best = min(best, float(np.linalg.norm(points[i] - points[j])))
    return best


# ---------------------------------------------------------------------------
# continuation
# ---------------------------------------------------------------------------


@dataclass
class WallEvent:
    t: float
    component: int
    order: int
    branch: int
    admissible: list[np.ndarray] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "component": self.component,
            "order": self.order,
            "branch": self.branch,
            "admissible": [[[complex(x).real, complex(x).imag] for x in p] for p in self.admissible],
        }


@dataclass
class LiftedPath:
    base: PathSpec
    ts: list[float]
    downstairs: list[np.ndarray]
    upstairs: list[np.ndarray]
    residuals: list[float]
    wall_events: list[WallEvent]

    @property
    def endpoint(self) -> np.ndarray:
        return self.upstairs[-1]

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    def to_json(self) -> dict:
        def vec(p):
            return [[complex(x).real, complex(x).imag] for x in p]
        return {
            "ts": self.ts,
            "downstairs": [vec(p) for p in self.downstairs],
            "upstairs": [vec(p) for p in self.upstairs],
            "residuals": self.residuals,
            "max_residual": self.max_residual,
            "wall_events": [e.to_json() for e in self.wall_events],
        }


@dataclass
class _WallState:
    rho: complex | None = None
    closest: float = math.inf
    t_prev: float = 0.0
    pending: WallEvent | None = None


def _track(solver: _FiberSolver, path: PathSpec, target: Callable[[np.ndarray], np.ndarray],
           w0: np.ndarray, v_walls: list[_Wall], w_walls: list[_Wall], wall_margin: float,
           wall_zone: float, max_halvings: int, require_free: bool) -> LiftedPath:
    params = path.parameters()
    base_step = 1.0 / path.samples_per_segment
    cur_t = params[0]
    cur_v = path.point(cur_t)
    cur_w = np.asarray(w0, dtype=complex)
    z0 = target(cur_v)
    res0 = solver.residual(cur_w, z0)
    if not solver.accept(res0, z0):
        raise LiftingError("start point does not lie over the path start (residual %.3g)" % res0)
    ts, down, up, resid = [cur_t], [z0], [cur_w], [res0]
    events: list[WallEvent] = []
    state = _WallState()
    queue = deque(params[1:])
    while queue:
        t = queue[0]
        v = path.point(t)
        z = target(v)
        state.t_prev = cur_t
        try:
            w = _step(solver, cur_v, cur_w, v, z, v_walls, w_walls, wall_margin, wall_zone,
                      state, t, require_free)
        except _Rejected:
            if t - cur_t < base_step / 2 ** max_halvings:
                raise StepCollapse("step collapse at t = %.6g after %d halvings" % (cur_t, max_halvings))
            queue.appendleft((cur_t + t) / 2)
            continue
        queue.popleft()
        if state.pending is not None and t >= state.pending.t and not _in_zone(v, v_walls, wall_zone):
            events.append(_close_event(solver, state, w, w_walls))
        cur_t, cur_v, cur_w = t, v, w
        ts.append(t)
        down.append(z)
        up.append(w)
        resid.append(solver.residual(w, z))
    if state.pending is not None:
        events.append(_close_event(solver, state, cur_w, w_walls))
    return LiftedPath(path, ts, down, up, resid, events)


class _Rejected(Exception):
    pass


def _nearest(walls: list[_Wall], x: np.ndarray) -> tuple[_Wall | None, float]:
    best, dist = None, math.inf
    for wall in walls:
        d = abs(complex(wall.functional @ x))
        if d < dist:
            best, dist = wall, d
    return best, dist


def _in_zone(v, v_walls, wall_zone) -> bool:
    return bool(v_walls) and _nearest(v_walls, v)[1] < wall_zone


def _close_event(solver: _FiberSolver, state: _WallState, w: np.ndarray,
                 w_walls: list[_Wall]) -> WallEvent:
    ev = state.pending
    wall, _ = _nearest(w_walls, w)
    g = solver.group[wall.element]
    cands = [w]
    for _ in range(wall.order - 1):
        cands.append(g @ cands[-1])
    # admissible branches in order of the argument of their transverse coordinate
    def angle(c):
        a = float(np.angle(complex(wall.functional @ c))) % (2 * math.pi)
        return 0.0 if a > 2 * math.pi - 1e-9 else a
    keyed = sorted(cands, key=angle)
    ev.admissible = keyed
    ev.branch = next(i for i, c in enumerate(keyed) if np.linalg.norm(c - w) == 0)
    state.pending = None
    state.closest = math.inf
    return ev


def _step(solver, cur_v, cur_w, v, z, v_walls, w_walls, wall_margin, wall_zone,
          state: _WallState, t: float, require_free: bool) -> np.ndarray:
    try:
        w_any = solver.solve(z, cur_w)
    except NoSolution:
        raise _Rejected
    orbit = solver.orbit(w_any)
    w = min(orbit, key=lambda p: float(np.linalg.norm(p - cur_w)))
    move = float(np.linalg.norm(w - cur_w))
    vwall, vdist = _nearest(v_walls, v) if v_walls else (None, math.inf)
    if vwall is not None and vdist < wall_zone and w_walls:
        wwall, _ = _nearest(w_walls, w)
        if wwall.order != vwall.order:
            raise LiftingError("wall orders differ: %d upstairs in V, %d in W"
                               % (vwall.order, wwall.order))
        d = v - cur_v
        if min(vdist, abs(complex(vwall.functional @ cur_v))) < wall_margin and np.linalg.norm(d) > 0:
            if abs(complex(vwall.functional @ d)) < 0.05 * float(np.linalg.norm(d)):
                raise TangentialApproach("path meets a reflection hyperplane tangentially at t = %.6g" % t)
        g = solver.group[wwall.element]
        cands = [w]
        for _ in range(wwall.order - 1):
            cands.append(g @ cands[-1])
        lam_prev = complex(vwall.functional @ cur_v)
        lam = complex(vwall.functional @ v)
        tiny = 1e-12 * max(1.0, float(np.linalg.norm(v)))
        rho_prev = complex(wwall.functional @ cur_w) / lam_prev if abs(lam_prev) > tiny else state.rho
        if abs(lam) > tiny and rho_prev is not None:
            ratios = [complex(wwall.functional @ c) / lam for c in cands]
            j = int(np.argmin([abs(r - rho_prev) for r in ratios]))
            sep = abs(rho_prev) * abs(1 - np.exp(2j * np.pi / wwall.order))
            if abs(ratios[j] - rho_prev) > sep / 2:
                raise _Rejected
            w = cands[j]
            state.rho = ratios[j]
        elif rho_prev is not None:
            state.rho = rho_prev
        # the remaining fiber points must stay well away
        others = [p for p in orbit if min(np.linalg.norm(p - c) for c in cands) > 1e-9]
        if others and float(np.linalg.norm(w - cur_w)) >= _min_dist(cur_w, others) / 2:
            raise _Rejected
        # closest approach of the step segment to the hyperplane
        dl = lam - lam_prev
        s = 0.0 if dl == 0 else min(1.0, max(0.0, -(lam_prev * dl.conjugate()).real / abs(dl) ** 2))
        approach = abs(lam_prev + s * dl)
        if approach < wall_margin:
            if state.pending is None:
                state.pending = WallEvent(t, vwall.component, vwall.order, 0)
            if approach < state.closest:
                state.closest = approach
                state.pending.t = state.t_prev + s * (t - state.t_prev)
    else:
        pts = _dedupe(orbit, 1e-9 * max(1.0, float(np.linalg.norm(w))))
        if require_free and len(pts) < len(orbit):
            raise LiftingError("fiber over t = %.6g is not a free orbit" % t)
        if len(pts) > 1 and move >= _gap(solver.orbit(cur_w)) / 2:
            raise _Rejected
        if vwall is not None:
            lam = complex(vwall.functional @ v)
            if abs(lam) > 0 and w_walls:
                wwall, _ = _nearest(w_walls, w)
                state.rho = complex(wwall.functional @ w) / lam
    res = solver.residual(w, z)
    if not solver.accept(res, z):
        raise _Rejected
    return w


def _min_dist(x: np.ndarray, pts: Sequence[np.ndarray]) -> float:
    return min(float(np.linalg.norm(x - p)) for p in pts)


def lift_along_path(source: InvariantBasis, target: InvariantBasis, f: QuotientMap,
                    path: PathSpec, seed_point: Sequence[complex], tol: float = 1e-8,
                    wall_margin: float = 1e-3, wall_zone: float = 0.2,
                    max_halvings: int = 30, seed: int = 0,
                    check_matching: bool = True) -> LiftedPath:
    """Continue a lift of ``f`` from ``seed_point`` along ``path`` in ``V``."""
    rep_v = source.rep
    if path.dim != rep_v.dim:
        raise ValueError("path lives in dimension %d, V has dimension %d" % (path.dim, rep_v.dim))
    if len(seed_point) != target.rep.dim:
        raise ValueError("seed point has %d coordinates, W has dimension %d"
                         % (len(seed_point), target.rep.dim))
    for Q in _deep_bases(source):
        for a, b in zip(path.waypoints, path.waypoints[1:]):
            d = _segment_distance(np.asarray(a), np.asarray(b), Q)
            if d <= wall_margin:
                raise PathTooCloseToDeepLocus(
                    "path passes within %.3g of a codimension >= 2 fixed space" % d)
    if check_matching:
        match = codim_one_matching(f, stratify(source), stratify(target), tol=max(tol, 1e-8))
        if not match.ok:
            raise LiftingError("f does not match codimension-one closures with equal orders: %s"
                               % (match.pairs,))
    pnum = source.numeric()
    fnum = f.numeric()
    solver = _FiberSolver(target, tol, seed)

    def down(v: np.ndarray) -> np.ndarray:
        return fnum(pnum(v))

    return _track(solver, path, down, np.asarray(seed_point, dtype=complex),
                  _walls(rep_v), _walls(target.rep), wall_margin, wall_zone, max_halvings,
                  require_free=False)


@dataclass
class MonodromyResult:
    element: int
    distance: float
    path: LiftedPath


def monodromy(basis: InvariantBasis, loop: PathSpec, base_point: Sequence[complex],
              tol: float = 1e-8, seed: int = 0, max_halvings: int = 30) -> MonodromyResult:
    """Group element carrying ``base_point`` to the end of its lift around ``loop``."""
    if not loop.closed:
        raise ValueError("monodromy needs a closed loop")
    if loop.dim != basis.m:
        raise ValueError("loop lives in dimension %d, quotient has %d coordinates" % (loop.dim, basis.m))
    solver = _FiberSolver(basis, tol, seed)

    def down(z: np.ndarray) -> np.ndarray:
        return z

    w0 = np.asarray(base_point, dtype=complex)
    lifted = _track(solver, loop, down, w0, [], [], 0.0, 0.0, max_halvings, require_free=True)
    end = lifted.endpoint
    scale = max(1.0, float(np.linalg.norm(w0)))
    dists = [float(np.linalg.norm(g @ w0 - end)) for g in solver.group]
    k = int(np.argmin(dists))
    if dists[k] > tol * scale:
        raise TrackingLost("loop endpoint is %.3g from the nearest translate of the base point" % dists[k])
    return MonodromyResult(k, dists[k], lifted)
