"""Piecewise paths in C^2 and branch-continuous integrals of dlog forms.

Paths are words in straight segments and coordinate circles.  Integrals of
``sum m_i dz/(z - a_i)`` are accumulated step by step as principal logs of
ratios; the steps are refined until each one is short enough that the
principal branch is the continuous one, so no global branch cut is ever
used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

CPoint2 = tuple[complex, complex]

DEFAULT_CLEARANCE = 1e-6
MAX_STEP_LOG = 0.5
CLOSE_TOL = 1e-12


class PathError(Exception):
    pass


class PoleTooClose(PathError):
    def __init__(self, pole: complex, distance: float):
        super().__init__(f"path passes within {distance:.3g} of pole {pole}")
        self.pole = pole
        self.distance = distance


class NotClosed(PathError):
    pass


class NonIntegerWinding(PathError):
    pass


class EpsilonTooLarge(PathError):
    pass


def _c2(p: Sequence[complex]) -> CPoint2:
    return (complex(p[0]), complex(p[1]))


@dataclass(frozen=True)
class Segment:
    start: CPoint2
    end: CPoint2

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", _c2(self.start))
        object.__setattr__(self, "end", _c2(self.end))
        if self.start == self.end:
            raise PathError("segment endpoints must differ")

    def at(self, t: np.ndarray) -> np.ndarray:
        a = np.array(self.start)
        b = np.array(self.end)
        return a[None, :] + (b - a)[None, :] * t[:, None]

    def deriv(self, t: np.ndarray) -> np.ndarray:
        d = np.array(self.end) - np.array(self.start)
        return np.broadcast_to(d, (len(t), 2)).copy()

    def distance_to(self, axis: int, pole: complex) -> float:
        a, b = self.start[axis], self.end[axis]
        d = b - a
        if d == 0:
            return abs(a - pole)
        s = ((pole - a) * d.conjugate()).real / abs(d) ** 2
        s = min(1.0, max(0.0, s))
        return abs(a + s * d - pole)

    def min_steps(self, axis: int, pole: complex) -> int:
        return 1


@dataclass(frozen=True)
class CoordCircle:
    """Circle or arc in one coordinate (axis 0 = x, 1 = y), the other held fixed.

    ``turns`` may be fractional (0.25 is a quarter arc).
    """

    axis: int
    center: complex
    radius: float
    turns: float
    other: complex
    start_angle: float = 0.0

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise PathError("circle radius must be positive")
        if self.turns == 0:
            raise PathError("circle must have nonzero turns")
        if self.axis not in (0, 1):
            raise PathError("axis must be 0 or 1")

    def _z(self, t: np.ndarray) -> np.ndarray:
        th = self.start_angle + 2 * math.pi * self.turns * t
        return self.center + self.radius * np.exp(1j * th)

    def at(self, t: np.ndarray) -> np.ndarray:
        out = np.empty((len(t), 2), dtype=complex)
        out[:, self.axis] = self._z(t)
        out[:, 1 - self.axis] = self.other
        return out

    def deriv(self, t: np.ndarray) -> np.ndarray:
        out = np.zeros((len(t), 2), dtype=complex)
        out[:, self.axis] = 2j * math.pi * self.turns * (self._z(t) - self.center)
        return out

    @property
    def start(self) -> CPoint2:
        return _c2(self.at(np.array([0.0]))[0])

    @property
    def end(self) -> CPoint2:
        return _c2(self.at(np.array([1.0]))[0])

    def distance_to(self, axis: int, pole: complex) -> float:
        if axis != self.axis:
            return abs(self.other - pole)
        return abs(abs(pole - self.center) - self.radius)

    def min_steps(self, axis: int, pole: complex) -> int:
        # keep the pole outside the sliver between each arc and its chord
        if axis != self.axis:
            return 1
        dist = self.distance_to(axis, pole)
        ratio = min(1.0, 0.25 * dist / self.radius)
        half = math.acos(1.0 - ratio)
        return max(1, math.ceil(abs(self.turns) * math.pi / half))


Elementary = Union[Segment, CoordCircle]


@dataclass(frozen=True)
class Inverse:
    piece: Elementary


@dataclass(frozen=True)
class Commutator:
    a: "PathWord"
    b: "PathWord"


@dataclass(frozen=True)
class Oriented:
    """An elementary piece traversed forward or backward."""

    piece: Elementary
    reverse: bool = False

    def _t(self, t: np.ndarray) -> np.ndarray:
        return 1.0 - t if self.reverse else t

    def at(self, t: np.ndarray) -> np.ndarray:
        return self.piece.at(self._t(t))

    def deriv(self, t: np.ndarray) -> np.ndarray:
        d = self.piece.deriv(self._t(t))
        return -d if self.reverse else d

    @property
    def start(self) -> CPoint2:
        return self.piece.end if self.reverse else self.piece.start

    @property
    def end(self) -> CPoint2:
        return self.piece.start if self.reverse else self.piece.end

    def inverse(self) -> "Oriented":
        return Oriented(self.piece, not self.reverse)


Item = Union[Segment, CoordCircle, Inverse, Commutator, "PathWord", Oriented]


def _close(p: CPoint2, q: CPoint2, tol: float = CLOSE_TOL) -> bool:
    scale = max(1.0, abs(p[0]), abs(p[1]))
    return abs(p[0] - q[0]) <= tol * scale and abs(p[1] - q[1]) <= tol * scale


def _expand(item: Item) -> list[Oriented]:
    if isinstance(item, Oriented):
        return [item]
    if isinstance(item, (Segment, CoordCircle)):
        return [Oriented(item)]
    if isinstance(item, Inverse):
        return [Oriented(item.piece, True)]
    if isinstance(item, Commutator):
        a, b = item.a.pieces, item.b.pieces
        return a + b + _invert(a) + _invert(b)
    if isinstance(item, PathWord):
        return list(item.pieces)
    raise TypeError(f"not a path item: {item!r}")


def _invert(ps: list[Oriented]) -> list[Oriented]:
    return [p.inverse() for p in reversed(ps)]


class PathWord:
    """A composable path; ``a * b`` runs a then b."""

    def __init__(self, items: Iterable[Item] = ()):
        ps: list[Oriented] = []
        for it in items:
            ps.extend(_expand(it))
        for p, q in zip(ps, ps[1:]):
            if not _close(p.end, q.start):
                raise PathError(f"pieces do not join: {p.end} vs {q.start}")
        self.pieces: list[Oriented] = ps

    @property
    def empty(self) -> bool:
        return not self.pieces

    @property
    def start(self) -> CPoint2:
        return self.pieces[0].start

    @property
    def end(self) -> CPoint2:
        return self.pieces[-1].end

    @property
    def closed(self) -> bool:
        return not self.pieces or _close(self.start, self.end)

    def inverse(self) -> "PathWord":
        return PathWord(_invert(self.pieces))

    def __mul__(self, other: "PathWord") -> "PathWord":
        return PathWord(self.pieces + other.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def describe(self) -> list[dict]:
        out = []
        for p in self.pieces:
            e = p.piece
            if isinstance(e, Segment):
                d = {"kind": "segment", "from": _cjson(e.start), "to": _cjson(e.end)}
            else:
                d = {
                    "kind": "circle",
                    "axis": "xy"[e.axis],
                    "center": [e.center.real, e.center.imag],
                    "radius": e.radius,
                    "turns": e.turns,
                    "other": [e.other.real, e.other.imag],
                    "start_angle": e.start_angle,
                }
            d["reverse"] = p.reverse
            out.append(d)
        return out


def _cjson(p: CPoint2) -> list[list[float]]:
    return [[p[0].real, p[0].imag], [p[1].real, p[1].imag]]


def commutator(a: PathWord, b: PathWord) -> PathWord:
    return PathWord([Commutator(a, b)])


@dataclass(frozen=True)
class LogForm:
    """``sum m_i d(x-a_i)/(x-a_i) + sum q_j d(y-b_j)/(y-b_j)``."""

    xpoles: tuple[tuple[complex, int], ...] = ()
    ypoles: tuple[tuple[complex, int], ...] = ()

    @classmethod
    def make(cls, xpoles=(), ypoles=()) -> "LogForm":
        return cls(
            tuple((complex(a), int(m)) for a, m in xpoles if m),
            tuple((complex(b), int(q)) for b, q in ypoles if q),
        )

    def poles(self) -> list[tuple[int, complex, int]]:
        return [(0, a, m) for a, m in self.xpoles] + [(1, b, q) for b, q in self.ypoles]

    def __call__(self, p: CPoint2) -> complex:
        """Exact value of the primitive ``prod (x-a)^m (y-b)^q`` at p."""
        out = 1 + 0j
        for ax, a, m in self.poles():
            out *= (p[ax] - a) ** m
        return out


@dataclass(frozen=True)
class PoleSet:
    """Flat arrays of poles shared by one or several forms."""

    axis: np.ndarray
    pole: np.ndarray

    @classmethod
    def of(cls, poles: Sequence[tuple[int, complex]]) -> "PoleSet":
        return cls(
            np.array([p[0] for p in poles], dtype=int),
            np.array([p[1] for p in poles], dtype=complex),
        )

    def __len__(self) -> int:
        return len(self.pole)

    def offsets(self, pts: np.ndarray) -> np.ndarray:
        """``z - pole`` for every point (rows) and pole (columns)."""
        return pts[:, self.axis] - self.pole[None, :]


def check_clearance(piece: Oriented, poles: PoleSet, clearance: float) -> None:
    for ax, a in zip(poles.axis, poles.pole):
        d = piece.piece.distance_to(int(ax), complex(a))
        if d < clearance:
            raise PoleTooClose(complex(a), d)


def step_grid(piece: Oriented, poles: PoleSet, resolution: int = 1, clearance: float = DEFAULT_CLEARANCE) -> np.ndarray:
    """Parameter grid on [0, 1] fine enough for branch tracking.

    Starts from ``resolution`` uniform steps (more for circles close to a
    pole), then bisects any step whose log increment for some pole exceeds
    the threshold in modulus.
    """
    check_clearance(piece, poles, clearance)
    n = max(1, resolution)
    for ax, a in zip(poles.axis, poles.pole):
        n = max(n, piece.piece.min_steps(int(ax), complex(a)))
    t = np.linspace(0.0, 1.0, n + 1)
    if len(poles) == 0:
        return t
    for _ in range(60):
        z = poles.offsets(piece.at(t))
        d = np.log(z[1:] / z[:-1])
        bad = np.any(np.abs(d) > MAX_STEP_LOG, axis=1)
        if not bad.any():
            return t
        mids = 0.5 * (t[:-1][bad] + t[1:][bad])
        t = np.sort(np.concatenate([t, mids]))
    raise PathError("step refinement did not converge")


def pole_increments(piece: Oriented, poles: PoleSet, t: np.ndarray) -> np.ndarray:
    z = poles.offsets(piece.at(t))
    return np.log(z[1:] / z[:-1])


def log_integral(omega: LogForm, gamma: PathWord, clearance: float = DEFAULT_CLEARANCE) -> complex:
    poles = omega.poles()
    if not poles or gamma.empty:
        return 0j
    ps = PoleSet.of([(ax, a) for ax, a, _ in poles])
    mult = np.array([m for _, _, m in poles], dtype=float)
    total = 0j
    for piece in gamma.pieces:
        t = step_grid(piece, ps, 1, clearance)
        total += complex(np.sum(pole_increments(piece, ps, t) @ mult))
    return total


def log_integrals(forms: Sequence[LogForm], gamma: PathWord, clearance: float = DEFAULT_CLEARANCE) -> list[complex]:
    """Integrals of several forms over one path, sharing the step grid."""
    uniq: dict[tuple[int, complex], int] = {}
    for f in forms:
        for ax, a, _ in f.poles():
            uniq.setdefault((ax, a), len(uniq))
    if not uniq or gamma.empty:
        return [0j] * len(forms)
    W = np.zeros((len(uniq), len(forms)))
    for j, f in enumerate(forms):
        for ax, a, m in f.poles():
            W[uniq[(ax, a)], j] += m
    ps = PoleSet.of(list(uniq))
    total = np.zeros(len(forms), complex)
    for piece in gamma.pieces:
        t = step_grid(piece, ps, 1, clearance)
        total += pole_increments(piece, ps, t).sum(axis=0) @ W
    return [complex(v) for v in total]


def winding_number(omega: LogForm, gamma: PathWord, clearance: float = DEFAULT_CLEARANCE, tol: float = 1e-6) -> int:
    if not gamma.closed:
        raise NotClosed("winding number needs a closed path")
    w = log_integral(omega, gamma, clearance) / (2j * math.pi)
    k = round(w.real)
    if abs(w - k) > tol:
        raise NonIntegerWinding(f"winding {w} is not an integer")
    return int(k)


def _lateral(start: CPoint2, end: CPoint2, delta: float) -> CPoint2:
    out = []
    for ax in range(2):
        d = end[ax] - start[ax]
        out.append(0j if d == 0 else 1j * d / abs(d) * delta)
    return (out[0], out[1])


def straight_path(
    start: Sequence[complex],
    end: Sequence[complex],
    avoid: Sequence[tuple[int, complex]] = (),
    clearance: float = DEFAULT_CLEARANCE,
    offset: float = 1e-3,
) -> PathWord:
    """Segment from start to end, detoured sideways if it grazes a pole.

    The detour runs start -> start+h -> end+h -> end with h a lateral shift
    of ``offset`` times the segment length (rotated a quarter turn in every
    coordinate that moves).  A few shift sizes are tried before giving up.
    """
    a, b = _c2(start), _c2(end)
    seg = Segment(a, b)
    if all(seg.distance_to(ax, p) >= clearance for ax, p in avoid):
        return PathWord([seg])
    length = math.hypot(abs(b[0] - a[0]), abs(b[1] - a[1]))
    worst = (0j, 0.0)
    for factor in (1.0, 2.0, 4.0, 0.5, 0.25, 8.0):
        h = _lateral(a, b, offset * factor * length)
        a2 = (a[0] + h[0], a[1] + h[1])
        b2 = (b[0] + h[0], b[1] + h[1])
        legs = [Segment(a, a2), Segment(a2, b2), Segment(b2, b)]
        dmin = min(((leg.distance_to(ax, p), p) for leg in legs for ax, p in avoid), key=lambda v: v[0])
        if dmin[0] >= clearance:
            return PathWord(legs)
        worst = (dmin[1], dmin[0])
    raise PoleTooClose(worst[0], worst[1])


def torus_boundary(
    P: Sequence[complex],
    eps0: float,
    eps1: float,
    c0_axis: int = 1,
    turns: int = -1,
    angles: tuple[float, float] = (0.0, 0.0),
    Q: Sequence[complex] | None = None,
    avoid: Sequence[tuple[int, complex]] = (),
    clearance: float = DEFAULT_CLEARANCE,
) -> PathWord:
    """Commutator loop [sigma, tau] on the boundary of a small torus at P.

    ``c0_axis`` is the coordinate cutting out C0 near P (the ``x0``
    direction): 1 when C0 is horizontal, 0 when vertical.  sigma circles the
    transverse coordinate with radius eps1 while ``x0`` stays at eps0, tau
    circles ``x0`` with radius eps0 while the transverse coordinate stays at
    eps1.  Both run ``turns`` times (negative by default).  ``angles`` are the
    base-point angles (tau's, sigma's).  With ``Q`` the loop is conjugated by
    the access path from Q to the base point: a leg along C0's direction,
    then a leg off it.  ``avoid`` lists other poles;
    both radii must stay below half their distance to P.
    """
    p = _c2(P)
    ja = 1 - c0_axis
    dists = [abs(a - p[ax]) for ax, a in avoid if abs(a - p[ax]) > 0]
    if dists and max(eps0, eps1) >= 0.5 * min(dists):
        raise EpsilonTooLarge(f"epsilon {max(eps0, eps1)} exceeds half the separation {min(dists)}")
    th0, th1 = angles
    x0 = eps0 * complex(math.cos(th0), math.sin(th0))
    xj = eps1 * complex(math.cos(th1), math.sin(th1))
    base = [0j, 0j]
    base[c0_axis] = p[c0_axis] + x0
    base[ja] = p[ja] + xj
    sigma = PathWord([CoordCircle(ja, p[ja], eps1, turns, base[c0_axis], th1)])
    tau = PathWord([CoordCircle(c0_axis, p[c0_axis], eps0, turns, base[ja], th0)])
    loop = commutator(sigma, tau)
    if Q is None:
        return loop
    q = _c2(Q)
    mid = [0j, 0j]
    mid[ja], mid[c0_axis] = base[ja], q[c0_axis]
    access = PathWord()
    # along C0 first, then off it; zero-length legs are skipped
    for a, b in ((q, _c2(mid)), (_c2(mid), _c2(base))):
        if a != b:
            access = access * straight_path(a, b, avoid, clearance)
    return access * loop * access.inverse()


def torus_base(P: Sequence[complex], eps0: float, eps1: float, c0_axis: int = 1) -> CPoint2:
    p = list(_c2(P))
    p[c0_axis] += eps0
    p[1 - c0_axis] += eps1
    return (p[0], p[1])
