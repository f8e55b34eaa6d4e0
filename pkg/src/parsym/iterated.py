"""Depth-3 iterated integrals of dlog forms via series transport.

The generating series ``F = 1 + sum X_i int w_i + sum X_i X_j int w_i w_j
+ ...`` is carried along a path as three dense arrays.  On every step the
increment is ``exp(c + A)`` truncated at degree 3, where ``c`` holds the
exact log increments of the letters and ``A`` their Levy area over the
step (Gauss-Legendre in the step parameter).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .paths import DEFAULT_CLEARANCE, LogForm, PathWord, PoleSet, pole_increments, step_grid

_GL_NODES = 8


def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class Letter:
    name: str
    form: LogForm
    tag: tuple[int, int] | None = None


class Alphabet:
    def __init__(self, letters: Sequence[Letter]):
        self.letters = tuple(letters)
        names = [l.name for l in self.letters]
        if len(set(names)) != len(names):
            raise ValueError("letter names must be unique")
        tags = [l.tag for l in self.letters if l.tag is not None]
        if len(set(tags)) != len(tags):
            raise ValueError("letter tags must be unique")
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def of_forms(cls, forms: Sequence[LogForm]) -> "Alphabet":
        return cls([Letter(f"w{i}", f) for i, f in enumerate(forms)])

    @property
    def tagged(self) -> bool:
        return all(l.tag is not None for l in self.letters)


class NCSeries3:
    """Truncated group-like series; ``s1[a]``, ``s2[a,b]``, ``s3[a,b,c]``."""

    def __init__(self, alphabet: Alphabet, s1: np.ndarray, s2: np.ndarray, s3: np.ndarray):
        self.alphabet = alphabet
        self.s1, self.s2, self.s3 = s1, s2, s3

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "NCSeries3":
        L = len(alphabet)
        return cls(
            alphabet,
            np.zeros(L, complex),
            np.zeros((L, L), complex),
            np.zeros((L, L, L), complex),
        )

    def _idx(self, word: Sequence[int | str]) -> tuple[int, ...]:
        return tuple(w if isinstance(w, (int, np.integer)) else self.alphabet.index[w] for w in word)

    def coeff(self, word: Sequence[int | str]) -> complex:
        idx = self._idx(word)
        if len(idx) == 0:
            return 1 + 0j
        arr = (None, self.s1, self.s2, self.s3)[len(idx)]
        return complex(arr[idx])

    def __mul__(self, other: "NCSeries3") -> "NCSeries3":
        a, b = self, other
        return NCSeries3(
            self.alphabet,
            a.s1 + b.s1,
            a.s2 + b.s2 + np.multiply.outer(a.s1, b.s1),
            a.s3 + b.s3 + np.multiply.outer(a.s2, b.s1) + np.multiply.outer(a.s1, b.s2),
        )

    def inverse(self) -> "NCSeries3":
        s1, s2, s3 = self.s1, self.s2, self.s3
        o = np.multiply.outer
        return NCSeries3(
            self.alphabet,
            -s1,
            -s2 + o(s1, s1),
            -s3 + o(s2, s1) + o(s1, s2) - o(o(s1, s1), s1),
        )

    def max_diff(self, other: "NCSeries3") -> float:
        return max(
            float(np.max(np.abs(self.s1 - other.s1), initial=0.0)),
            float(np.max(np.abs(self.s2 - other.s2), initial=0.0)),
            float(np.max(np.abs(self.s3 - other.s3), initial=0.0)),
        )

    def to_dict(self, tol: float = 0.0) -> dict:
        names = [l.name for l in self.alphabet.letters]
        out = {}
        for k, arr in ((1, self.s1), (2, self.s2), (3, self.s3)):
            for idx in itertools.product(range(len(names)), repeat=k):
                v = complex(arr[idx])
                if abs(v) > tol:
                    out[" ".join(names[i] for i in idx)] = [v.real, v.imag]
        return out


def transport(
    alphabet: Alphabet,
    gamma: PathWord,
    resolution: int = 64,
    clearance: float = DEFAULT_CLEARANCE,
    nodes: int = _GL_NODES,
) -> NCSeries3:
    """Generating series of all iterated integrals of length <= 3 along gamma.

    ``resolution`` is the minimum number of steps per elementary piece;
    steps are refined further wherever a pole is close.
    """
    L = len(alphabet)
    uniq: dict[tuple[int, complex], int] = {}
    for letter in alphabet.letters:
        for ax, a, _ in letter.form.poles():
            uniq.setdefault((ax, a), len(uniq))
    W = np.zeros((L, len(uniq)))
    for i, letter in enumerate(alphabet.letters):
        for ax, a, m in letter.form.poles():
            W[i, uniq[(ax, a)]] += m
    ps = PoleSet.of(list(uniq))
    out = NCSeries3.identity(alphabet)
    if gamma.empty or not uniq:
        return out
    gx, gw = _gauss(nodes)
    s1, s2, s3 = out.s1, out.s2, out.s3
    for piece in gamma.pieces:
        t = step_grid(piece, ps, resolution, clearance)
        t0, h = t[:-1], np.diff(t)
        c = pole_increments(piece, ps, t) @ W.T
        tn = (t0[:, None] + h[:, None] * gx[None, :]).ravel()
        z0 = ps.offsets(piece.at(t0))
        zn = ps.offsets(piece.at(tn)).reshape(len(t0), nodes, -1)
        dz = piece.deriv(tn)[:, ps.axis].reshape(len(t0), nodes, -1)
        C = np.log(zn / z0[:, None, :]) @ W.T
        dC = (dz / zn * h[:, None, None]) @ W.T
        Sm = np.einsum("n,sna,snb->sab", gw, C, dC)
        A = 0.5 * (Sm - np.transpose(Sm, (0, 2, 1)))
        e2 = A + 0.5 * c[:, :, None] * c[:, None, :]
        for k in range(len(t0)):
            ck, Ak = c[k], A[k]
            e3 = (
                np.multiply.outer(np.multiply.outer(ck, ck), ck) / 6.0
                + 0.5 * (np.multiply.outer(ck, Ak) + np.multiply.outer(Ak, ck))
            )
            s3 = s3 + np.multiply.outer(s2, ck) + np.multiply.outer(s1, e2[k]) + e3
            s2 = s2 + np.multiply.outer(s1, ck) + e2[k]
            s1 = s1 + ck
    return NCSeries3(alphabet, s1, s2, s3)


def iterated_integral(forms: Sequence[LogForm], gamma: PathWord, **kw) -> complex:
    if not 1 <= len(forms) <= 3:
        raise ValueError("between one and three forms")
    S = transport(Alphabet.of_forms(forms), gamma, **kw)
    return S.coeff(list(range(len(forms))))


def check_composition(forms: Sequence[LogForm], g1: PathWord, g2: PathWord, **kw) -> float:
    """Largest gap between transport over g1*g2 and the product of the parts."""
    if not g1.empty and not g2.empty and not np.allclose(g1.end, g2.start, atol=1e-12):
        raise ValueError("paths do not compose")
    al = Alphabet.of_forms(forms)
    whole = transport(al, g1 * g2, **kw)
    return whole.max_diff(transport(al, g1, **kw) * transport(al, g2, **kw))


@dataclass
class CommutatorResiduals:
    a: float
    b: float
    c: float
    lhs_b: complex
    rhs_b: complex
    lhs_c: complex
    rhs_c: complex

    def max(self) -> float:
        return max(self.a, self.b, self.c)


def commutator_rhs(SA: NCSeries3, SB: NCSeries3) -> tuple[complex, complex]:
    """Degree-2 and degree-3 commutator values from the loops' own integrals.

    Letters 0, 1, 2 stand for the forms w1, w2, w3.
    """
    a1, a2 = SA.s1, SA.s2
    b1, b2 = SB.s1, SB.s2
    two = a1[0] * b1[1] - b1[0] * a1[1]
    three = (
        a2[0, 1] * b1[2]
        - b2[0, 1] * a1[2]
        + a2[2, 1] * b1[0]
        - b2[2, 1] * a1[0]
        - a1[0] * b1[1] * a1[2]
        + b1[0] * a1[1] * b1[2]
    )
    return complex(two), complex(three)


def check_commutator(
    w1: LogForm, w2: LogForm, w3: LogForm, alpha: PathWord, beta: PathWord, **kw
) -> CommutatorResiduals:
    al = Alphabet.of_forms([w1, w2, w3])
    SA = transport(al, alpha, **kw)
    SB = transport(al, beta, **kw)
    SC = transport(al, PathWord([alpha, beta, alpha.inverse(), beta.inverse()]), **kw)
    two, three = commutator_rhs(SA, SB)
    return CommutatorResiduals(
        a=float(np.max(np.abs(SC.s1))),
        b=abs(SC.s2[0, 1] - two),
        c=abs(SC.s3[0, 1, 2] - three),
        lhs_b=complex(SC.s2[0, 1]),
        rhs_b=two,
        lhs_c=complex(SC.s3[0, 1, 2]),
        rhs_c=three,
    )


def _tagged_triples(series: NCSeries3):
    al = series.alphabet
    if not al.tagged:
        raise ValueError("projection needs a fully tagged alphabet")
    by_k: dict[int, list[int]] = {1: [], 2: [], 3: []}
    for i, l in enumerate(al.letters):
        by_k.setdefault(l.tag[0], []).append(i)
    for perm in itertools.permutations((1, 2, 3)):
        for word in itertools.product(*(by_k[k] for k in perm)):
            yield perm, word


def project_A(series: NCSeries3) -> complex:
    """Sum of the coefficients of the words A_{1,i} A_{2,j} A_{3,k}."""
    return complex(sum(series.s3[w] for perm, w in _tagged_triples(series) if perm == (1, 2, 3)))


def _inversions(seq: Sequence[int]) -> int:
    return sum(1 for x, y in itertools.combinations(seq, 2) if x > y)


def project_B(series: NCSeries3) -> complex:
    """Antisymmetrized coefficient over words using each function once.

    A word contributes its coefficient with sign (-1)**(inversions of its
    factor-index sequence), factor index 0 being the curve C0 itself, and
    the total is halved.
    """
    al = series.alphabet
    tot = 0j
    for _, w in _tagged_triples(series):
        idx = [al.letters[i].tag[1] for i in w]
        tot += (-1) ** _inversions(idx) * series.s3[w]
    return complex(0.5 * tot)
