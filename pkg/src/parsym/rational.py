"""Exact rationals, points of the projective line and factored functions.

Rationals are plain ``fractions.Fraction`` values.  Functions are kept
factored as ``constant * prod (x - root)**exp`` over rational roots, so
orders and unit parts can be read off without any polynomial algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rat = Fraction
RatLike = Union[int, str, Fraction]


def as_rat(v: RatLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a rational")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return parse_rat(v)
    raise TypeError(f"cannot interpret {v!r} as a rational")


def parse_rat(text: str) -> Fraction:
    s = text.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        num, den = int(p), int(q)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    return Fraction(int(s))


def fmt_rat(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class P1Point:
    """A point of the projective line; ``value is None`` means infinity."""

    value: Fraction | None

    @property
    def is_inf(self) -> bool:
        return self.value is None

    def sort_key(self) -> tuple:
        return (1, Fraction(0)) if self.value is None else (0, self.value)

    def __str__(self) -> str:
        return "inf" if self.value is None else fmt_rat(self.value)

    def __lt__(self, other: "P1Point") -> bool:
        return self.sort_key() < other.sort_key()


INF = P1Point(None)


def pt(v: RatLike | None) -> P1Point:
    """Build a P1Point; ``None`` or ``"inf"`` gives infinity."""
    if v is None or (isinstance(v, str) and v.strip() == "inf"):
        return INF
    if isinstance(v, P1Point):
        return v
    return P1Point(as_rat(v))


def _merge(factors: Iterable[tuple[RatLike, int]]) -> tuple[tuple[Fraction, int], ...]:
    acc: dict[Fraction, int] = {}
    for root, e in factors:
        r = as_rat(root)
        acc[r] = acc.get(r, 0) + int(e)
    return tuple(sorted((r, e) for r, e in acc.items() if e != 0))


@dataclass(frozen=True)
class FactoredFunction1D:
    constant: Fraction
    factors: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self) -> None:
        if self.constant == 0:
            raise ValueError("constant of a factored function must be nonzero")
        roots = [r for r, _ in self.factors]
        if len(set(roots)) != len(roots):
            raise ValueError("duplicate root in factored function")
        if any(e == 0 for _, e in self.factors):
            raise ValueError("zero exponent in factored function")

    @classmethod
    def make(cls, constant: RatLike = 1, factors: Iterable[tuple[RatLike, int]] = ()) -> "FactoredFunction1D":
        """Build a normalized function, merging repeated roots."""
        return cls(as_rat(constant), _merge(factors))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def exponent(self, root: Fraction) -> int:
        for r, e in self.factors:
            if r == root:
                return e
        return 0

    def __mul__(self, other: "FactoredFunction1D") -> "FactoredFunction1D":
        return FactoredFunction1D.make(self.constant * other.constant, self.factors + other.factors)

    def __pow__(self, k: int) -> "FactoredFunction1D":
        return FactoredFunction1D.make(self.constant**k, [(r, e * k) for r, e in self.factors])

    def inverse(self) -> "FactoredFunction1D":
        return self**-1

    def moebius(self, c: Fraction) -> "FactoredFunction1D":
        """The same function written in the coordinate t = 1/(x - c).

        Each (x - a)**e becomes (c - a)**e * (t - 1/(a - c))**e * t**(-e), so
        the point x = inf moves to t = 0 and x = c moves to t = inf.
        """
        const = self.constant
        factors: list[tuple[Fraction, int]] = []
        for a, e in self.factors:
            if a == c:
                raise ValueError("moebius centre must avoid the roots")
            const *= (c - a) ** e
            factors.append((1 / (a - c), e))
        factors.append((Fraction(0), -self.degree))
        return FactoredFunction1D.make(const, factors)

    def __call__(self, x: RatLike) -> Fraction:
        """Exact value at a finite point that is not a root."""
        xv = as_rat(x)
        out = self.constant
        for r, e in self.factors:
            if xv == r:
                raise ZeroDivisionError(f"evaluating at the root {r}")
            out *= (xv - r) ** e
        return out


def order_at(f: FactoredFunction1D, P: P1Point) -> int:
    if P.is_inf:
        return -f.degree
    return f.exponent(P.value)


def unit_part_at(f: FactoredFunction1D, P: P1Point) -> Fraction:
    """Value at P of f divided by the local coordinate power (x - a or 1/x)."""
    if P.is_inf:
        # f = c * u**(-deg) * prod (1 - r u)**e with u = 1/x
        return f.constant
    a = P.value
    out = f.constant
    for r, e in f.factors:
        if r != a:
            out *= (a - r) ** e
    return out


def moebius_point(P: P1Point, c: Fraction) -> P1Point:
    if P.is_inf:
        return P1Point(Fraction(0))
    if P.value == c:
        return INF
    return P1Point(1 / (P.value - c))


def off_roots(values: Iterable[Fraction]) -> Fraction:
    """First of 0, 1, -1, 2, -2, ... not in values."""
    taken = set(values)
    k = 0
    while True:
        c = Fraction((k + 1) // 2 * (1 if k % 2 else -1))
        if c not in taken:
            return c
        k += 1


def divisor_support(fs: list[FactoredFunction1D]) -> list[P1Point]:
    if not fs:
        raise ValueError("divisor_support needs at least one function")
    roots = sorted({r for f in fs for r, _ in f.factors})
    out = [P1Point(r) for r in roots]
    if any(f.degree != 0 for f in fs):
        out.append(INF)
    return out
