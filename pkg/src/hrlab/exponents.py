"""Exponent sets of monomials ``conj(z)**m * z**n`` and exact polar points.

Points carry their argument as a rational number of full turns, so questions
of the form "is ``z1/z2`` a ``k``-th root of unity" reduce to integrality of
``k * (turn1 - turn2)``. Moduli are compared with exact equality; callers
starting from floating-point data must quantize first (see
:meth:`ExactPoint.from_complex`).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterable, Optional

from .errors import AllDiagonal, InvalidPoint

Pair = tuple[int, int]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    raise InvalidPoint(f"cannot read a rational turn from {value!r}")


@dataclass(frozen=True, order=True)
class ExactPoint:
    """``modulus * exp(2 pi i turn)`` with ``turn`` a rational in ``[0, 1)``."""

    modulus: float
    turn: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        mod = float(self.modulus)
        if not (mod >= 0 and math.isfinite(mod)):
            raise InvalidPoint(f"modulus must be finite and nonnegative, got {self.modulus!r}")
        turn = _as_fraction(self.turn) % 1
        if mod == 0:
            turn = Fraction(0)
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "turn", turn)

    @classmethod
    def from_real(cls, x: float) -> "ExactPoint":
        return cls(abs(float(x)), Fraction(1, 2) if x < 0 else Fraction(0))

    @classmethod
    def from_complex(cls, z: complex, max_denominator: int = 720, digits: int = 12) -> "ExactPoint":
        """Quantize a float complex number: turn to the nearest ``a/b`` with
        ``b <= max_denominator``, modulus rounded to ``digits`` decimals."""
        z = complex(z)
        mod = round(abs(z), digits)
        if mod == 0:
            return cls(0.0)
        turn = Fraction(cmath.phase(z) / (2 * math.pi)).limit_denominator(max_denominator)
        return cls(mod, turn)

    def unit(self) -> complex:
        return unit_root(self.turn)

    def to_complex(self) -> complex:
        return self.modulus * self.unit()

    def __str__(self) -> str:
        return f"{self.modulus!r}@{self.turn}"


def unit_root(turn: Fraction) -> complex:
    """``exp(2 pi i turn)``, exact at quarter turns."""
    turn = turn % 1
    exact = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if turn in exact:
        return exact[turn]
    return cmath.exp(2j * math.pi * float(turn))


@dataclass(frozen=True)
class ExponentSet:
    """Finite nonempty set of bidegrees ``(m, n)`` with ``m, n >= 0``."""

    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        pairs = frozenset((int(m), int(n)) for m, n in self.pairs)
        if not pairs:
            raise ValueError("exponent set must be nonempty")
        if any(m < 0 or n < 0 for m, n in pairs):
            raise ValueError("exponents must be nonnegative")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def of(cls, *pairs: Pair) -> "ExponentSet":
        return cls(frozenset(pairs))

    def sorted(self) -> list[Pair]:
        return sorted(self.pairs)

    @property
    def off_diagonal(self) -> list[Pair]:
        return [(m, n) for m, n in self.sorted() if m != n]

    @property
    def diagonal(self) -> list[Pair]:
        return [(m, n) for m, n in self.sorted() if m == n]

    def swapped(self) -> "ExponentSet":
        return ExponentSet(frozenset((n, m) for m, n in self.pairs))

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class SigmaTriple:
    p: int
    q: int
    r: int

    def __post_init__(self) -> None:
        if self.p == self.q or self.p + self.q >= 2 * self.r:
            raise ValueError(f"({self.p},{self.q},{self.r}) violates p != q and p + q < 2r")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.p, self.q, self.r)


def gcd_diffs(xi: ExponentSet) -> int:
    diffs = [abs(m - n) for m, n in xi.pairs if m != n]
    if not diffs:
        raise AllDiagonal("every bidegree is diagonal; the gcd of differences is undefined")
    return reduce(math.gcd, diffs)


def sigma_condition(xi: ExponentSet) -> Optional[SigmaTriple]:
    """Lexicographically smallest ``(p, q, r)`` with ``(p,q), (r,r)`` in ``xi``,
    ``p != q`` and ``p + q < 2r``."""
    best = None
    for p, q in xi.off_diagonal:
        for r, _ in xi.diagonal:
            if p + q < 2 * r:
                cand = (p, q, r)
                if best is None or cand < best:
                    best = cand
    return SigmaTriple(*best) if best else None


def _turn_multiple_of(delta: Fraction, k: int) -> bool:
    """Is ``delta`` (mod 1) a multiple of ``1/k``?  Equivalently ``k * delta`` is an integer."""
    return (k * delta).denominator == 1


def separates(pair: Pair, z1: ExactPoint, z2: ExactPoint) -> bool:
    """Exact test of ``conj(z1)^m z1^n != conj(z2)^m z2^n``."""
    m, n = pair
    if m == 0 and n == 0:
        return False
    if z1.modulus != z2.modulus:
        return True
    if z1.modulus == 0:
        return False
    if m == n:
        return False
    return not _turn_multiple_of(z1.turn - z2.turn, abs(n - m))


def unseparated_pairs(xi: ExponentSet, points: Iterable[ExactPoint]) -> list[tuple[ExactPoint, ExactPoint]]:
    pts = sorted(set(points))
    return [
        (a, b) for a, b in combinations(pts, 2)
        if not any(separates(pair, a, b) for pair in xi.pairs)
    ]


def generates(xi: ExponentSet, points: Iterable[ExactPoint]) -> bool:
    """Whether the monomials in ``xi`` separate the finite set ``points``.

    By Stone-Weierstrass this is equivalent to generating ``C(X)``. Points of
    distinct moduli are separated by any non-constant monomial; points of
    equal positive modulus ``z1 != z2`` are separated by ``(m, n)`` iff
    ``z1/z2`` is not an ``|n-m|``-th root of unity.
    """
    pts = list(points)
    if not pts:
        raise ValueError("point set must be nonempty")
    return not unseparated_pairs(xi, pts)


def sector_condition(p: int, q: int, r: int, points: Iterable[ExactPoint]) -> bool:
    """Finite form of the sector hypothesis for ``{(p,q), (r,r)}``.

    With ``n = |p - q|``, the points must avoid 0 and no two of them may lie
    in different ``1/n``-sectors at the same residual angle, i.e. no two
    turns differ by a nonzero multiple of ``1/n``.
    """
    n = abs(p - q)
    if n < 1:
        raise ValueError("sector condition needs p != q")
    pts = sorted(set(points))
    if any(z.modulus == 0 for z in pts):
        return False
    for a, b in combinations(pts, 2):
        delta = (a.turn - b.turn) % 1
        if delta != 0 and _turn_multiple_of(delta, n):
            return False
    return True


@dataclass(frozen=True)
class Verdict:
    kind: str  # "ByGcd" | "BySector" | "Unknown"
    witness: Optional[SigmaTriple] = None
    warnings: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "witness": list(self.witness.as_tuple()) if self.witness else None,
            "warnings": list(self.warnings),
            "notes": list(self.notes),
        }


EVEN_CASE_NOTE = (
    "Real X with 1 <= 2r < p+q and p+q even is a subtle case; no verdict is drawn for it."
)


def hyperrigid_sufficient(xi: ExponentSet, points: Iterable[ExactPoint]) -> Verdict:
    """Three-valued sufficient-condition verdict for hyperrigidity of ``xi`` on ``points``."""
    pts = list(points)
    if not pts:
        raise ValueError("point set must be nonempty")
    sigma = sigma_condition(xi)
    if sigma is not None:
        try:
            d = gcd_diffs(xi)
        except AllDiagonal:  # pragma: no cover - sigma implies an off-diagonal pair
            d = 0
        if d == 1:
            return Verdict("ByGcd", sigma)
        if len(xi) == 2 and sector_condition(sigma.p, sigma.q, sigma.r, pts):
            return Verdict("BySector", sigma)

    warnings = []
    notes = []
    if not xi.diagonal:
        warnings.append("NoDiagonalPair")
    low = [
        (p, q, r) for p, q in xi.off_diagonal for r, _ in xi.diagonal if 2 * r <= p + q
    ]
    if low:
        warnings.append("LowDiagonal")
        real_x = all(x.turn in (0, Fraction(1, 2)) for x in pts)
        if real_x and any(
            (p + q) % 2 == 0 and 1 <= 2 * r < p + q for p, q, r in low
        ):
            notes.append(EVEN_CASE_NOTE)
    if not generates(xi, pts):
        warnings.append("NotGenerating")
    return Verdict("Unknown", sigma, tuple(warnings), tuple(notes))
