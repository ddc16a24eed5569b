"""Compactly supported locally constant functions Q_p -> C.

A function is a finite set of pairwise disjoint balls, each carrying a
constant complex value, and zero elsewhere.  Measures and ball geometry
are exact; only the values are floating point.
"""

from __future__ import annotations

import json
from collections import defaultdict
from fractions import Fraction
from typing import Iterable

from .padic import (
    B_IN_A,
    DISJOINT,
    Ball,
    PAdicRational,
    _check_same_prime,
    ball_relation,
    character,
    unit_ball,
    valuation,
)


class OverlapError(ValueError):
    pass


class PiecewiseConstant:
    """Disjoint-ball step function in normal form.

    Normal form: no zero values, no set of p sibling balls sharing a value
    (those are merged into their parent), pieces sorted by ball.
    """

    __slots__ = ("prime", "pieces", "_index")

    def __init__(self, prime: int, pieces: Iterable[tuple[Ball, complex]] = (), *, check: bool = True):
        table: dict[Ball, complex] = {}
        for ball, value in pieces:
            _check_same_prime(prime, ball.prime)
            if ball in table:
                raise OverlapError(f"ball {ball.to_json()} given twice")
            table[ball] = complex(value)
        if check:
            _check_disjoint(list(table))
        table = _merge_siblings(prime, {b: v for b, v in table.items() if v != 0})
        self.prime = prime
        self.pieces: tuple[tuple[Ball, complex], ...] = tuple(
            sorted(table.items(), key=lambda bv: bv[0].sort_key())
        )
        index: dict[int, dict[Ball, complex]] = defaultdict(dict)
        for ball, value in self.pieces:
            index[ball.radius_exp][ball] = value
        self._index = dict(index)

    @classmethod
    def indicator(cls, ball: Ball, value: complex = 1.0) -> "PiecewiseConstant":
        return cls(ball.prime, [(ball, value)])

    @classmethod
    def zero(cls, prime: int) -> "PiecewiseConstant":
        return cls(prime, [])

    def __repr__(self) -> str:
        return f"PiecewiseConstant(prime={self.prime}, pieces={len(self.pieces)})"

    def __len__(self) -> int:
        return len(self.pieces)

    def __call__(self, x) -> complex:
        return evaluate(self, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewiseConstant):
            return NotImplemented
        return self.prime == other.prime and self.pieces == other.pieces

    __hash__ = None

    def __add__(self, other):
        return linear_combine([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return linear_combine([(1.0, self), (-1.0, other)])

    def __neg__(self):
        return self.scale(-1.0)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def scale(self, c: complex) -> "PiecewiseConstant":
        return PiecewiseConstant(self.prime, [(b, c * v) for b, v in self.pieces], check=False)

    def balls(self) -> list[Ball]:
        return [b for b, _ in self.pieces]

    def norm_sq(self) -> float:
        return sum(abs(v) ** 2 * float(b.measure()) for b, v in self.pieces)

    def norm(self) -> float:
        return self.norm_sq() ** 0.5

    def integral(self) -> complex:
        return sum((v * float(b.measure()) for b, v in self.pieces), 0j)

    def piece_at(self, x: PAdicRational) -> tuple[Ball, complex] | None:
        """The piece containing x, or None off the support."""
        for k, table in self._index.items():
            ball = Ball(self.prime, x, k)
            if ball in table:
                return ball, table[ball]
        return None

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "pieces": [
                {**b.to_json(), "value": [_clean(v.real), _clean(v.imag)]} for b, v in self.pieces
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PiecewiseConstant":
        p = int(data["prime"])
        pieces = []
        for item in data["pieces"]:
            center = PAdicRational.parse(str(item["center"]), p)
            re_, im_ = item["value"]
            pieces.append((Ball(p, center, int(item["radius_exp"])), complex(float(re_), float(im_))))
        return cls(p, pieces)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _clean(x: float) -> float:
    return x + 0.0


def _check_disjoint(balls: list[Ball]) -> None:
    # after sorting by level, a ball can only sit inside a coarser one
    balls = sorted(balls, key=lambda b: b.radius_exp)
    seen: set[Ball] = set()
    levels: set[int] = set()
    for b in balls:
        for k in levels:
            anc = Ball(b.prime, b.center, k)
            if anc in seen:
                raise OverlapError(f"ball {b.to_json()} overlaps {anc.to_json()}")
        seen.add(b)
        levels.add(b.radius_exp)


def _merge_siblings(p: int, table: dict[Ball, complex]) -> dict[Ball, complex]:
    changed = True
    while changed and table:
        changed = False
        groups: dict[Ball, list[Ball]] = defaultdict(list)
        for b in table:
            groups[b.parent()].append(b)
        for parent, kids in groups.items():
            if len(kids) == p and len({table[k] for k in kids}) == 1:
                value = table[kids[0]]
                for k in kids:
                    del table[k]
                table[parent] = value
                changed = True
    return table


def evaluate(f: PiecewiseConstant, x) -> complex:
    hit = f.piece_at(PAdicRational.of(f.prime, x))
    return hit[1] if hit else 0j


def _split(ball: Ball, inner: list[Ball], out: list[Ball]) -> None:
    strict = [b for b in inner if b.radius_exp > ball.radius_exp]
    if not strict:
        out.append(ball)
        return
    for child in ball.children():
        sub = [b for b in strict if b.center in child]
        _split(child, sub, out)


def refine_balls(balls: Iterable[Ball]) -> list[Ball]:
    """Coarsest disjoint family whose members are each inside or disjoint from every input ball."""
    balls = sorted(set(balls), key=lambda b: b.radius_exp)
    roots: list[Ball] = []
    for b in balls:
        if not any(ball_relation(b, r) != DISJOINT for r in roots):
            roots.append(b)
    out: list[Ball] = []
    for r in roots:
        _split(r, [b for b in balls if b.radius_exp > r.radius_exp and b.center in r], out)
    return out


def _lookup(f: PiecewiseConstant, ball: Ball) -> complex:
    # ball is an atom of a refinement of f, so it is inside one piece or off the support
    for k, table in f._index.items():
        if k <= ball.radius_exp:
            anc = Ball(f.prime, ball.center, k)
            if anc in table:
                return table[anc]
    return 0j


def common_refinement(f: PiecewiseConstant, g: PiecewiseConstant) -> list[tuple[Ball, complex, complex]]:
    """Disjoint balls covering both supports, with the (constant) values of f and g on each."""
    _check_same_prime(f.prime, g.prime)
    atoms = refine_balls(f.balls() + g.balls())
    return [(a, _lookup(f, a), _lookup(g, a)) for a in atoms]


def inner_product(f: PiecewiseConstant, g: PiecewiseConstant) -> complex:
    """``integral of f * conj(g)`` against Haar measure."""
    total = 0j
    for ball, u, v in common_refinement(f, g):
        if u and v:
            total += u * v.conjugate() * float(ball.measure())
    return total


def linear_combine(terms: Iterable[tuple[complex, PiecewiseConstant]]) -> PiecewiseConstant:
    terms = list(terms)
    if not terms:
        raise ValueError("linear_combine needs at least one term")
    p = terms[0][1].prime
    for _, f in terms:
        _check_same_prime(p, f.prime)
    atoms = refine_balls(b for _, f in terms for b in f.balls())
    pieces = []
    for a in atoms:
        value = sum((c * _lookup(f, a) for c, f in terms), 0j)
        pieces.append((a, value))
    return PiecewiseConstant(p, pieces, check=False)


def modulate(f: PiecewiseConstant, a) -> PiecewiseConstant:
    """The function ``x -> chi(a x) f(x)``.

    chi(a x) is constant on a ball of level k iff ``valuation(a) + k >= 0``,
    so coarser pieces are split down to that level first.
    """
    p = f.prime
    a = PAdicRational.of(p, a)
    if not a:
        return f
    level = -valuation(a)
    pieces = []
    for ball, v in f.pieces:
        stack = [ball]
        while stack:
            b = stack.pop()
            if b.radius_exp < level:
                stack.extend(b.children())
            else:
                pieces.append((b, v * character(a * b.center)))
    return PiecewiseConstant(p, pieces, check=False)


def affine_pullback(f: PiecewiseConstant, scale_exp: int, shift) -> PiecewiseConstant:
    """The function ``x -> f(p**scale_exp * x + shift)``."""
    p = f.prime
    shift = PAdicRational.of(p, shift)
    pieces = [
        (Ball(p, (b.center - shift).shift(-scale_exp), b.radius_exp - scale_exp), v) for b, v in f.pieces
    ]
    return PiecewiseConstant(p, pieces, check=False)


def omega(p: int) -> PiecewiseConstant:
    """Indicator of Z_p."""
    return PiecewiseConstant.indicator(unit_ball(p))


def ball_integral(f: PiecewiseConstant, ball: Ball) -> complex:
    """Integral of f over a ball, exact up to the float values."""
    total = 0j
    for b, v in f.pieces:
        rel = ball_relation(b, ball)
        if rel == DISJOINT:
            continue
        if rel == B_IN_A:
            total += v * float(ball.measure())
        else:
            total += v * float(b.measure())
    return total


def max_abs_difference(f: PiecewiseConstant, g: PiecewiseConstant) -> float:
    """Sup norm of f - g, read off the common refinement."""
    return max((abs(u - v) for _, u, v in common_refinement(f, g)), default=0.0)


def measure_of_support(f: PiecewiseConstant) -> Fraction:
    return sum((b.measure() for b in f.balls()), Fraction(0))
