"""Exact rational reference for short orbits.

Everything here runs in arbitrary-precision rational arithmetic, so orbit
entries are exact and escape verdicts carry no rounding: magnitude tests
compare |z|^2 against radius^2 within the rationals.  Bit counts double
every step, which makes this practical for a few dozen steps at most; the
renderers never call into it.

Uses gmpy2 rationals when available (much faster gcd on huge operands) and
falls back to fractions.Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import DimensionError, EscapeRecord, NodeStatus

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover - gmpy2 is present in normal installs
    _rational = Fraction


def to_rational(value):
    """Coerce ints, Fractions, floats (exactly) and 'p/q' strings."""
    if isinstance(value, float):
        return _rational(Fraction(value))
    return _rational(value)


@dataclass(frozen=True)
class RationalComplex:
    """Complex number with exact rational components."""

    re: object
    im: object = 0

    @classmethod
    def of(cls, value) -> "RationalComplex":
        if isinstance(value, RationalComplex):
            return value
        if isinstance(value, complex):
            return cls(to_rational(value.real), to_rational(value.imag))
        return cls(to_rational(value), to_rational(0))

    def __add__(self, other: "RationalComplex") -> "RationalComplex":
        return RationalComplex(self.re + other.re, self.im + other.im)

    def __mul__(self, other: "RationalComplex") -> "RationalComplex":
        return RationalComplex(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    def scaled(self, factor) -> "RationalComplex":
        return RationalComplex(factor * self.re, factor * self.im)

    def abs_squared(self):
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalComplex):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))


def _rational_rows(weights) -> list[list]:
    rows = [[to_rational(entry) for entry in row] for row in weights]
    n = len(rows)
    if n < 1 or any(len(row) != n for row in rows):
        raise DimensionError("weight matrix must be square n>=1")
    return rows


def _rational_vector(values, n: int) -> list[RationalComplex]:
    vec = [RationalComplex.of(v) for v in values]
    if len(vec) != n:
        raise DimensionError(f"vector must have length {n}, got {len(vec)}")
    return vec


def exact_orbit(weights, params, seeds, steps: int) -> list[tuple[RationalComplex, ...]]:
    """The first `steps` updates of a multi-orbit, exactly.

    Returns steps+1 states, the seed included.  Cost grows exponentially
    with `steps` (operand bits double per update); the caller owns that
    trade-off.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    rows = _rational_rows(weights)
    n = len(rows)
    c = _rational_vector(params, n)
    state = _rational_vector(seeds, n)
    orbit = [tuple(state)]
    for _ in range(steps):
        sums = []
        for row in rows:
            acc = state[0].scaled(row[0])
            for w, z in zip(row[1:], state[1:]):
                acc = acc + z.scaled(w)
            sums.append(acc)
        state = [s * s + ck for s, ck in zip(sums, c)]
        orbit.append(tuple(state))
    return orbit


def classify_point_exact(weights, params, budget: int, radius) -> EscapeRecord:
    """Escape verdicts for the critical multi-orbit, in exact arithmetic.

    Same contract as iterate_escape seeded at the origin, except there is no
    magnitude cap: iteration stops only at the budget or once every node has
    escaped.
    """
    if budget < 1:
        raise ValueError(f"iteration budget must be >= 1, got {budget}")
    r = to_rational(radius)
    if not r > 0:
        raise ValueError(f"escape radius must be positive, got {radius}")
    r2 = r * r
    rows = _rational_rows(weights)
    n = len(rows)
    c = _rational_vector(params, n)
    state = [RationalComplex(to_rational(0), to_rational(0))] * n
    esc = [-1] * n

    def mark(t: int) -> bool:
        for k in range(n):
            if esc[k] < 0 and state[k].abs_squared() > r2:
                esc[k] = t
        return all(e >= 0 for e in esc)

    stop = budget
    if mark(0):
        stop = 0
    else:
        for t in range(1, budget + 1):
            sums = []
            for row in rows:
                acc = state[0].scaled(row[0])
                for w, z in zip(row[1:], state[1:]):
                    acc = acc + z.scaled(w)
                sums.append(acc)
            state = [s * s + ck for s, ck in zip(sums, c)]
            if mark(t):
                stop = t
                break

    statuses = tuple(
        NodeStatus.ESCAPED if esc[k] >= 0
        else (NodeStatus.BOUNDED if stop == budget else NodeStatus.UNDECIDED)
        for k in range(n)
    )
    return EscapeRecord(statuses=statuses, escape_iterations=tuple(esc),
                        stop_iteration=stop, budget=budget, radius=float(r))
