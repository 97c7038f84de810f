"""Z_n-graded Grassmann words, normal ordering and Berezin integration.

Generators come in four kinds per index i: the variables theta_i and
thetabar_i and the measure symbols dtheta_i and dthetabar_i.  With q the
primitive n-th root of unity, the defining exchange rules are

    theta_i theta_j       = q theta_j theta_i          (i < j)
    thetabar_i thetabar_j = q thetabar_j thetabar_i    (i < j)
    theta thetabar        = qbar thetabar theta        (same index)
    theta dthetabar       = q dthetabar theta          (same index)
    thetabar dtheta       = q dtheta thetabar          (same index)
    theta dtheta          = qbar dtheta theta          (same index)
    thetabar dthetabar    = qbar dthetabar thetabar    (same index)
    dtheta dthetabar      = qbar dthetabar dtheta      (same index)

together with nilpotency theta_i^n = thetabar_i^n = 0.  Any pair these
rules do not cover (for instance theta_1 thetabar_2) raises
:class:`UnspecifiedRelationError` rather than guessing a phase.

The canonical order is: all dthetabar, then all dtheta, then all theta,
then all thetabar, each kind sorted by index.  Integration follows the
rule `int dtheta theta^k = delta(k, n-1)`, applied innermost first after
commuting each measure symbol rightward to its own variable block.
"""

from __future__ import annotations

import random
from enum import IntEnum
from typing import Iterable, Optional, Sequence

from .errors import EngineError, LevelMismatchError, UnspecifiedRelationError
from .scalars import Scalar


class Kind(IntEnum):
    """Generator kinds; numeric order equals the canonical word order."""

    DTHETABAR = 0
    DTHETA = 1
    THETA = 2
    THETABAR = 3


_KIND_NAMES = {
    Kind.DTHETABAR: "dthb",
    Kind.DTHETA: "dth",
    Kind.THETA: "th",
    Kind.THETABAR: "thb",
}

# A factor is (kind, index, exponent); a word is a tuple of factors.
Factor = tuple[int, int, int]
Word = tuple[Factor, ...]

# q exponent for swapping an out-of-order adjacent pair of distinct kinds
# at a common index: left*right -> q**e * right*left, keyed by the kinds.
_MIXED_SWAP = {
    (Kind.THETABAR, Kind.THETA): 1,
    (Kind.THETA, Kind.DTHETA): -1,
    (Kind.THETA, Kind.DTHETABAR): 1,
    (Kind.THETABAR, Kind.DTHETA): 1,
    (Kind.THETABAR, Kind.DTHETABAR): -1,
    (Kind.DTHETA, Kind.DTHETABAR): -1,
}


def _swap_qexp(left: tuple[int, int], right: tuple[int, int]) -> int:
    """Exponent e with left*right = q**e * right*left for unit generators.

    ``right`` precedes ``left`` canonically; raises when no rule applies.
    """
    (lk, li), (rk, ri) = left, right
    if lk == rk:
        if lk in (Kind.THETA, Kind.THETABAR):
            return -1
        raise UnspecifiedRelationError(
            f"no exchange rule for {_KIND_NAMES[Kind(lk)]}{li} and "
            f"{_KIND_NAMES[Kind(rk)]}{ri}")
    if li == ri:
        try:
            return _MIXED_SWAP[(lk, rk)]
        except KeyError:
            pass
    raise UnspecifiedRelationError(
        f"no exchange rule for {_KIND_NAMES[Kind(lk)]}{li} and "
        f"{_KIND_NAMES[Kind(rk)]}{ri}")


def normalize_word(level: int, factors: Iterable[Factor],
                   rng: Optional[random.Random] = None) -> tuple[int, Optional[Word]]:
    """Bring a raw product into canonical order.

    Returns ``(e, word)`` where the input equals q**e times the canonical
    word, or ``(0, None)`` when nilpotency collapses the product to zero.
    With ``rng`` given, applicable rewrites are applied in random order;
    confluence of the rule system makes the result independent of that
    choice (and the property tests check so).
    """
    fs: list[Factor] = []
    for kind, index, exp in factors:
        if exp < 0:
            raise EngineError("negative generator exponent")
        if exp == 0:
            continue
        if exp >= level:
            return 0, None
        fs.append((int(kind), index, exp))
    qexp = 0
    while True:
        actions = []
        for p in range(len(fs) - 1):
            k1, i1, _ = fs[p]
            k2, i2, _ = fs[p + 1]
            if (k1, i1) == (k2, i2):
                actions.append((p, True))
            elif (k1, i1) > (k2, i2):
                actions.append((p, False))
        if not actions:
            return qexp, tuple(fs)
        p, merge = actions[0] if rng is None else rng.choice(actions)
        k1, i1, e1 = fs[p]
        k2, i2, e2 = fs[p + 1]
        if merge:
            e = e1 + e2
            if e >= level:
                return 0, None
            fs[p] = (k1, i1, e)
            del fs[p + 1]
        else:
            qexp += _swap_qexp((k1, i1), (k2, i2)) * e1 * e2
            fs[p], fs[p + 1] = fs[p + 1], fs[p]


def grade(word: Word) -> tuple[int, int]:
    """Total theta degree and thetabar degree of a word."""
    dt = sum(e for k, _, e in word if k == Kind.THETA)
    db = sum(e for k, _, e in word if k == Kind.THETABAR)
    return dt, db


def _word_str(word: Word) -> str:
    if not word:
        return "1"
    bits = []
    for kind, index, exp in word:
        name = _KIND_NAMES[Kind(kind)]
        if index != 1:
            name += str(index)
        bits.append(name if exp == 1 else f"{name}^{exp}")
    return " ".join(bits)


class GExpr:
    """Formal sum of graded words with Scalar coefficients.

    Instances are always in canonical form: every word normal ordered,
    no zero coefficients stored.  Equality is plain map equality.
    """

    __slots__ = ("level", "terms")

    def __init__(self, level: int, terms: dict[Word, Scalar] | None = None):
        self.level = level
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    # -- construction --------------------------------------------------------

    @classmethod
    def zero(cls, level: int) -> "GExpr":
        return cls(level)

    @classmethod
    def one(cls, level: int) -> "GExpr":
        return cls(level, {(): Scalar.one(level)})

    @classmethod
    def generator(cls, level: int, kind: Kind, index: int = 1,
                  power: int = 1) -> "GExpr":
        qe, w = normalize_word(level, [(kind, index, power)])
        if w is None:
            return cls.zero(level)
        return cls(level, {w: Scalar.q(level, qe)})

    @classmethod
    def from_raw(cls, level: int, items: Iterable[tuple[Scalar, Iterable[Factor]]],
                 rng: Optional[random.Random] = None) -> "GExpr":
        """Normal order a sum given as (coefficient, raw factor list) pairs."""
        acc: dict[Word, Scalar] = {}
        for coeff, raw in items:
            if coeff.is_zero:
                continue
            qe, w = normalize_word(level, raw, rng)
            if w is None:
                continue
            c = coeff.mul_q_power(qe)
            prev = acc.get(w)
            s = prev + c if prev is not None else c
            if s:
                acc[w] = s
            elif prev is not None:
                del acc[w]
        return cls(level, acc)

    # -- algebra ---------------------------------------------------------------

    def _check(self, other: "GExpr") -> None:
        if self.level != other.level:
            raise LevelMismatchError(
                f"cannot mix levels {self.level} and {other.level}")

    def __add__(self, other: "GExpr") -> "GExpr":
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            prev = acc.get(w)
            s = prev + c if prev is not None else c
            if s:
                acc[w] = s
            elif prev is not None:
                del acc[w]
        return GExpr(self.level, acc)

    def __sub__(self, other: "GExpr") -> "GExpr":
        return self + (-other)

    def __neg__(self) -> "GExpr":
        return GExpr(self.level, {w: -c for w, c in self.terms.items()})

    def scale(self, factor: Scalar | int) -> "GExpr":
        if isinstance(factor, int):
            factor = Scalar.from_rational(self.level, factor)
        return GExpr(self.level, {w: c * factor for w, c in self.terms.items()})

    def __mul__(self, other: "GExpr") -> "GExpr":
        self._check(other)
        return GExpr.from_raw(
            self.level,
            ((c1 * c2, w1 + w2)
             for w1, c1 in self.terms.items()
             for w2, c2 in other.terms.items()))

    # -- predicates and display ----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GExpr):
            return NotImplemented
        return self.level == other.level and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[w]}) {_word_str(w)}"
                          for w in sorted(self.terms))

    def __repr__(self) -> str:
        return f"GExpr({self.level}, {self})"


# ---------------------------------------------------------------------------
# public constructors
# ---------------------------------------------------------------------------

def theta(level: int, index: int = 1, power: int = 1) -> GExpr:
    return GExpr.generator(level, Kind.THETA, index, power)


def thetabar(level: int, index: int = 1, power: int = 1) -> GExpr:
    return GExpr.generator(level, Kind.THETABAR, index, power)


def d_theta(index: int = 1) -> tuple[int, int]:
    """Measure symbol for integration over theta_index."""
    return (Kind.DTHETA, index)


def d_thetabar(index: int = 1) -> tuple[int, int]:
    """Measure symbol for integration over thetabar_index."""
    return (Kind.DTHETABAR, index)


def normal_order(e: GExpr, rng: Optional[random.Random] = None) -> GExpr:
    """Re-canonicalize an expression; idempotent on canonical input."""
    return GExpr.from_raw(e.level, ((c, w) for w, c in e.terms.items()), rng)


# ---------------------------------------------------------------------------
# Berezin integration
# ---------------------------------------------------------------------------

def _variable_kind(measure_kind: int) -> int:
    return Kind.THETA if measure_kind == Kind.DTHETA else Kind.THETABAR


def integrate_word(level: int, word: Word,
                   measure: Sequence[tuple[int, int]]) -> tuple[int, Optional[Word]]:
    """Integrate a single canonical word against the given measure.

    The measure factors are prepended in the written order, normal
    ordered, and consumed innermost (rightmost) first: each measure
    symbol commutes rightward, phase by phase, until it reaches its own
    variable block, where the degree must be exactly level - 1 for the
    term to survive.  Returns (q exponent, remaining word or None).
    """
    raw = [(k, i, 1) for k, i in measure] + list(word)
    qexp, fs = normalize_word(level, raw)
    if fs is None:
        return 0, None
    fs = list(fs)
    while True:
        pos = None
        for p in range(len(fs) - 1, -1, -1):
            if fs[p][0] in (Kind.DTHETA, Kind.DTHETABAR):
                pos = p
                break
        if pos is None:
            return qexp, tuple(fs)
        dkind, didx, dexp = fs[pos]
        if dexp != 1:
            raise EngineError("repeated measure symbol")
        want = (_variable_kind(dkind), didx)
        p = pos
        while p + 1 < len(fs) and (fs[p + 1][0], fs[p + 1][1]) != want:
            nk, ni, ne = fs[p + 1]
            qexp -= _swap_qexp((nk, ni), (dkind, didx)) * ne
            fs[p], fs[p + 1] = fs[p + 1], fs[p]
            p += 1
        if p + 1 == len(fs):
            return 0, None  # no matching variable: degree 0 < level - 1
        if fs[p + 1][2] != level - 1:
            return 0, None
        del fs[p:p + 2]


def berezin(e: GExpr, measure: Sequence[tuple[int, int]]) -> GExpr:
    """Berezin integral of ``e`` against an ordered list of measure symbols.

    ``measure`` is written outermost first, e.g. ``[d_thetabar(), d_theta()]``
    integrates `int dthetabar dtheta (...)`.  The integrand must not
    already contain measure symbols, and the measure symbols must be
    distinct.
    """
    seen = set()
    for k, i in measure:
        if k not in (Kind.DTHETA, Kind.DTHETABAR):
            raise EngineError("measure entries must be dtheta or dthetabar symbols")
        if (k, i) in seen:
            raise EngineError("measure symbols must be distinct")
        seen.add((k, i))
    acc: dict[Word, Scalar] = {}
    for w, c in e.terms.items():
        if any(f[0] in (Kind.DTHETA, Kind.DTHETABAR) for f in w):
            raise EngineError("integrand already contains measure symbols")
        qe, rest = integrate_word(e.level, w, measure)
        if rest is None:
            continue
        nc = c.mul_q_power(qe)
        prev = acc.get(rest)
        s = prev + nc if prev is not None else nc
        if s:
            acc[rest] = s
        elif prev is not None:
            del acc[rest]
    return GExpr(e.level, acc)
