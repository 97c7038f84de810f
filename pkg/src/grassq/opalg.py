"""Kets, bras and operators over the graded algebra.

An :class:`OpExpr` is a formal sum of terms ``coefficient * word * dyad``
where the word is a canonical Grassmann word and the dyad is one of

    1                      the abstract identity operator
    |F_i>                  a ket of family F in {psi, phi}
    <F_j|                  a bra
    |F_i><G_j|             an outer product

Moving a variable across a ket or bra picks up the quantization phases

    theta |F_i>  = q^(i-1)  |F_i> theta        thetabar |F_i>  = qbar^(i-1) |F_i> thetabar
    theta <F_j|  = qbar^(j-1) <F_j| theta      thetabar <F_j|  = q^(j-1)  <F_j| thetabar

with the same phase for both families, so the canonical form keeps every
word to the left of its dyad.  Composition contracts dyads through the
dual pairings <phi_i|psi_j> = <psi_i|phi_j> = delta_ij only; same-family
overlaps raise :class:`GramUnknownError` because biorthonormality does
not determine them.

The distinguished ladder operators are

    b            = sum_i sqrt(rho_{i+1}) |psi_i><phi_{i+1}|
    b_sharp      = eta^-1 b^dag eta = sum_i sqrt(rho_{i+1}) |psi_{i+1}><phi_i|
    b_tilde      = eta b eta^-1     = sum_i sqrt(rho_{i+1}) |phi_i><psi_{i+1}|
    b_tilde_sharp_prime = b^dag     = sum_i sqrt(rho_{i+1}) |phi_{i+1}><psi_i|

and the metric eta acts purely by relabeling families (it commutes with
the Grassmann variables).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (DyadShapeError, EngineError, EtaUnexpressibleError,
                     GramUnknownError, LevelMismatchError)
from .galg import GExpr, Kind, Word, _word_str, grade, integrate_word, normalize_word
from .scalars import Scalar

PSI = "psi"
PHI = "phi"

IDENT = ("I",)

Dyad = tuple


def ket(family: str, index: int) -> Dyad:
    return ("K", family, index)


def bra(family: str, index: int) -> Dyad:
    return ("B", family, index)


def outer(ket_family: str, i: int, bra_family: str, j: int) -> Dyad:
    return ("O", ket_family, i, bra_family, j)


def _dual(family: str) -> str:
    return PHI if family == PSI else PSI


def _dyad_str(d: Dyad) -> str:
    if d == IDENT:
        return "1"
    if d[0] == "K":
        return f"|{d[1]}_{d[2]}>"
    if d[0] == "B":
        return f"<{d[1]}_{d[2]}|"
    return f"|{d[1]}_{d[2]}><{d[3]}_{d[4]}|"


# ---------------------------------------------------------------------------
# crossing phases and contraction
# ---------------------------------------------------------------------------

def _cross_single(kind: int, d: Dyad) -> int:
    """q exponent for moving one unit generator from right of d to left."""
    if d == IDENT:
        return 0
    if kind not in (Kind.THETA, Kind.THETABAR):
        raise EngineError("measure symbols cannot cross kets or bras")
    sign = 1 if kind == Kind.THETA else -1
    if d[0] == "K":
        return -sign * (d[2] - 1)
    if d[0] == "B":
        return sign * (d[2] - 1)
    return sign * ((d[4] - 1) - (d[2] - 1))


def _cross_word(word: Word, d: Dyad) -> int:
    if d == IDENT or not word:
        return 0
    return sum(_cross_single(k, d) * e for k, _, e in word)


def _contract(d1: Dyad, d2: Dyad) -> tuple[bool, Dyad]:
    """Compose two dyads; returns (survives, dyad).

    Mixed-family pairings contract with delta on the indices; pairings
    inside one family are refused.
    """
    if d1 == IDENT:
        return True, d2
    if d2 == IDENT:
        return True, d1
    t1, t2 = d1[0], d2[0]
    if t1 == "K":
        if t2 == "B":
            return True, outer(d1[1], d1[2], d2[1], d2[2])
        raise DyadShapeError(f"cannot compose {_dyad_str(d1)} with {_dyad_str(d2)}")
    if t1 == "B":
        if t2 == "K":
            _require_dual(d1[1], d2[1])
            return (d1[2] == d2[2]), IDENT
        if t2 == "O":
            _require_dual(d1[1], d2[1])
            return (d1[2] == d2[2]), bra(d2[3], d2[4])
        raise DyadShapeError(f"cannot compose {_dyad_str(d1)} with {_dyad_str(d2)}")
    # t1 == "O"
    if t2 == "K":
        _require_dual(d1[3], d2[1])
        return (d1[4] == d2[2]), ket(d1[1], d1[2])
    if t2 == "O":
        _require_dual(d1[3], d2[1])
        return (d1[4] == d2[2]), outer(d1[1], d1[2], d2[3], d2[4])
    raise DyadShapeError(f"cannot compose {_dyad_str(d1)} with {_dyad_str(d2)}")


def _require_dual(f1: str, f2: str) -> None:
    if f1 == f2:
        raise GramUnknownError(
            f"<{f1}|{f2}> overlaps are not determined by biorthonormality")


# ---------------------------------------------------------------------------
# operator expressions
# ---------------------------------------------------------------------------

class OpExpr:
    """Formal sum of (word, dyad) terms with Scalar coefficients."""

    __slots__ = ("level", "terms")

    def __init__(self, level: int,
                 terms: dict[tuple[Word, Dyad], Scalar] | None = None):
        self.level = level
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, level: int) -> "OpExpr":
        return cls(level)

    @classmethod
    def identity(cls, level: int) -> "OpExpr":
        return cls(level, {((), IDENT): Scalar.one(level)})

    @classmethod
    def single(cls, level: int, coeff: Scalar, dyad: Dyad = IDENT,
               word: Word = ()) -> "OpExpr":
        qe, w = normalize_word(level, word)
        if w is None or coeff.is_zero:
            return cls.zero(level)
        return cls(level, {(w, dyad): coeff.mul_q_power(qe)})

    @classmethod
    def from_gexpr(cls, g: GExpr) -> "OpExpr":
        return cls(g.level, {(w, IDENT): c for w, c in g.terms.items()})

    # -- linear structure -------------------------------------------------------

    def _check(self, other: "OpExpr") -> None:
        if self.level != other.level:
            raise LevelMismatchError(
                f"cannot mix levels {self.level} and {other.level}")

    def _merge(self, acc: dict, key, value: Scalar) -> None:
        prev = acc.get(key)
        s = prev + value if prev is not None else value
        if s:
            acc[key] = s
        elif prev is not None:
            del acc[key]

    def __add__(self, other: "OpExpr") -> "OpExpr":
        self._check(other)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            self._merge(acc, key, c)
        return OpExpr(self.level, acc)

    def __sub__(self, other: "OpExpr") -> "OpExpr":
        return self + (-other)

    def __neg__(self) -> "OpExpr":
        return OpExpr(self.level, {k: -v for k, v in self.terms.items()})

    def scale(self, factor: Scalar | int | Fraction) -> "OpExpr":
        if isinstance(factor, (int, Fraction)):
            factor = Scalar.from_rational(self.level, factor)
        return OpExpr(self.level, {k: c * factor for k, c in self.terms.items()})

    # -- composition -------------------------------------------------------------

    def __matmul__(self, other: "OpExpr") -> "OpExpr":
        self._check(other)
        acc: dict[tuple[Word, Dyad], Scalar] = {}
        for (w1, d1), c1 in self.terms.items():
            for (w2, d2), c2 in other.terms.items():
                survives, dyad = _contract(d1, d2)
                if not survives:
                    continue
                cross = _cross_word(w2, d1)
                qe, w = normalize_word(self.level, w1 + w2)
                if w is None:
                    continue
                self._merge(acc, (w, dyad), (c1 * c2).mul_q_power(cross + qe))
        return OpExpr(self.level, acc)

    def power(self, k: int) -> "OpExpr":
        if k < 0:
            raise EngineError("negative operator powers are undefined")
        out = OpExpr.identity(self.level)
        for _ in range(k):
            out = out @ self
        return out

    # -- predicates and display ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OpExpr):
            return NotImplemented
        return self.level == other.level and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def sorted_terms(self) -> list[tuple[Word, Dyad, Scalar]]:
        keys = sorted(self.terms, key=lambda k: (k[1], k[0]))
        return [(w, d, self.terms[(w, d)]) for w, d in keys]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c}) {_word_str(w)} {_dyad_str(d)}"
                          for w, d, c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"OpExpr({self.level}, {self})"


# ---------------------------------------------------------------------------
# canonical term construction and the basic operations
# ---------------------------------------------------------------------------

def op_term(level: int, coeff: Scalar, dyad: Dyad = IDENT,
            left: Sequence = (), right: Sequence = ()) -> OpExpr:
    """Canonicalize ``coeff * left * dyad * right``.

    ``left`` and ``right`` are raw factor lists; the right word crosses
    the dyad leftward and picks up the quantization phases.
    """
    right = tuple(right)
    cross = _cross_word(right, dyad)
    qe, w = normalize_word(level, tuple(left) + right)
    if w is None or coeff.is_zero:
        return OpExpr.zero(level)
    return OpExpr(level, {(w, dyad): coeff.mul_q_power(cross + qe)})


def op_compose(a: OpExpr, b: OpExpr) -> OpExpr:
    return a @ b


def op_dagger(e: OpExpr) -> OpExpr:
    """Hermitian conjugate: anti-linear, reverses products, swaps bars.

    Dyads flip ket/bra roles keeping family tags, words reverse with
    theta <-> thetabar, and the result is re-canonicalized.
    """
    swap = {Kind.THETA: Kind.THETABAR, Kind.THETABAR: Kind.THETA,
            Kind.DTHETA: Kind.DTHETABAR, Kind.DTHETABAR: Kind.DTHETA}
    acc = OpExpr.zero(e.level)
    for (w, d), c in e.terms.items():
        if d == IDENT:
            nd: Dyad = IDENT
        elif d[0] == "K":
            nd = bra(d[1], d[2])
        elif d[0] == "B":
            nd = ket(d[1], d[2])
        else:
            nd = outer(d[3], d[4], d[1], d[2])
        nw = tuple((swap[Kind(k)], i, x) for k, i, x in reversed(w))
        acc = acc + op_term(e.level, c.conj(), nd, right=nw)
    return acc


def eta_conjugate(e: OpExpr, inverse: bool = False) -> OpExpr:
    """Conjugation by the metric: eta X eta^-1 (or eta^-1 X eta).

    Acts only on family tags; Grassmann words pass through unchanged
    because the metric commutes with the variables.  Kets of the wrong
    family for the chosen direction raise, since their image would need
    the metric squared.
    """
    ket_map = {PHI: PSI} if inverse else {PSI: PHI}
    bra_map = {PSI: PHI} if inverse else {PHI: PSI}

    def map_ket(f: str) -> str:
        try:
            return ket_map[f]
        except KeyError:
            raise EtaUnexpressibleError(
                f"metric action on a {f} ket is not expressible") from None

    def map_bra(f: str) -> str:
        try:
            return bra_map[f]
        except KeyError:
            raise EtaUnexpressibleError(
                f"metric action on a {f} bra is not expressible") from None

    acc: dict[tuple[Word, Dyad], Scalar] = {}
    for (w, d), c in e.terms.items():
        if d == IDENT:
            nd: Dyad = IDENT
        elif d[0] == "K":
            nd = ket(map_ket(d[1]), d[2])
        elif d[0] == "B":
            nd = bra(map_bra(d[1]), d[2])
        else:
            nd = outer(map_ket(d[1]), d[2], map_bra(d[3]), d[4])
        acc[(w, nd)] = c
    return OpExpr(e.level, acc)


def sharp_adjoint(e: OpExpr) -> OpExpr:
    """The adjoint with respect to the metric inner product: eta^-1 X^dag eta."""
    return eta_conjugate(op_dagger(e), inverse=True)


def q_commutator(a: OpExpr, b: OpExpr) -> OpExpr:
    """[A, B]_q = A B - q B A."""
    a._check(b)
    return (a @ b) - (b @ a).scale(Scalar.q(a.level))


# ---------------------------------------------------------------------------
# distinguished operators and states
# ---------------------------------------------------------------------------

LADDER_KINDS = ("b", "b_sharp", "b_tilde", "b_tilde_sharp_prime")


def default_sqrt_rho(level: int, count: int | None = None) -> tuple[Scalar, ...]:
    """The symbols s_1 .. s_count, each standing for sqrt(rho_i)."""
    count = level - 1 if count is None else count
    return tuple(Scalar.s(level, i) for i in range(1, count + 1))


def make_ladder(kind: str, level: int,
                sqrt_rho: Sequence[Scalar] | None = None,
                nlevels: int | None = None) -> OpExpr:
    """One of the four ladder operators as an operator expression.

    ``nlevels`` is the number of levels the ladder connects (defaults to
    ``level``); ``sqrt_rho`` supplies the sqrt(rho_i) coefficients and
    defaults to the symbols s_i.  The lowering operator is built from its
    defining sum; the other three are derived through dagger and the
    metric, which is exactly how they are defined.
    """
    if level < 2:
        raise EngineError("need at least two levels")
    if kind not in LADDER_KINDS:
        raise EngineError(f"unknown ladder kind {kind!r}")
    nlevels = level if nlevels is None else nlevels
    rho = tuple(sqrt_rho) if sqrt_rho is not None else default_sqrt_rho(
        level, nlevels - 1)
    if len(rho) < nlevels - 1:
        raise EngineError("need one sqrt(rho) per ladder step")
    b = OpExpr(level, {((), outer(PSI, i, PHI, i + 1)): rho[i]
                       for i in range(nlevels - 1)})
    if kind == "b":
        return b
    if kind == "b_sharp":
        return sharp_adjoint(b)
    if kind == "b_tilde":
        return eta_conjugate(b)
    return op_dagger(b)


def theta_op(level: int, power: int = 1, index: int = 1) -> OpExpr:
    return op_term(level, Scalar.one(level), IDENT,
                   left=[(Kind.THETA, index, power)])


def thetabar_op(level: int, power: int = 1, index: int = 1) -> OpExpr:
    return op_term(level, Scalar.one(level), IDENT,
                   left=[(Kind.THETABAR, index, power)])


def ket_op(level: int, family: str, index: int) -> OpExpr:
    return OpExpr(level, {((), ket(family, index)): Scalar.one(level)})


def dual_identity_sum(level: int, ket_family: str = PSI,
                      nlevels: int | None = None) -> OpExpr:
    """sum_i |F_i><F'_i| over the dual pair, the resolved identity."""
    nlevels = level if nlevels is None else nlevels
    return OpExpr(level, {((), outer(ket_family, i, _dual(ket_family), i)):
                          Scalar.one(level) for i in range(nlevels)})


def berezin_op(e: OpExpr, measure: Sequence[tuple[int, int]]) -> OpExpr:
    """Berezin integration term by term; dyads ride along unchanged.

    Valid because every canonical term keeps its word strictly left of
    the dyad, so the measure never has to cross a ket or bra.
    """
    acc: dict[tuple[Word, Dyad], Scalar] = {}
    out = OpExpr.zero(e.level)
    for (w, d), c in e.terms.items():
        if any(f[0] in (Kind.DTHETA, Kind.DTHETABAR) for f in w):
            raise EngineError("integrand already contains measure symbols")
        qe, rest = integrate_word(e.level, w, measure)
        if rest is None:
            continue
        out._merge(acc, (rest, d), c.mul_q_power(qe))
    return OpExpr(e.level, acc)
