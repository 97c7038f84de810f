"""Weight functions and resolutions of the identity.

A weight is a polynomial w(theta, thetabar) = sum c_kl theta^k thetabar^l.
The engine checks integrals of the form

    int dthetabar dtheta  w(theta, thetabar) |A><B|

against the resolved identity sum_i |psi_i><phi_i| (or its dual).  With
the mixed pairs |theta><theta~| and |theta~><theta| a diagonal weight
makes the integral the exact identity; the same-family pairs produce
same-family dyads and therefore can never match it.

:func:`solve_weight` re-derives the weight from scratch: it treats the
c_kl as unknowns, expands the integral column by column, and solves the
resulting exact linear system.  The solver, not any closed formula, is
the source of truth; the two closed-form candidates below are compared
against it index by index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EngineError, SingularSystemError
from .galg import GExpr, Kind, d_theta, d_thetabar, normalize_word
from .opalg import (OpExpr, PHI, PSI, berezin_op, dual_identity_sum,
                    op_dagger, outer)
from .coherent import CoherentState, evolve_state, make_coherent
from .scalars import Scalar, rho_factorial

MEASURE = (d_thetabar(), d_theta())

MIXED_PAIRS = ((PSI, PHI), (PHI, PSI))
SAME_PAIRS = ((PSI, PSI), (PHI, PHI))


@dataclass(frozen=True)
class Weight:
    """Diagonal-or-not weight polynomial, stored as a graded expression."""

    level: int
    expr: GExpr

    def coefficient(self, k: int, l: int) -> Scalar:
        if k == 0 and l == 0:
            word = ()
        else:
            _, word = normalize_word(self.level,
                                     [(Kind.THETA, 1, k), (Kind.THETABAR, 1, l)])
        return self.expr.terms.get(word, Scalar.zero(self.level))

    def is_diagonal(self) -> bool:
        for word in self.expr.terms:
            degs = {}
            for kind, _, e in word:
                degs[kind] = e
            if degs.get(Kind.THETA, 0) != degs.get(Kind.THETABAR, 0):
                return False
        return True


def _monomial_weight(level: int, k: int, l: int) -> Weight:
    expr = GExpr.from_raw(level, [(Scalar.one(level),
                                   [(Kind.THETA, 1, k), (Kind.THETABAR, 1, l)])])
    return Weight(level, expr)


def closed_form_weight(level: int) -> Weight:
    """The candidate  sum_i q^(i(i+1)) rho_{n-1-i}! theta^i thetabar^i."""
    expr = GExpr.zero(level)
    for i in range(level):
        coeff = rho_factorial(level, level - 1 - i).mul_q_power(i * (i + 1))
        expr = expr + GExpr.from_raw(level, [(coeff,
                                              [(Kind.THETA, 1, i),
                                               (Kind.THETABAR, 1, i)])])
    return Weight(level, expr)


def mirror_weight(level: int) -> Weight:
    """The competing candidate with the factorial index unreversed,
    sum_i q^(i(i+1)) rho_i! theta^i thetabar^i."""
    expr = GExpr.zero(level)
    for i in range(level):
        coeff = rho_factorial(level, i).mul_q_power(i * (i + 1))
        expr = expr + GExpr.from_raw(level, [(coeff,
                                              [(Kind.THETA, 1, i),
                                               (Kind.THETABAR, 1, i)])])
    return Weight(level, expr)


def resolution_integral(weight: Weight, pair: tuple[str, str],
                        sqrt_rho: Sequence[Scalar] | None = None,
                        evolved: bool = False) -> OpExpr:
    """int dthetabar dtheta w |A><B| for the requested state pair.

    ``pair`` names the families of the ket state and of the state whose
    dagger provides the bra.  With ``evolved`` both states carry their
    time evolution factors first.
    """
    n = weight.level
    ket_state = make_coherent(n, pair[0], sqrt_rho)
    bra_state = make_coherent(n, pair[1], sqrt_rho)
    ket_body = evolve_state(ket_state) if evolved else ket_state.body
    bra_body = evolve_state(bra_state) if evolved else bra_state.body
    outer_product = ket_body @ op_dagger(bra_body)
    integrand = OpExpr.from_gexpr(weight.expr) @ outer_product
    return berezin_op(integrand, MEASURE)


def identity_target(level: int, pair: tuple[str, str]) -> OpExpr:
    """The identity the integral is compared against: the resolved sum
    whose ket family matches the pair's ket state."""
    return dual_identity_sum(level, pair[0])


def verify_resolution(weight: Weight, pair: tuple[str, str],
                      sqrt_rho: Sequence[Scalar] | None = None,
                      evolved: bool = False) -> OpExpr:
    """Defect of the resolution of identity for the given pair."""
    integral = resolution_integral(weight, pair, sqrt_rho, evolved)
    return integral - identity_target(weight.level, pair)


# ---------------------------------------------------------------------------
# exact linear solve for the weight coefficients
# ---------------------------------------------------------------------------

def _gaussian_solve(matrix: list[list[Scalar]], rhs: list[Scalar],
                    level: int) -> list[Scalar]:
    """Solve A x = b exactly over the scalar ring.

    Pivots must be invertible (single-term) scalars; the systems built
    here satisfy that.  Raises when the system is singular or a needed
    pivot is not a monomial.
    """
    m = len(matrix)
    if m != len(rhs):
        raise EngineError("matrix and right-hand side sizes differ")
    ncols = len(matrix[0]) if m else 0
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    where = [-1] * ncols
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, m):
            if not a[r][col].is_zero:
                if len(a[r][col].terms) == 1:
                    pivot = r
                    break
                pivot = pivot if pivot is not None else r
        if pivot is None:
            continue
        if len(a[pivot][col].terms) != 1:
            raise SingularSystemError("pivot is not an invertible monomial")
        a[row], a[pivot] = a[pivot], a[row]
        inv = a[row][col].monomial_inverse()
        a[row] = [entry * inv for entry in a[row]]
        for r in range(m):
            if r != row and not a[r][col].is_zero:
                factor = a[r][col]
                a[r] = [er - factor * ep for er, ep in zip(a[r], a[row])]
        where[col] = row
        row += 1
    zero = Scalar.zero(level)
    solution = []
    for col in range(ncols):
        if where[col] < 0:
            raise SingularSystemError("underdetermined system")
        solution.append(a[where[col]][ncols])
    for r in range(m):
        residual = zero
        for col in range(ncols):
            residual = residual + matrix[r][col] * solution[col]
        if residual != rhs[r]:
            raise SingularSystemError("inconsistent system")
    return solution


def solve_weight(level: int,
                 sqrt_rho: Sequence[Scalar] | None = None) -> Weight:
    """Derive the weight coefficients from the resolution condition.

    Expands int dthetabar dtheta theta^k thetabar^l |theta><theta~| for
    every monomial, equates the total against sum_i |psi_i><phi_i|, and
    solves the exact linear system in the c_kl.  Asserts that the unique
    solution is diagonal.
    """
    n = level
    pairs = [(i, j) for i in range(n) for j in range(n)]
    columns = {}
    for k, l in pairs:
        integral = resolution_integral(_monomial_weight(n, k, l),
                                       (PSI, PHI), sqrt_rho)
        col = {}
        for (word, dyad), coeff in integral.terms.items():
            if word or dyad[0] != "O":
                raise EngineError("unexpected term shape in weight system")
            col[(dyad[2], dyad[4])] = coeff
        columns[(k, l)] = col
    zero = Scalar.zero(n)
    one = Scalar.one(n)
    matrix = [[columns[kl].get(ij, zero) for kl in pairs] for ij in pairs]
    rhs = [one if i == j else zero for i, j in pairs]
    solution = _gaussian_solve(matrix, rhs, n)
    expr = GExpr.zero(n)
    for (k, l), c in zip(pairs, solution):
        if k != l and not c.is_zero:
            raise SingularSystemError(
                f"off-diagonal weight coefficient c_{k}{l} = {c} survived")
        if not c.is_zero:
            expr = expr + GExpr.from_raw(n, [(c, [(Kind.THETA, 1, k),
                                                  (Kind.THETABAR, 1, l)])])
    return Weight(n, expr)


def compare_weights(a: Weight, b: Weight) -> list[tuple[int, bool, Scalar]]:
    """Per-index comparison of two diagonal weights.

    Returns one row (index, equal, difference) per diagonal slot.
    """
    if a.level != b.level:
        raise EngineError("weights live at different levels")
    rows = []
    for i in range(a.level):
        diff = a.coefficient(i, i) - b.coefficient(i, i)
        rows.append((i, diff.is_zero, diff))
    return rows
