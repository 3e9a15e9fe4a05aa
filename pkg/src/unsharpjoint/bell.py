"""Bipartite correlations, CHSH values, and no-signaling boxes.

Three layers of the same CHSH expression
|t11 + t12 + t21 - t22| live here:

* quantum correlators Tr[state (A x B)] for density matrices and
  dichotomic observables, bounded by 2*sqrt(2);
* the smeared variant with unsharpness applied to one wing only, whose
  value is exactly lam times the sharp value, so lam = 1/sqrt(2) pins
  the smeared expression at the local bound 2;
* bare conditional-probability tables (boxes), where the algebraic
  maximum 4 is reached by the PR box.

Box tables keep exact rational entries whenever the inputs are rational
(deterministic and PR boxes), so CHSH = 4 and CHSH = 2 come out exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import DimensionMismatch, InvalidBox, InvalidDistribution, ValidationError
from .operators import DensityMatrix, DichotomicObservable, PAULI_X, PAULI_Z, identity, tensor
from .unsharp import UnsharpParam, smear

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
LOCAL_BOUND = 2.0

SETTINGS = ("11", "12", "21", "22")
_EXACT_EPS = 1e-12


def _exactify(x):
    """Keep rational inputs rational; everything else becomes float."""
    if isinstance(x, Rational):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True, eq=False)
class NoSignalingBox:
    """Conditional probability table p(a, b | x, y).

    table maps the setting key "xy" (x, y in {1, 2}) to a 2x2 nested
    tuple indexed [a][b] with outcome index 0 = '+', 1 = '-'.  Entries are
    Fractions when given as rationals, floats otherwise.  Construction
    checks positivity, normalization per setting, and both no-signaling
    conditions at 1e-12.
    """

    table: dict

    def __post_init__(self):
        clean = {}
        for key in SETTINGS:
            if key not in self.table:
                raise InvalidBox("box-settings", detail=f"missing setting {key!r}")
            cell = self.table[key]
            rows = []
            for a in range(2):
                row = []
                for b in range(2):
                    v = _exactify(cell[a][b])
                    if v < 0:
                        raise InvalidBox(
                            "box-nonnegative",
                            float(-v),
                            detail=f"p({a},{b}|{key})",
                        )
                    row.append(v)
                rows.append(tuple(row))
            total = sum(rows[a][b] for a in range(2) for b in range(2))
            if abs(float(total) - 1.0) > _EXACT_EPS:
                raise InvalidBox(
                    "box-normalization", abs(float(total) - 1.0), detail=f"setting {key!r}"
                )
            clean[key] = tuple(rows)
        object.__setattr__(self, "table", clean)

        # Alice's marginal must not depend on y, Bob's not on x.
        for a in range(2):
            for x in (1, 2):
                m1 = self._alice_marginal(a, x, 1)
                m2 = self._alice_marginal(a, x, 2)
                if abs(float(m1 - m2)) > _EXACT_EPS:
                    raise InvalidBox(
                        "no-signaling-alice",
                        abs(float(m1 - m2)),
                        detail=f"a={a}, x={x}",
                    )
        for b in range(2):
            for y in (1, 2):
                m1 = self._bob_marginal(b, 1, y)
                m2 = self._bob_marginal(b, 2, y)
                if abs(float(m1 - m2)) > _EXACT_EPS:
                    raise InvalidBox(
                        "no-signaling-bob",
                        abs(float(m1 - m2)),
                        detail=f"b={b}, y={y}",
                    )

    def _alice_marginal(self, a: int, x: int, y: int):
        cell = self.table[f"{x}{y}"]
        return cell[a][0] + cell[a][1]

    def _bob_marginal(self, b: int, x: int, y: int):
        cell = self.table[f"{x}{y}"]
        return cell[0][b] + cell[1][b]

    def prob(self, a: int, b: int, x: int, y: int):
        """p(a, b | x, y) with outcome signs a, b in {+1, -1}."""
        return self.table[f"{x}{y}"][(1 - a) // 2][(1 - b) // 2]

    def correlator(self, x: int, y: int):
        """Sum over outcomes of (a*b) p(a, b | x, y); exact if the table is."""
        cell = self.table[f"{x}{y}"]
        return cell[0][0] - cell[0][1] - cell[1][0] + cell[1][1]

    def to_json(self) -> dict:
        return {
            "p": {
                key: [[float(self.table[key][a][b]) for b in range(2)] for a in range(2)]
                for key in SETTINGS
            }
        }


def pr_box() -> NoSignalingBox:
    """Extremal no-signaling box: outcomes agree unless both settings are 2.

    In bit form, a xor b = x and y; every entry is 0 or 1/2 exactly.
    """
    half = Fraction(1, 2)
    table = {}
    for x in (1, 2):
        for y in (1, 2):
            anti = x == 2 and y == 2
            cell = [[Fraction(0)] * 2 for _ in range(2)]
            for a in range(2):
                for b in range(2):
                    agree = a == b
                    cell[a][b] = half if (agree != anti) else Fraction(0)
            table[f"{x}{y}"] = cell
    return NoSignalingBox(table)


def white_noise_box() -> NoSignalingBox:
    q = Fraction(1, 4)
    return NoSignalingBox({key: [[q, q], [q, q]] for key in SETTINGS})


def deterministic_box(alice: tuple[int, int], bob: tuple[int, int]) -> NoSignalingBox:
    """Local deterministic box: outcome signs fixed per setting.

    alice[x-1] and bob[y-1] are the +/-1 outcomes for settings x, y.
    """
    for v in (*alice, *bob):
        if v not in (1, -1):
            raise InvalidBox("deterministic-outcomes", detail=f"got {v!r}")
    table = {}
    for x in (1, 2):
        for y in (1, 2):
            cell = [[Fraction(0)] * 2 for _ in range(2)]
            cell[(1 - alice[x - 1]) // 2][(1 - bob[y - 1]) // 2] = Fraction(1)
            table[f"{x}{y}"] = cell
    return NoSignalingBox(table)


def local_deterministic_boxes() -> list[NoSignalingBox]:
    """All sixteen deterministic local strategies."""
    signs = (1, -1)
    return [
        deterministic_box((a1, a2), (b1, b2))
        for a1 in signs
        for a2 in signs
        for b1 in signs
        for b2 in signs
    ]


@dataclass(frozen=True)
class ChshReport:
    """CHSH combination of four correlators.

    value        -- |t11 + t12 + t21 - t22|
    terms        -- (t11, t12, t21, t22)
    bound_lambda -- the comparison bound 2/lambda_opt for this report:
                    2*sqrt(2) for sharp quantum/box values, 2 when one
                    wing has been smeared to joint measurability
    within_bound -- value <= bound_lambda + 1e-9
    """

    value: float
    terms: tuple[float, float, float, float]
    bound_lambda: float
    within_bound: bool

    def __post_init__(self):
        t11, t12, t21, t22 = self.terms
        recomputed = abs(t11 + t12 + t21 - t22)
        if abs(self.value - recomputed) > 1e-12:
            raise ValidationError("chsh-recomputation", abs(self.value - recomputed))

    @property
    def signed(self) -> float:
        t11, t12, t21, t22 = self.terms
        return t11 + t12 + t21 - t22


def _report(terms, bound: float) -> ChshReport:
    signed = terms[0] + terms[1] + terms[2] - terms[3]
    value = abs(signed)
    terms_f = tuple(float(t) for t in terms)
    value_f = float(value)
    return ChshReport(
        value=value_f,
        terms=terms_f,
        bound_lambda=bound,
        within_bound=value_f <= bound + 1e-9,
    )


def correlation(
    state: DensityMatrix, a: DichotomicObservable, b: DichotomicObservable
) -> float:
    """Tr[state (A x B)] with A = E_yes - E_no on each wing."""
    if state.dim != a.dim * b.dim:
        raise DimensionMismatch(state.dim, a.dim, b.dim)
    op = tensor(a.difference(), b.difference())
    return float(np.trace(state.matrix @ op).real)


def chsh(
    state: DensityMatrix,
    a1: DichotomicObservable,
    a2: DichotomicObservable,
    b1: DichotomicObservable,
    b2: DichotomicObservable,
) -> ChshReport:
    """Sharp CHSH report; compared against the bound 2*sqrt(2)."""
    terms = (
        correlation(state, a1, b1),
        correlation(state, a1, b2),
        correlation(state, a2, b1),
        correlation(state, a2, b2),
    )
    return _report(terms, TSIRELSON_BOUND)


def smeared_chsh(
    state: DensityMatrix,
    a1: DichotomicObservable,
    a2: DichotomicObservable,
    b1: DichotomicObservable,
    b2: DichotomicObservable,
    lam,
) -> ChshReport:
    """CHSH with unsharpness applied to Alice's observables only.

    The value equals lam times the sharp value (each correlator scales
    linearly), so for lam <= 1/sqrt(2) any quantum input lands at or
    below the local bound 2, which is this report's comparison bound.
    """
    lam = float(UnsharpParam.coerce(lam))
    a1s, a2s = smear(a1, lam), smear(a2, lam)
    terms = (
        correlation(state, a1s, b1),
        correlation(state, a1s, b2),
        correlation(state, a2s, b1),
        correlation(state, a2s, b2),
    )
    return _report(terms, LOCAL_BOUND)


def box_chsh(box: NoSignalingBox) -> ChshReport:
    """CHSH of a conditional-probability table; exact on rational boxes."""
    terms = tuple(box.correlator(x, y) for x, y in ((1, 1), (1, 2), (2, 1), (2, 2)))
    return _report(terms, TSIRELSON_BOUND)


@dataclass(frozen=True)
class JointDistributionReport:
    """Existence decision for a 4-outcome joint with given 2x2 marginals.

    For one state and two dichotomic marginals a joint distribution always
    exists (the product table is a witness); the operation's job is to pin
    the marginal semantics and reject malformed inputs.  The force of the
    joint-measurability question is that one observable must do this for
    every state at once; that lives in the operator constructions of the
    joint module, not here.
    """

    exists: bool
    witness: tuple[tuple[float, float], tuple[float, float]]
    residual: float


def _check_distribution(marg) -> tuple[float, float]:
    p = tuple(float(v) for v in marg)
    if len(p) != 2:
        raise InvalidDistribution("dichotomic-marginal", detail=f"length {len(p)}")
    if p[0] < 0 or p[1] < 0:
        raise InvalidDistribution("nonnegative", float(-min(p)))
    if abs(p[0] + p[1] - 1.0) > _EXACT_EPS:
        raise InvalidDistribution("normalized", abs(p[0] + p[1] - 1.0))
    return p


def joint_distribution_exists(marg1, marg2) -> JointDistributionReport:
    """Joint table with the given yes/no marginals (product witness)."""
    p = _check_distribution(marg1)
    q = _check_distribution(marg2)
    witness = tuple(tuple(pi * qj for qj in q) for pi in p)
    residual = max(
        abs(witness[0][0] + witness[0][1] - p[0]),
        abs(witness[1][0] + witness[1][1] - p[1]),
        abs(witness[0][0] + witness[1][0] - q[0]),
        abs(witness[0][1] + witness[1][1] - q[1]),
    )
    return JointDistributionReport(exists=True, witness=witness, residual=residual)


def singlet() -> DensityMatrix:
    """The two-qubit singlet (|01> - |10>) / sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0 / math.sqrt(2.0)
    v[2] = -1.0 / math.sqrt(2.0)
    return DensityMatrix.pure(v)


def _observable_of(matrix) -> DichotomicObservable:
    """Sharp observable of a +/-1-valued Hermitian: yes-effect (I + M)/2."""
    return DichotomicObservable.from_yes_effect((identity(2) + matrix) / 2.0)


def optimal_settings() -> tuple[
    DichotomicObservable, DichotomicObservable, DichotomicObservable, DichotomicObservable
]:
    """Alice z, x; Bob (z+x)/sqrt(2), (z-x)/sqrt(2): saturates 2*sqrt(2) on the singlet."""
    s2 = math.sqrt(2.0)
    return (
        _observable_of(PAULI_Z),
        _observable_of(PAULI_X),
        _observable_of((PAULI_Z + PAULI_X) / s2),
        _observable_of((PAULI_Z - PAULI_X) / s2),
    )
