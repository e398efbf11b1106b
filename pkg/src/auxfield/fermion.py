"""Four-fermi Grassmann model with one odd-mass species.

Z = sqrt(N/2pi) int dt (omega0 + lam t) exp(-N [t^2/2 - ln(omega + lam t)])

Method I expands around the two roots of the quadratic gap equation.
Method II folds ln g into the exponent; the cubic gap equation then has a
third root near the zero of g, whose 1/N expansion is assembled order by order
from the prefactor factors F(1)..F(3) and the loop factor (F(4), F(5) ratios).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, sqrt
from typing import Literal, Sequence

from .combinatorics import t_coefficient
from .laplace import DerivativeJet, LoopSeries, evaluate_l_loop, method1_coefficients, method2_coefficients

BranchIndex = Literal["plus", "minus", "third"]


class NonExpandableBranch(ValueError):
    """A saddle branch whose 1/N expansion does not exist (B = 0)."""


@dataclass(frozen=True)
class FermionParams:
    N: int
    omega: float
    omega0: float
    lam: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        if not (self.omega > 0 and self.omega0 > 0 and self.lam > 0):
            raise ValueError("omega, omega0 and lambda must all be positive")

    @property
    def delta_omega(self):
        return self.omega0 - self.omega


def sign(x: float) -> int:
    """Strict sign; the expansions never need it at zero."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    raise ValueError("sign of exactly zero is undefined here")


# ---------------------------------------------------------------- exact


def exact_partition(p: FermionParams):
    """Closed-form Grassmann integral.

    Summed in exact rationals (floats convert exactly), so large N cannot
    overflow intermediate terms; returned as a Fraction when every parameter
    is rational, as a float otherwise.
    """
    N = p.N
    w, w0, lam = (Fraction(v) for v in (p.omega, p.omega0, p.lam))
    lam2 = lam * lam
    total = Fraction(0)
    for r in range(N // 2 + 1):
        free = N - 2 * r
        # omega0 omega^free + (lam^2/N) free omega^(free-1); avoids omega^-1 when free = 0
        bracket = w0 * w ** free + lam2 / N * free * (w ** (free - 1) if free else 0)
        total += math.comb(N, 2 * r) * math.comb(2 * r, r) * factorial(r) * bracket * (lam2 / (2 * N)) ** r
    if all(isinstance(v, (int, Fraction)) for v in (p.omega, p.omega0, p.lam)):
        return total
    return float(total)


def ks_exact(N: int, omega, lam_ks):
    """All species degenerate: sum_r N!/(r!(N-2r)!) omega^(N-2r) (lam^2/2N)^r."""
    exact = isinstance(omega, (int, Fraction)) and isinstance(lam_ks, (int, Fraction))
    lam2 = Fraction(lam_ks) ** 2 if exact else float(lam_ks) ** 2
    w = Fraction(omega) if exact else float(omega)
    return sum(
        factorial(N) // (factorial(r) * factorial(N - 2 * r)) * w ** (N - 2 * r) * (lam2 / (2 * N)) ** r
        for r in range(N // 2 + 1)
    )


# ---------------------------------------------------------------- method I


def quadratic_saddles(omega: float, lam: float) -> tuple[float, float]:
    """Roots of Omega^2 - omega Omega - lam^2 = 0 (plus, minus)."""
    root = sqrt(omega * omega + 4 * lam * lam)
    plus = (omega + root) / 2
    # minus root via Vieta to avoid cancellation when lam << omega
    return plus, -lam * lam / plus


def _exp_weight(N, Omega0, omega, lam):
    return math.exp(-N * (Omega0 - omega) ** 2 / (2 * lam * lam)) * Omega0 ** N


def method1_branch(p: FermionParams, Omega0: float, l: int) -> float:
    """Tree (l = 0) or l-loop contribution of one quadratic saddle, from T(L,k|.) coefficients."""
    N, w, lam, d = p.N, p.omega, p.lam, p.delta_omega
    weight = _exp_weight(N, Omega0, w, lam)
    if l == 0:
        return weight * (Omega0 + d)
    S = Omega0 * Omega0 + lam * lam
    x = lam * lam / S
    series = 0.0
    for L in range(l):
        inner = 0.0
        for k in range(2 * L + 1):
            inner += x ** (L + k) * (
                (Omega0 + d) * float(t_coefficient(L, k, 2 * L - k))
                - Omega0 * float(t_coefficient(L, k, 2 * L - k - 1))
            )
        series += inner / N ** L
    return sign(Omega0) * Omega0 ** (N + 1) / sqrt(S) * math.exp(-N * (Omega0 - w) ** 2 / (2 * lam * lam)) * series


def method1_z(p: FermionParams, l: int) -> float:
    """Sum of both quadratic saddles at tree (l = 0) or l-loop."""
    return sum(method1_branch(p, om, l) for om in quadratic_saddles(p.omega, p.lam))


def fermion_jet(p: FermionParams, Omega0: float, order: int, with_g: bool = True) -> DerivativeJet:
    """Derivatives of f = t^2/2 - ln(omega + lam t) and g = omega0 + lam t at t0 = (Omega0 - omega)/lam."""
    lam, w = p.lam, p.omega
    f0 = (Omega0 - w) ** 2 / (2 * lam * lam) - cmath.log(Omega0) if Omega0 < 0 else \
        (Omega0 - w) ** 2 / (2 * lam * lam) - math.log(Omega0)
    r = -lam / Omega0
    fd = [1 + r * r] + [factorial(m - 1) * r ** m for m in range(3, order + 1)]
    gd = None
    if with_g:
        gd = [Omega0 + p.delta_omega, lam] + [0.0] * max(0, order - 1)
    return DerivativeJet(f0, fd, gd)


def method1_series(p: FermionParams, L_max: int) -> list[LoopSeries]:
    """Generic-engine loop series at the plus and minus saddles."""
    return [method1_coefficients(fermion_jet(p, om, 2 * L_max + 3), L_max)
            for om in quadratic_saddles(p.omega, p.lam)]


def method1_z_engine(p: FermionParams, l: int) -> float:
    """Same quantity as :func:`method1_z`, computed by the general expansion engine."""
    # the tree is the bare exp(-N f0) g0, without the sqrt(N/2pi) of Z
    norm = sqrt(p.N / (2 * math.pi)) if l else 1.0
    return sum(norm * evaluate_l_loop(s, p.N, l) for s in method1_series(p, max(l - 1, 0)))


# ---------------------------------------------------------------- KS model


def ks_model_z(N: int, omega: float, lam_ks: float, l: int) -> float:
    """Fully degenerate model (g == 1) expanded at both quadratic saddles."""
    p = FermionParams(N, omega, omega, lam_ks)
    L_max = max(l - 1, 0)
    norm = sqrt(N / (2 * math.pi)) if l else 1.0
    total = 0.0
    for om in quadratic_saddles(omega, lam_ks):
        series = method2_coefficients(fermion_jet(p, om, 2 * L_max + 3, with_g=False), L_max)
        total += norm * evaluate_l_loop(series, N, l)
    return total


# ---------------------------------------------------------------- method II


@dataclass(frozen=True)
class SaddleBranch:
    index: BranchIndex
    Omega0: float
    Omega1: float
    Omega2: float
    A: float
    B: float

    @property
    def expandable(self) -> bool:
        return self.B != 0


def _perturb(index: BranchIndex, Omega0: float, p: FermionParams) -> SaddleBranch:
    w, d, lam2 = p.omega, p.delta_omega, p.lam * p.lam
    A = 3 * Omega0 - w + d
    B = 3 * Omega0 * Omega0 - 2 * (w - d) * Omega0 - w * d - lam2
    scale = max(3 * Omega0 * Omega0, abs(2 * (w - d) * Omega0), abs(w * d), lam2)
    if abs(B) <= 1e-13 * scale:
        return SaddleBranch(index, Omega0, math.nan, math.nan, A, 0.0)
    O1 = lam2 * Omega0 / B
    O2 = (lam2 * O1 - O1 * O1 * A) / B
    return SaddleBranch(index, Omega0, O1, O2, A, B)


def solve_branches(p: FermionParams) -> list[SaddleBranch]:
    """The three 1/N series roots of (Oc + dw)(Oc^2 - w Oc - lam^2) = lam^2 Oc / N."""
    plus, minus = quadratic_saddles(p.omega, p.lam)
    return [
        _perturb("plus", plus, p),
        _perturb("minus", minus, p),
        _perturb("third", -p.delta_omega, p),
    ]


def cubic_gap_roots(p: FermionParams, N: float | None = None) -> list[float]:
    """Real roots of the cubic gap equation at finite N (numeric; used as an oracle)."""
    import numpy as np

    N = p.N if N is None else N
    d, w, lam2 = p.delta_omega, p.omega, p.lam ** 2
    # (O + d)(O^2 - w O - lam2) - lam2 O / N
    coeffs = [1.0, d - w, -lam2 - w * d - lam2 / N, -lam2 * d]
    roots = np.roots(coeffs)
    return sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9 * max(1.0, abs(r)))


@dataclass(frozen=True)
class AppendixCFactors:
    """Expansion coefficients of the prefactor and loop factor on one branch.

    ``F`` maps r = 1..3 to (F_0, F_1, F_2) (F_2 is None on the third branch),
    ``F4`` is (F_0(4), F_1(4)), ``F5`` maps M to (F_0, F_1), ``R`` maps M to
    (R_0, R_1). ``P`` and ``L`` hold the prefactor/loop coefficients as
    defined per branch kind (P_0, P_1, P_2 for plus/minus, P_1, P_2 for the
    third branch; loop entries per truncation level for the third branch).
    """

    branch: SaddleBranch
    F: dict
    F4: tuple
    F5: dict
    R: dict
    P: dict
    L: dict


_ONE_LOOP_WEIGHTS = (-Fraction(3, 4), Fraction(5, 6))


def _loop_brackets(lam2, R0, R1=None):
    """The L=1 and L=2 brackets of the loop factor (and their first-order variations)."""
    one = -Fraction(3, 4) * lam2 * R0[4] + Fraction(5, 6) * lam2 ** 2 * R0[3] ** 2
    two = (-Fraction(5, 2) * lam2 * R0[6] + 7 * lam2 ** 2 * R0[3] * R0[5]
           + Fraction(105, 32) * lam2 ** 2 * R0[4] ** 2
           - Fraction(105, 8) * lam2 ** 3 * R0[3] ** 2 * R0[4]
           + Fraction(385, 72) * lam2 ** 4 * R0[3] ** 4)
    if R1 is None:
        return float(one), float(two), None, None
    d_one = (-Fraction(3, 4) * lam2 * R0[4] * R1[4]
             + Fraction(5, 3) * lam2 ** 2 * R0[3] ** 2 * R1[3])
    d_two = (-Fraction(5, 2) * lam2 * R0[6] * R1[6]
             + 7 * lam2 ** 2 * R0[3] * R0[5] * (R1[3] + R1[5])
             + Fraction(105, 16) * lam2 ** 2 * R0[4] ** 2 * R1[4]
             - Fraction(105, 8) * lam2 ** 3 * R0[3] ** 2 * R0[4] * (2 * R1[3] + R1[4])
             + Fraction(385, 18) * lam2 ** 4 * R0[3] ** 4 * R1[3])
    return float(one), float(two), float(d_one), float(d_two)


def appendix_c_factors(p: FermionParams, br: SaddleBranch) -> AppendixCFactors:
    if not br.expandable:
        raise NonExpandableBranch(f"branch {br.index} has B = 0; its 1/N expansion does not exist")
    if br.index == "third" and p.delta_omega == 0:
        # Omega_0 = Omega_1 = 0: the branch carries no weight, and no sign is taken
        return AppendixCFactors(br, {}, (0.0, 0.0), {}, {}, {1: 0.0, 2: 0.0, "shift": 0.0}, {})
    N, w, d, lam = p.N, p.omega, p.delta_omega, p.lam
    lam2 = lam * lam
    O0, O1, O2 = br.Omega0, br.Omega1, br.Omega2
    # exponent shift of F_0(1) F_0(2): 0 on the quadratic branches, -1 on the third
    shift = -(O0 - w) * O1 / lam2 + O1 / O0
    F1_0 = math.exp(-N * (O0 - w) ** 2 / (2 * lam2) - (O0 - w) * O1 / lam2)
    F1_1 = -(O1 * O1 + 2 * (O0 - w) * O2) / (2 * lam2)
    F2_0 = O0 ** N * math.exp(O1 / O0)
    u = O1 / O0
    F2_1 = O2 / O0 - u * u / 2

    if br.index != "third":
        D = O0 + d
        S = O0 * O0 + lam2
        F1_2 = F1_1 ** 2 / 2 - O1 * O2 / lam2
        F2_2 = F2_1 ** 2 / 2 - O1 * O2 / O0 ** 2 + u ** 3 / 3
        F3_0 = sign(O0) * O0 / sqrt(S)
        F3_1 = lam2 / S * (u - (O0 / D) ** 2 / 2)
        F3_2 = 1.5 * F3_1 ** 2 + lam2 / S * (O2 / O0 + O0 ** 2 * O1 / D ** 3 - 1.5 * u * u)
        F = {1: (F1_0, F1_1, F1_2), 2: (F2_0, F2_1, F2_2), 3: (F3_0, F3_1, F3_2)}
        F4 = (D * D * S, 2 * O1 / D + 2 * O0 * O1 / S + lam2 * O0 * O0 / (D * D * S))
        F5 = {M: (D ** M, (O0 / D) ** M + M * O1 / D) for M in range(3, 7)}
        R = {M: (D ** (M - 2) / S, F5[M][1] - F4[1]) for M in range(3, 7)}
        firsts = [F[r][1] for r in (1, 2, 3)]
        P0 = F1_0 * F2_0 * F3_0 * D
        P1 = sum(firsts) + O1 / D
        P2 = (sum(F[r][2] for r in (1, 2, 3)) + O2 / D
              + firsts[0] * firsts[1] + firsts[0] * firsts[2] + firsts[1] * firsts[2]
              + O1 / D * sum(firsts))
        R0 = {M: R[M][0] for M in R}
        R1 = {M: R[M][1] for M in R}
        one, two, d_one, _ = _loop_brackets(lam2, R0, R1)
        L1 = lam2 / F4[0] * one
        L2 = lam2 ** 2 / F4[0] ** 2 * two - L1 * F4[1] + lam2 / F4[0] * d_one
        return AppendixCFactors(br, F, F4, F5, R, {0: P0, 1: P1, 2: P2, "shift": shift},
                                {0: 1.0, 1: L1, 2: L2})

    # third branch: Omega_c + dw starts at O(1/N)
    F3_0 = sign(O1) * O1 / (sqrt(N) * lam)
    F3_1 = O2 / O1 - O1 * O1 / (2 * lam2) - u * u / 2
    F = {1: (F1_0, F1_1, None), 2: (F2_0, F2_1, None), 3: (F3_0, F3_1, None)}
    F4 = (lam2 * O0 * O0, 2 * u + u * u + O1 * O1 / lam2)
    F5 = {M: (O0 ** M, M * u) for M in range(3, 7)}
    R = {M: (O0 ** (M - 2) / lam2, F5[M][1] - F4[1]) for M in range(3, 7)}
    P1 = F1_0 * F2_0 * F3_0 * O1 / N
    P2 = F1_1 + F2_1 + F3_1 + O2 / O1
    R0 = {M: R[M][0] for M in R}
    R1 = {M: R[M][1] for M in R}
    one, two, d_one, d_two = _loop_brackets(lam2, R0, R1)
    a = lam2 / F4[0]
    L0_2 = 1 + a * one
    L1_2 = a * (one * -F4[1] + d_one)
    L0_3 = L0_2 + a * a * two
    L1_3 = L1_2 + a * a * (two * (-2 * F4[1]) + d_two)
    # P1 above already carries its 1/N; the stored P[1] is the N-free coefficient
    return AppendixCFactors(br, F, F4, F5, R, {1: P1 * N, 2: P2, "shift": shift},
                            {(0, 2): L0_2, (1, 2): L1_2, (0, 3): L0_3, (1, 3): L1_3})


def method2_branch(p: FermionParams, br: SaddleBranch, l: int) -> float:
    """Contribution of one branch at tree (l = 0) up to 3-loop."""
    if l < 0 or l > 3:
        raise ValueError("method II is assembled through 3-loop only")
    N = p.N
    if br.index == "third":
        if p.delta_omega == 0:
            return 0.0
        if l < 2:
            return 0.0
        c = appendix_c_factors(p, br)
        P1, P2 = c.P[1], c.P[2]
        if l == 2:
            return P1 / N * c.L[(0, 2)]
        return P1 / N * (c.L[(0, 3)] + (c.L[(1, 3)] + c.L[(0, 3)] * P2) / N)
    O0, d = br.Omega0, p.delta_omega
    if l == 0:
        return _exp_weight(N, O0, p.omega, p.lam) * (O0 + d)
    c = appendix_c_factors(p, br)
    # leading prefactor with the Omega_1 exponent shift removed
    z1 = c.P[0] / math.exp(c.P["shift"])
    if l == 1:
        return z1
    if l == 2:
        c0 = appendix_c_factors(p, SaddleBranch(br.index, br.Omega0, br.Omega1, 0.0, br.A, br.B))
        return z1 * (1 + (c0.P[1] + c0.L[1]) / N)
    P1, P2, L1, L2 = c.P[1], c.P[2], c.L[1], c.L[2]
    return z1 * (1 + (P1 + L1) / N + (P2 + L2 + P1 * L1) / N ** 2)


def method2_z(p: FermionParams, l: int) -> float:
    """Sum over the three branches; the third contributes from 2-loop on."""
    total = 0.0
    for br in solve_branches(p):
        if br.index == "third" and (p.delta_omega == 0 or l < 2):
            continue
        if not br.expandable:
            raise NonExpandableBranch(f"branch {br.index} has B = 0; its 1/N expansion does not exist")
        total += method2_branch(p, br, l)
    return total


def third_branch_z(p: FermionParams, l: int = 3) -> float:
    """Third-saddle contribution alone (zero when omega0 == omega)."""
    if p.delta_omega == 0:
        return 0.0
    br = solve_branches(p)[2]
    return method2_branch(p, br, l)


def figure2_data(omega0_list: Sequence[float], lambda_grid: Sequence[float],
                 N: int = 2, omega: float = 1.0) -> list[tuple[float, list[float]]]:
    """Rows (lambda, [Z3_3loop for each omega0])."""
    rows = []
    for lam in lambda_grid:
        rows.append((lam, [third_branch_z(FermionParams(N, omega, w0, lam), 3) for w0 in omega0_list]))
    return rows


# ---------------------------------------------------------------- tables

TABLE_LAMBDAS = (1e-3, 1e-2, 1e-1, 1.0, 10.0)
TABLE_OMEGA0 = (1e2, 1.0, 1e-2)


@dataclass(frozen=True)
class TableRow:
    omega0: float
    lam: float
    exact: float
    values: tuple  # tree, 1-loop, ...

    @property
    def ratios(self) -> tuple:
        return tuple(v / self.exact for v in self.values)


def fermion_table(method: str = "I", omega0_list: Sequence[float] = TABLE_OMEGA0,
                  lambda_grid: Sequence[float] = TABLE_LAMBDAS, loops: int = 3,
                  N: int = 2, omega: float = 1.0) -> list[TableRow]:
    """Blocks by omega0, rows by lambda, values tree..``loops``-loop."""
    if method not in ("I", "II"):
        raise ValueError(f"method must be 'I' or 'II', got {method!r}")
    z = method1_z if method == "I" else method2_z
    rows = []
    for w0 in omega0_list:
        for lam in lambda_grid:
            p = FermionParams(N, omega, w0, lam)
            rows.append(TableRow(w0, lam, float(exact_partition(p)), tuple(z(p, l) for l in range(loops + 1))))
    return rows


def ks_table(lambda_grid: Sequence[float] = TABLE_LAMBDAS, N: int = 3, omega: float = 1.0,
             coupling_scale: float = sqrt(1.5), loops: int = 3) -> list[TableRow]:
    """Degenerate model rows at lambda_KS = coupling_scale * lambda (omega0 column holds omega)."""
    rows = []
    for lam in lambda_grid:
        lk = coupling_scale * lam
        rows.append(TableRow(omega, lam, float(ks_exact(N, omega, lk)),
                             tuple(ks_model_z(N, omega, lk, l) for l in range(loops + 1))))
    return rows
