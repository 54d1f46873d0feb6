"""Exact Diophantine sequences attached to an algebraic integer theta > 1.

Core object: the sequence t*theta^k split into nearest integers K_k and
signed fractional parts eps_k in [-1/2, 1/2).  For t in Z[theta] (or
rational multiples of such elements) the split is exact: coordinates evolve
by the companion-matrix action, and each eps_k is represented exactly as an
element of (1/q) Z[theta], with a certified rational approximation alongside.

On top of the sequences: the window-escape structure (when theta has a
conjugate outside the unit circle, every window [k, k*beta - 1] contains an
index with fractional part at least delta1), the product
exp(-sum ||t theta^k||^2) with its power-law decay report, and the
Erdos-Kahane apparatus: Vandermonde constants (rho, L), one-step integer
prediction, and frequency counting for ||omega * sum a_j theta_j^n||.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import mpmath as mp

from .algebraic import (
    PRECISION_CAP_BITS,
    AlgebraicInteger,
    ZThetaElement,
    prop_alg_constants,
    zt_mul_theta,
    zt_value_interval,
    _poly_degree,
)
from .errors import (
    HalfIntegerAmbiguity,
    PrecisionExhausted,
    RepeatedEigenvalue,
    WrongClass,
    ZeroEigenvalue,
)

MAX_SEQUENCE_LENGTH = 10**5


def companion_matrix(poly_or_ai) -> tuple[tuple[int, ...], ...]:
    """Companion matrix with the coefficient row at the bottom: for
    p = x^s - b1 x^(s-1) - ... - bs the last row is (bs, ..., b1) and the
    rows above shift coordinates up by one."""
    poly = poly_or_ai.poly if isinstance(poly_or_ai, AlgebraicInteger) else tuple(
        int(c) for c in poly_or_ai
    )
    s = _poly_degree(poly)
    rows = [
        tuple(1 if j == i + 1 else 0 for j in range(s)) for i in range(s - 1)
    ]
    rows.append(tuple(-poly[s - i] for i in range(s)))
    return tuple(rows)


# ---------------------------------------------------------------------------
# the split sequence t theta^k = K_k + eps_k


@dataclass(frozen=True)
class PisotLikeSequence:
    """t*theta^k = K[k] + eps_value(k) exactly, for k = 0 .. N-1.

    ``eps_num[k] / denom`` is the exact ring element whose real value is the
    signed fractional part; ``eps[k]`` is a certified rational approximation
    with |true - eps[k]| <= err.  Memory grows quadratically in N because the
    integer coordinates themselves grow like theta^k.
    """

    theta: AlgebraicInteger
    t_coords: ZThetaElement
    denom: int
    K: tuple[int, ...]
    eps: tuple[Fraction, ...]
    eps_num: tuple[ZThetaElement, ...]
    err: Fraction

    def __len__(self) -> int:
        return len(self.K)


def _normalize_t(ai: AlgebraicInteger, t) -> tuple[ZThetaElement, int]:
    s = ai.degree
    if isinstance(t, ZThetaElement):
        if len(t.coords) != s:
            raise ValueError(f"t must have {s} coordinates")
        return t, 1
    if isinstance(t, int):
        return ZThetaElement.from_int(t, s), 1
    if isinstance(t, mp.mpf):
        sign, man, exp, _ = t._mpf_
        man, exp = int(man), int(exp)
        frac = Fraction(0) if man == 0 else Fraction(man) * Fraction(2) ** exp
        if sign:
            frac = -frac
        t = frac
    if isinstance(t, float):
        if not math.isfinite(t):
            raise ValueError("t must be finite")
        t = Fraction(t)
    if isinstance(t, Fraction):
        return (
            ZThetaElement.from_int(t.numerator, s),
            t.denominator,
        )
    raise TypeError(f"cannot interpret {type(t).__name__} as t")


def pisot_sequence(
    ai: AlgebraicInteger,
    t,
    N: int,
    err: Fraction = Fraction(1, 2**40),
) -> PisotLikeSequence:
    """Exact nearest-integer/fractional split of t*theta^k for k < N.

    Ties (value exactly in Z + 1/2) round up, giving eps = -1/2; they can
    only occur when the value is rational, which the exact representation
    detects outright."""
    if not 1 <= N <= MAX_SEQUENCE_LENGTH:
        raise ValueError(f"N must be in [1, {MAX_SEQUENCE_LENGTH}]")
    err = Fraction(err)
    if err <= 0:
        raise ValueError("err must be positive")
    x0, q = _normalize_t(ai, t)
    s = ai.degree
    half = Fraction(1, 2)

    coords = [x0]
    for _ in range(N - 1):
        coords.append(zt_mul_theta(coords[-1], ai))

    maxbit = max(
        max(abs(c) for c in x.coords).bit_length() for x in coords
    )
    err_bits = max(8, (err.denominator // max(err.numerator, 1)).bit_length())
    width = s * maxbit + q.bit_length() + err_bits + 64

    K_list: list[int] = []
    eps_list: list[Fraction] = []
    eps_num_list: list[ZThetaElement] = []
    for x in coords:
        if all(c == 0 for c in x.coords[1:]):
            # exact rational value: decide with no interval at all
            val = Fraction(x.coords[0], q)
            k = math.floor(val + half)  # round half up
            e = val - k
            K_list.append(k)
            eps_list.append(e)
            eps_num_list.append(
                ZThetaElement((x.coords[0] - k * q,) + (0,) * (s - 1))
            )
            continue
        w = width
        while True:
            lo, hi = zt_value_interval(x, ai, w)
            lo, hi = lo / q, hi / q
            k = math.floor((lo + hi) / 2 + half)
            # certified when the whole interval rounds to the same integer
            if math.floor(lo + half) == math.floor(hi + half) and (
                hi - lo
            ) <= 2 * err:
                mid = (lo + hi) / 2 - k
                K_list.append(k)
                eps_list.append(mid)
                eps_num_list.append(
                    ZThetaElement(
                        (x.coords[0] - k * q,) + tuple(x.coords[1:])
                    )
                )
                break
            w *= 2
            if w > PRECISION_CAP_BITS:
                # the interval is pinned to a half-integer boundary
                raise HalfIntegerAmbiguity(
                    "value certified arbitrarily close to Z + 1/2"
                )
    return PisotLikeSequence(
        theta=ai,
        t_coords=x0,
        denom=q,
        K=tuple(K_list),
        eps=tuple(eps_list),
        eps_num=tuple(eps_num_list),
        err=err,
    )


# ---------------------------------------------------------------------------
# window escape


class WindowVerdict(NamedTuple):
    k: int
    passed: bool
    max_eps: float
    argmax: int


@dataclass(frozen=True)
class WindowEscapeReport:
    k0: int
    k0_empirical: bool
    beta: int
    delta1: Fraction
    verdicts: tuple[WindowVerdict, ...]
    first_violation: int | None
    hypothesis_violated: bool


def window_escape_check(
    ai: AlgebraicInteger,
    t,
    k0: int | None = None,
    k_max: int = 50,
    diagnostic: bool = False,
    beta_override: int | None = None,
) -> WindowEscapeReport:
    """For each k in [k0, k_max], certify that some index i in
    [k, k*beta - 1] has ||t theta^i|| >= delta1.

    Requires a conjugate outside the unit circle; with ``diagnostic=True``
    other classes are allowed (beta then comes from ``beta_override`` or
    defaults to 2) and the report is flagged.  When ``k0`` is omitted it is
    set empirically: one past the largest failing window in [1, k_max], plus
    a safety margin of 5 (or 1 when every window passes)."""
    hypothesis_violated = False
    if beta_override is not None and beta_override < 2:
        raise ValueError("beta must be at least 2")
    try:
        consts = prop_alg_constants(ai)
        beta = beta_override or consts.beta
        delta1 = consts.delta1
    except WrongClass:
        if not diagnostic:
            raise
        hypothesis_violated = True
        beta = beta_override or 2
        H = ai.height
        delta1 = Fraction(1, 1 + ai.degree * H)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")

    need = k_max * beta  # largest scalar index used is k_max*beta - 1
    err = Fraction(1, 2**60)
    while True:
        seq = pisot_sequence(ai, t, need, err=err)

        def window(k: int) -> tuple[bool | None, Fraction, int]:
            best = Fraction(0)
            arg = k
            for i in range(k, k * beta):
                a = abs(seq.eps[i])
                if a > best:
                    best, arg = a, i
            if best - err >= delta1:
                return True, best, arg
            if best + err < delta1:
                return False, best, arg
            return None, best, arg  # pinned at delta1 for this err

        undecided = any(
            window(k)[0] is None for k in range(1, k_max + 1)
        )
        if not undecided:
            break
        err /= 2**20
        if err < Fraction(1, 2**PRECISION_CAP_BITS):
            raise PrecisionExhausted("window decision pinned at delta1")

    all_verdicts = {k: window(k) for k in range(1, k_max + 1)}
    empirical = k0 is None
    if empirical:
        failing = [k for k, v in all_verdicts.items() if v[0] is False]
        k0 = max(failing) + 1 + 5 if failing else 1

    verdicts = []
    first_violation = None
    for k in range(k0, k_max + 1):
        ok, best, arg = all_verdicts[k]
        verdicts.append(WindowVerdict(k, bool(ok), float(best), arg))
        if not ok and first_violation is None:
            first_violation = k
    return WindowEscapeReport(
        k0=k0,
        k0_empirical=empirical,
        beta=beta,
        delta1=delta1,
        verdicts=tuple(verdicts),
        first_violation=first_violation,
        hypothesis_violated=hypothesis_violated,
    )


# ---------------------------------------------------------------------------
# the decaying product


@dataclass(frozen=True)
class ProductReport:
    """exp(-sum_{k<N} ||t theta^k||^2) and its decay against C * N^-alpha.

    ``values[n-1]`` is the partial product at depth n (nonincreasing).  The
    constant is fitted on depths up to N/2 and the bound is then checked on
    the second half, so ``bound_ok`` is a genuine out-of-sample test of the
    power-law decay.  ``t_factor`` is (log(1+t))^(1/log beta) for t >= 1 and
    1 for t in (0, 1); in the latter case the bound only applies once
    N >= branch_min_n."""

    value: "mp.mpf"
    log_value: "mp.mpf"
    N: int
    alpha: "mp.mpf | None"
    beta: int | None
    delta1: Fraction | None
    branch: str
    branch_min_n: int
    t_factor: "mp.mpf"
    fitted_C: "mp.mpf | None"
    fitted_exponent: float
    bound_ok: bool | None
    hypothesis_violated: bool
    values: tuple[float, ...]


def _t_value_interval(ai: AlgebraicInteger, t) -> tuple[Fraction, Fraction]:
    x, q = _normalize_t(ai, t)
    maxbit = max(max(abs(c) for c in x.coords).bit_length(), 1)
    lo, hi = zt_value_interval(x, ai, ai.degree * maxbit + 96)
    return lo / q, hi / q


def prop_alg_product(
    ai: AlgebraicInteger,
    t,
    N: int,
    diagnostic: bool = False,
    err: Fraction = Fraction(1, 2**40),
) -> ProductReport:
    """Value of exp(-sum_{k<N} ||t theta^k||^2) with a decay report.

    Raises ``WrongClass`` unless theta has a conjugate outside the unit
    circle; ``diagnostic=True`` computes the product anyway (for classes
    where the sum may converge and the product stays bounded below) and
    flags the report."""
    hypothesis_violated = False
    consts = None
    try:
        consts = prop_alg_constants(ai)
    except WrongClass:
        if not diagnostic:
            raise
        hypothesis_violated = True

    t_lo, t_hi = _t_value_interval(ai, t)
    if t_hi <= 0:
        raise ValueError("t must be positive")

    seq = pisot_sequence(ai, t, N, err=err)
    partial = Fraction(0)
    log_values = []
    for e in seq.eps:
        partial += e * e
        log_values.append(partial)
    with mp.workprec(120):
        values = tuple(
            float(mp.exp(-mp.mpf(p.numerator) / p.denominator))
            for p in log_values
        )
        log_value = -mp.mpf(partial.numerator) / partial.denominator
        value = mp.exp(log_value)

        # branch bookkeeping
        if t_lo >= 1:
            branch = "t>=1"
            branch_min_n = 1
            t_mid = (t_lo + t_hi) / 2
            if consts is not None:
                t_factor = (
                    mp.log(1 + mp.mpf(t_mid.numerator) / t_mid.denominator)
                    ** (1 / mp.log(consts.beta))
                )
            else:
                t_factor = mp.mpf(1)
        else:
            branch = "small-t"
            t_factor = mp.mpf(1)
            # smallest j >= 1 with t theta^j >= 1, decided exactly
            x, q = _normalize_t(ai, t)
            j = 0
            while True:
                j += 1
                x = zt_mul_theta(x, ai)
                if _certified_cmp_one(ai, x, q) >= 0:
                    break
            branch_min_n = 2 * j

        # slope of log(value) vs log(n) over the upper range
        lo_n = max(2, N // 10)
        xs = [math.log(n) for n in range(lo_n, N + 1)]
        ys = [math.log(values[n - 1]) for n in range(lo_n, N + 1)]
        if len(xs) >= 2:
            xbar = sum(xs) / len(xs)
            ybar = sum(ys) / len(ys)
            denom = sum((x - xbar) ** 2 for x in xs)
            slope = (
                sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / denom
                if denom > 0
                else 0.0
            )
        else:
            slope = 0.0

        if consts is None:
            return ProductReport(
                value=+value,
                log_value=+log_value,
                N=N,
                alpha=None,
                beta=None,
                delta1=None,
                branch=branch,
                branch_min_n=branch_min_n,
                t_factor=+t_factor,
                fitted_C=None,
                fitted_exponent=slope,
                bound_ok=None,
                hypothesis_violated=True,
                values=values,
            )

        alpha = consts.alpha
        # fit C on the first half, check the bound on the second half
        fit_lo = max(branch_min_n, 2)
        fit_hi = max(fit_lo, N // 2)
        tf = float(t_factor) if float(t_factor) > 0 else 1.0
        C_candidates = [
            values[n - 1] * n ** float(alpha) / tf
            for n in range(fit_lo, fit_hi + 1)
        ]
        if not C_candidates:
            C_candidates = [values[-1] * N ** float(alpha) / tf]
        fitted_C = mp.mpf(max(C_candidates))
        bound_ok = all(
            values[n - 1] <= float(fitted_C) * tf * n ** (-float(alpha)) * (1 + 1e-9)
            for n in range(fit_hi + 1, N + 1)
        )
        return ProductReport(
            value=+value,
            log_value=+log_value,
            N=N,
            alpha=+alpha,
            beta=consts.beta,
            delta1=consts.delta1,
            branch=branch,
            branch_min_n=branch_min_n,
            t_factor=+t_factor,
            fitted_C=+fitted_C,
            fitted_exponent=slope,
            bound_ok=bound_ok,
            hypothesis_violated=hypothesis_violated,
            values=values,
        )


def _certified_cmp_one(ai, x, q) -> int:
    """Sign of value(x)/q - 1, certified (-1, 0, +1)."""
    if all(c == 0 for c in x.coords[1:]):
        v = Fraction(x.coords[0], q)
        return (v > 1) - (v < 1)
    maxbit = max(max(abs(c) for c in x.coords).bit_length(), 1)
    bits = ai.degree * maxbit + 80
    while bits <= PRECISION_CAP_BITS:
        lo, hi = zt_value_interval(x, ai, bits)
        lo, hi = lo / q, hi / q
        if lo > 1:
            return 1
        if hi < 1:
            return -1
        bits *= 2
    raise PrecisionExhausted("comparison against 1 undecided")


# ---------------------------------------------------------------------------
# Erdos-Kahane apparatus


class EKConstants(NamedTuple):
    rho: "mp.mpf"
    L: int
    L_exact: "mp.mpf"
    theta_list: tuple["mp.mpc", ...]
    vandermonde_norm: "mp.mpf"
    vandermonde_inv_norm: "mp.mpf"
    theta1: "mp.mpf"


def _to_mpc_list(theta_list) -> tuple["mp.mpc", ...]:
    """Convert eigenvalues to mpc at the *current* working precision.

    Must be called inside the ``mp.workprec`` block that will use the
    values: mpmath constructors round to the ambient precision, so
    converting outside the block would silently truncate high-precision
    inputs."""
    return tuple(mp.mpc(z) for z in theta_list)


def ek_constants(theta_list: Sequence, precision_bits: int = 160) -> EKConstants:
    """Vandermonde constants for a list of distinct nonzero eigenvalues.

    Theta has entry (i, j) = theta_j^i for i = 0..m-1; rho and L are
    1/2 * (1 + theta1*norm*inv_norm)^-1 and ceil(2 + theta1*norm*inv_norm),
    with theta1 the largest modulus."""
    m = len(theta_list)
    if m == 0:
        raise ValueError("need at least one eigenvalue")
    with mp.workprec(precision_bits):
        zs = _to_mpc_list(theta_list)
        for i in range(m):
            if zs[i] == 0:
                raise ZeroEigenvalue("zero eigenvalue not allowed")
            for j in range(i + 1, m):
                if zs[i] == zs[j]:
                    raise RepeatedEigenvalue(f"eigenvalue {zs[i]} repeated")
        V = mp.matrix(m, m)
        for i in range(m):
            for j in range(m):
                V[i, j] = zs[j] ** i
        Vinv = V**-1
        norm = max(
            mp.fsum(abs(V[i, j]) for j in range(m)) for i in range(m)
        )
        inv_norm = max(
            mp.fsum(abs(Vinv[i, j]) for j in range(m)) for i in range(m)
        )
        theta1 = max(abs(z) for z in zs)
        L_exact = 2 + theta1 * norm * inv_norm
        L = int(mp.ceil(L_exact - mp.mpf(2) ** (-precision_bits // 2)))
        rho = 1 / (2 * (1 + theta1 * norm * inv_norm))
        return EKConstants(
            rho=+rho,
            L=L,
            L_exact=+L_exact,
            theta_list=zs,
            vandermonde_norm=+norm,
            vandermonde_inv_norm=+inv_norm,
            theta1=+theta1,
        )


def ek_dimension_bound(L: int, m: int, k: int, theta_modulus) -> float:
    """Closed-form exponent log(2 L^(m+1) k) / (k log |theta|)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    tm = float(theta_modulus)
    if tm <= 1:
        raise ValueError("modulus must exceed 1")
    return math.log(2 * L ** (m + 1) * k) / (k * math.log(tm))


class EKPrediction(NamedTuple):
    predicted: float
    best: int
    candidates: tuple[int, ...]
    unique: bool


def ek_step_predict(
    K_window: Sequence[int],
    consts: EKConstants,
    precision_bits: int = 160,
) -> EKPrediction:
    """Candidates for the next nearest integer from m consecutive ones.

    The window evolves (in exact real terms) by conjugation of the diagonal
    eigenvalue action with the Vandermonde matrix; the next value is the last
    component of that image.  All integers within half of (L_exact - 1) of
    the prediction are candidates (at most L of them); ``unique`` is set
    when, under the hypothesis that every fractional part in play is below
    rho, the next integer is forced to be ``best``."""
    m = len(consts.theta_list)
    if len(K_window) != m:
        raise ValueError(f"window must have {m} entries")
    with mp.workprec(precision_bits):
        zs = consts.theta_list
        V = mp.matrix(m, m)
        for i in range(m):
            for j in range(m):
                V[i, j] = zs[j] ** i
        Vinv = V**-1
        y = Vinv * mp.matrix([mp.mpc(int(k)) for k in K_window])
        nxt = mp.fsum(zs[j] ** m * y[j] for j in range(m))
        pred = mp.re(nxt)
        halfwidth = (consts.L_exact - 1) / 2
        lo = int(mp.floor(pred - halfwidth))
        hi = int(mp.ceil(pred + halfwidth))
        candidates = tuple(
            c for c in range(lo, hi + 1) if abs(pred - c) <= halfwidth + mp.mpf(2) ** -40
        )
        best = int(mp.nint(pred))
        margin = consts.rho * consts.theta1 * consts.vandermonde_norm * consts.vandermonde_inv_norm
        slack = mp.mpf(2) ** -40
        unique = bool(abs(pred - best) + margin + slack < mp.mpf("0.5")) or len(candidates) == 1
        return EKPrediction(
            predicted=float(pred),
            best=best,
            candidates=candidates,
            unique=unique,
        )


class EKFrequencyReport(NamedTuple):
    count: int
    fraction: float
    N: int
    rho: Fraction
    distances: tuple[float, ...]


def ek_frequency(
    theta_list: Sequence,
    a_coeffs: Sequence,
    omega,
    N: int,
    rho,
    precision_bits: int = 0,
) -> EKFrequencyReport:
    """Count of n in [1, N] with ||omega * sum_j a_j theta_j^n|| >= rho.

    Requires a_1 = 1 and conjugate-pair symmetry of the coefficients (each
    non-real eigenvalue's partner carries the conjugate coefficient), which
    makes the sums real.  Precision escalates until every comparison against
    rho is decided; if a distance equals rho exactly (possible for rational
    orbits) no precision suffices and ``PrecisionExhausted`` is raised."""
    m = len(theta_list)
    if len(a_coeffs) != m:
        raise ValueError("need one coefficient per eigenvalue")
    # validation only needs moderate accuracy; working copies are
    # re-converted from the original inputs at every precision level
    zs0 = _to_mpc_list(theta_list)
    avals0 = tuple(mp.mpc(a) for a in a_coeffs)
    if avals0[0] != 1:
        raise ValueError("leading coefficient must be exactly 1")
    tol = mp.mpf(2) ** -30
    for i in range(m):
        partner = None
        for j in range(m):
            if abs(zs0[j] - mp.conj(zs0[i])) <= tol * (1 + abs(zs0[i])):
                partner = j
                break
        if partner is None or abs(
            avals0[partner] - mp.conj(avals0[i])
        ) > tol * (1 + abs(avals0[i])):
            raise ValueError("coefficients must be conjugate-symmetric")
    if N < 1:
        raise ValueError("N must be at least 1")
    rho_f = Fraction(rho) if not isinstance(rho, Fraction) else rho
    if not 0 < rho_f <= Fraction(1, 2):
        raise ValueError("rho must lie in (0, 1/2]")
    om = omega
    theta_max0 = max((abs(z) for z in zs0), default=mp.mpf(1))
    base_bits = precision_bits or int(N * mp.log(max(theta_max0, 2), 2)) + 96
    bits = max(base_bits, 96)
    while bits <= PRECISION_CAP_BITS:
        with mp.workprec(bits):
            zs = _to_mpc_list(theta_list)
            rr = mp.mpf(rho_f.numerator) / rho_f.denominator
            omv = mp.mpf(om) if not isinstance(om, Fraction) else mp.mpf(
                om.numerator
            ) / om.denominator
            avals = tuple(mp.mpc(a) for a in a_coeffs)
            theta_max = max((abs(z) for z in zs), default=mp.mpf(1))
            powers = [mp.mpc(a) for a in avals]
            # running bound on the accumulated rounding error of x
            mag = mp.fsum(abs(a) for a in avals) * (abs(omv) + 1)
            ulp = mp.mpf(2) ** (4 - bits)
            count = 0
            distances = []
            ambiguous = False
            for n in range(1, N + 1):
                powers = [powers[j] * zs[j] for j in range(m)]
                mag = mag * theta_max
                x = omv * mp.re(mp.fsum(powers))
                guard = mag * (n + 3) * ulp
                d = abs(x - mp.nint(x))
                distances.append(float(d))
                if abs(d - rr) <= guard:
                    ambiguous = True
                    break
                if d >= rr:
                    count += 1
            if not ambiguous:
                return EKFrequencyReport(
                    count=count,
                    fraction=count / N,
                    N=N,
                    rho=rho_f,
                    distances=tuple(distances),
                )
        bits *= 2
    raise PrecisionExhausted("distance comparison against rho undecided")
