"""Transfer matrices and twisted exponential sums over substituted words.

The twisted sum of a word ``v`` at frequency ``omega`` adds one unit-modulus
phase ``e^(-2 pi i omega j)`` per occurrence of a chosen letter at position
``j``.  Under a substitution these sums obey an exact matrix recursion across
levels, so quantities attached to words of astronomical length remain
computable without ever expanding the words.

Numerical policy: every phase is the product of the frequency with an exact
big-integer (or exact rational, for weighted/suspension variants) cumulative
length, reduced mod 1 in exact rational arithmetic *before* any
floating-point rounding.  Matrix products then accumulate at a configurable
working precision (default 106 bits) with per-step norm logging.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath as mp

from .errors import BudgetExceeded
from .substitution import (
    Substitution,
    Word,
    _as_matrix,
    _mat_mul,
    lengths_at,
    substitution_matrix,
)

DEFAULT_PRECISION_BITS = 106  # double-double equivalent


# ---------------------------------------------------------------------------
# exact scalar plumbing


def as_exact(x) -> Fraction:
    """Exact rational value of ``x`` (int, Fraction, float, or mpf).

    Floats and mpfs are binary rationals, so the conversion is lossless."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("frequency/roof values must be finite")
        return Fraction(x)
    if isinstance(x, mp.mpf):
        sign, man, exp, _ = x._mpf_
        man, exp = int(man), int(exp)
        if man == 0:
            return Fraction(0)
        v = Fraction(man) * (Fraction(2) ** exp)
        return -v if sign else v
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact rational")


def _phase_unit(phase: Fraction) -> "mp.mpc":
    """e^(-2 pi i phase) for phase already reduced to [0, 1)."""
    if phase == 0:
        return mp.mpc(1)
    x = mp.mpf(phase.numerator) / phase.denominator
    return mp.expjpi(-2 * x)


def _unit(omega: Fraction, length: Fraction | int) -> "mp.mpc":
    return _phase_unit((omega * length) % 1)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class TransferMatrix:
    """One level of the exact recursion for twisted sums.

    ``entries[b-1][c-1]`` is a sum of unit-modulus phases, one per occurrence
    of letter ``c`` in the image of letter ``b``; the phase of each term is
    the frequency times the cumulative expanded length of the preceding part
    of the image.  At ``omega = 0`` the matrix is exactly the transpose of
    the substitution matrix.  ``roof`` switches the cumulative lengths from
    letter counts to weighted (tiling) lengths.
    """

    n: int
    omega: Fraction
    entries: tuple[tuple["mp.mpc", ...], ...]
    roof: tuple[Fraction, ...] | None
    precision_bits: int

    @property
    def m(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class TwistedProduct:
    """Left-to-right product of transfer matrices for levels k .. k+n-1.

    Column ``a-1`` of ``matrix`` holds the twisted sums of the level-``n``
    images: ``matrix[b-1][a-1]`` equals the twisted sum counting letter ``a``
    over the ``n``-fold image of letter ``b`` (for ``k = 0``).
    ``per_step_norms`` logs the max-row-sum norm after each factor.
    """

    n: int
    k: int
    omega: Fraction
    matrix: tuple[tuple["mp.mpc", ...], ...]
    per_step_norms: tuple[float, ...]
    roof: tuple[Fraction, ...] | None
    precision_bits: int

    @property
    def m(self) -> int:
        return len(self.matrix)


# ---------------------------------------------------------------------------
# complex matrix helpers (tuples of mpc rows)


def _cmat_identity(m: int) -> tuple[tuple["mp.mpc", ...], ...]:
    return tuple(
        tuple(mp.mpc(1) if i == j else mp.mpc(0) for j in range(m))
        for i in range(m)
    )


def _cmat_mul(A, B):
    m = len(A)
    return tuple(
        tuple(
            mp.fsum(
                (A[i][t] * B[t][j] for t in range(m)),
            )
            for j in range(m)
        )
        for i in range(m)
    )


def _cnorm_inf(A) -> float:
    return max(float(sum(abs(x) for x in row)) for row in A)


# ---------------------------------------------------------------------------
# level structure: which letter sits where in each image, with cumulative
# expanded lengths (shared by all frequencies at a given level)


def _validate_roof(zeta: Substitution, roof) -> tuple[Fraction, ...]:
    r = tuple(as_exact(x) for x in roof)
    if len(r) != zeta.m:
        raise ValueError(f"roof must have {zeta.m} entries, got {len(r)}")
    if any(x <= 0 for x in r):
        raise ValueError("roof values must be strictly positive")
    return r


@lru_cache(maxsize=4096)
def _matrix_power(zeta: Substitution, n: int):
    S = _as_matrix(substitution_matrix(zeta))
    acc = tuple(
        tuple(1 if i == j else 0 for j in range(zeta.m)) for i in range(zeta.m)
    )
    for _ in range(n):
        acc = _mat_mul(acc, S)
    return acc


def tiling_lengths_at(
    zeta: Substitution, n: int, roof: tuple[Fraction, ...]
) -> tuple[Fraction, ...]:
    """Weighted length of the n-fold image of each letter: the letter-count
    vector of the image contracted against the roof."""
    Sn = _matrix_power(zeta, n)
    return tuple(
        sum((roof[i] * Sn[i][c] for i in range(zeta.m)), Fraction(0))
        for c in range(zeta.m)
    )


@lru_cache(maxsize=4096)
def _level_structure(
    zeta: Substitution, n: int, roof: tuple[Fraction, ...] | None
) -> tuple[tuple[tuple[int, Fraction | int], ...], ...]:
    """Per letter b: tuple of (c, cumulative length of the image prefix
    strictly before this occurrence), with lengths at level n."""
    if roof is None:
        lens: Sequence[Fraction | int] = lengths_at(zeta, n)
    else:
        lens = tiling_lengths_at(zeta, n, roof)
    out = []
    for b in range(1, zeta.m + 1):
        cum: Fraction | int = 0 if roof is None else Fraction(0)
        occ = []
        for c in zeta.image(b):
            occ.append((c, cum))
            cum = cum + lens[c - 1]
        out.append(tuple(occ))
    return tuple(out)


# ---------------------------------------------------------------------------
# operations


def phi_direct(
    v: Word | Sequence[int] | str,
    a: int,
    omega,
    budget: int = 1_000_000,
) -> complex:
    """Brute-force twisted sum over an explicit word: one term
    ``e^(-2 pi i omega j)`` per position ``j`` (0-based) holding letter ``a``.

    Phases are reduced mod 1 with exact integer arithmetic, so the result is
    accurate to ~1 ulp per term even for very long words."""
    from .substitution import as_word

    w = as_word(v)
    if len(w) > budget:
        raise BudgetExceeded(
            f"word of length {len(w)} exceeds the expansion budget {budget}"
        )
    om = as_exact(omega) % 1
    p, q = om.numerator, om.denominator
    acc = 0j
    for j, letter in enumerate(w):
        if letter == a:
            r = (p * j) % q
            acc += cmath.exp(-2j * cmath.pi * (r / q))
    return acc


def phi_suspension_direct(
    v: Word | Sequence[int] | str,
    roof: Sequence,
    a: int,
    omega,
    budget: int = 1_000_000,
) -> complex:
    """Brute-force weighted twisted sum: the phase at position ``j`` uses the
    weighted length of the prefix *including* position ``j`` (the natural
    convention when letters carry durations)."""
    from .substitution import as_word

    w = as_word(v)
    if len(w) > budget:
        raise BudgetExceeded(
            f"word of length {len(w)} exceeds the expansion budget {budget}"
        )
    m = max(w) if w else 0
    r = tuple(as_exact(x) for x in roof)
    if len(r) < m:
        raise ValueError("roof shorter than the alphabet of the word")
    if any(x <= 0 for x in r):
        raise ValueError("roof values must be strictly positive")
    om = as_exact(omega)
    acc = 0j
    cum = Fraction(0)
    for letter in w:
        cum += r[letter - 1]
        if letter == a:
            phase = (om * cum) % 1
            acc += cmath.exp(-2j * cmath.pi * (phase.numerator / phase.denominator))
    return acc


def transfer_matrix(
    zeta: Substitution,
    n: int,
    omega,
    roof: Sequence | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> TransferMatrix:
    """Level-``n`` transfer matrix at the given frequency.

    Entry (b, c) sums one unit-modulus phase per occurrence of ``c`` in the
    image of ``b``; each phase is the frequency times the exact cumulative
    level-``n`` expanded length of the image prefix before that occurrence.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    om = as_exact(omega)
    rf = None if roof is None else _validate_roof(zeta, roof)
    structure = _level_structure(zeta, n, rf)
    m = zeta.m
    with mp.workprec(precision_bits):
        rows = []
        for b in range(m):
            acc: list["mp.mpc"] = [mp.mpc(0)] * m
            for c, cum in structure[b]:
                acc[c - 1] = acc[c - 1] + _unit(om, cum)
            rows.append(tuple(acc))
    return TransferMatrix(
        n=n, omega=om, entries=tuple(rows), roof=rf, precision_bits=precision_bits
    )


def shifted_product(
    zeta: Substitution,
    k: int,
    n: int,
    omega,
    roof: Sequence | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> TwistedProduct:
    """Product of the ``n`` transfer matrices for levels k .. k+n-1, newest
    level on the left."""
    if n < 1:
        raise ValueError("depth must be at least 1")
    if k < 0:
        raise ValueError("shift must be nonnegative")
    om = as_exact(omega)
    rf = None if roof is None else _validate_roof(zeta, roof)
    with mp.workprec(precision_bits):
        A = transfer_matrix(zeta, k, om, rf, precision_bits).entries
        norms = [_cnorm_inf(A)]
        for level in range(k + 1, k + n):
            Mk = transfer_matrix(zeta, level, om, rf, precision_bits).entries
            A = _cmat_mul(Mk, A)
            norms.append(_cnorm_inf(A))
    return TwistedProduct(
        n=n,
        k=k,
        omega=om,
        matrix=A,
        per_step_norms=tuple(norms),
        roof=rf,
        precision_bits=precision_bits,
    )


def riesz_product(
    zeta: Substitution,
    n: int,
    omega,
    roof: Sequence | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> TwistedProduct:
    """Product of the first ``n`` transfer matrices (levels n-1 down to 0).

    Column ``a-1`` collects the twisted sums of every letter's ``n``-fold
    image with respect to letter ``a``."""
    return shifted_product(zeta, 0, n, omega, roof, precision_bits)


def riesz_product_chain(
    zeta: Substitution,
    n: int,
    omega,
    roof: Sequence | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> tuple[tuple[tuple["mp.mpc", ...], ...], ...]:
    """All prefix products at once: element j is the product for depth j
    (element 0 is the identity).  One pass instead of n separate products."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    om = as_exact(omega)
    rf = None if roof is None else _validate_roof(zeta, roof)
    with mp.workprec(precision_bits):
        chain = [_cmat_identity(zeta.m)]
        A = chain[0]
        for level in range(n):
            Mk = transfer_matrix(zeta, level, om, rf, precision_bits).entries
            A = _cmat_mul(Mk, A)
            chain.append(A)
    return tuple(chain)


def phi_recursive(
    zeta: Substitution,
    a: int,
    b: int,
    n: int,
    omega,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> "mp.mpc":
    """Twisted sum of the ``n``-fold image of ``b`` counting letter ``a``,
    computed through the matrix recursion (never expands the word)."""
    for letter in (a, b):
        if not 1 <= letter <= zeta.m:
            raise ValueError(f"letter {letter} outside alphabet 1..{zeta.m}")
    if n < 0:
        raise ValueError("level must be nonnegative")
    if n == 0:
        return mp.mpc(1 if a == b else 0)
    prod = riesz_product(zeta, n, omega, None, precision_bits)
    return prod.matrix[b - 1][a - 1]


def phi_suspension(
    zeta: Substitution,
    roof: Sequence,
    a: int,
    b: int,
    n: int,
    omega,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> "mp.mpc":
    """Weighted twisted sum of the ``n``-fold image of ``b`` counting letter
    ``a``, phases accumulated by weighted prefix length *including* the
    current letter.

    With all weights equal to 1 this equals the unweighted sum times
    ``e^(-2 pi i omega)`` (the inclusive convention shifts every phase by one
    step)."""
    for letter in (a, b):
        if not 1 <= letter <= zeta.m:
            raise ValueError(f"letter {letter} outside alphabet 1..{zeta.m}")
    if n < 0:
        raise ValueError("level must be nonnegative")
    rf = _validate_roof(zeta, roof)
    om = as_exact(omega)
    with mp.workprec(precision_bits):
        head = _unit(om, rf[a - 1])
        if n == 0:
            return head * (1 if a == b else 0)
        prod = riesz_product(zeta, n, om, rf, precision_bits)
        return head * prod.matrix[b - 1][a - 1]


def phi_of_level_word(
    zeta: Substitution,
    w: Word | Sequence[int] | str,
    level: int,
    a: int,
    omega,
    roof: Sequence | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> "mp.mpc":
    """Twisted sum of the level-``level`` image of an arbitrary word ``w``,
    assembled from per-letter column values and exact cumulative lengths.

    This is the concatenation rule: the sum over ``image(w)`` is the sum of
    per-letter contributions, each shifted by the frequency times the exact
    expanded length of what precedes it."""
    from .substitution import as_word

    word = as_word(w)
    if not 1 <= a <= zeta.m:
        raise ValueError(f"letter {a} outside alphabet 1..{zeta.m}")
    for letter in word:
        if not 1 <= letter <= zeta.m:
            raise ValueError(f"letter {letter} outside alphabet 1..{zeta.m}")
    if level < 0:
        raise ValueError("level must be nonnegative")
    om = as_exact(omega)
    rf = None if roof is None else _validate_roof(zeta, roof)
    if rf is None:
        lens: Sequence[Fraction | int] = lengths_at(zeta, level)
    else:
        lens = tiling_lengths_at(zeta, level, rf)
    with mp.workprec(precision_bits):
        if level == 0:
            col = [mp.mpc(1 if a == c else 0) for c in range(1, zeta.m + 1)]
        else:
            prod = riesz_product(zeta, level, om, rf, precision_bits)
            col = [prod.matrix[c - 1][a - 1] for c in range(1, zeta.m + 1)]
        head = mp.mpc(1) if rf is None else _unit(om, rf[a - 1])
        acc = mp.mpc(0)
        cum: Fraction | int = 0 if rf is None else Fraction(0)
        for letter in word:
            term = col[letter - 1]
            if term != 0:
                acc += _unit(om, cum) * term
            cum = cum + lens[letter - 1]
        return head * acc


def riesz_density(
    zeta: Substitution,
    n: int,
    omega,
    pd=None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> tuple[tuple["mp.mpc", ...], ...]:
    """Finite-depth spectral density matrix at the given frequency.

    Entry (a, b) is the geometric-normalization of the Gram sum of twisted
    sums of all level-``n`` images: Sum_j phi_a(image_n(j)) *
    conj(phi_b(image_n(j))), divided by theta^n and by the product of the
    frequency-vector and length-vector normalizers.  Always Hermitian and
    positive semidefinite (it is a conjugated Gram matrix)."""
    from .substitution import perron_data

    if n < 0:
        raise ValueError("depth must be nonnegative")
    if pd is None:
        pd = perron_data(substitution_matrix(zeta))
    om = as_exact(omega)
    m = zeta.m
    with mp.workprec(precision_bits):
        if n == 0:
            P = _cmat_identity(m)
        else:
            P = riesz_product(zeta, n, om, None, precision_bits).matrix
        theta = +pd.theta
        scale = 1 / (mp.fsum(pd.r_vec) * mp.fsum(pd.l_vec) * theta**n)
        rows = []
        for aa in range(m):
            row = []
            for bb in range(m):
                acc = mp.fsum(
                    (P[j][aa] * mp.conj(P[j][bb]) for j in range(m)),
                )
                row.append(acc * scale)
            rows.append(tuple(row))
        return tuple(rows)
