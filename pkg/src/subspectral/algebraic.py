"""Certified algebraic-integer arithmetic.

Monic integer polynomials are given highest-degree-first.  Roots are enclosed
in certified disks (center + radius): the radius ``s * |p(z)/p'(z)|`` always
contains a true root, and pairwise disjointness pins exactly one root per
disk.  Roots exactly on the unit circle are detected by exact integer
arithmetic (gcd with the reciprocal polynomial, then the ``y = x + 1/x``
transform), never by interval comparisons against 1, so PV / Salem /
has-conjugate-outside classification is certified.

Elements of the ring generated by a root are tuples of integer coordinates in
the power basis; multiplication by the root is the exact companion-matrix
action, and distances to the nearest integer are certified by exact rational
interval arithmetic over a bisected root bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as _int_gcd
from typing import NamedTuple, Sequence

import mpmath as mp

from .errors import NotSquarefree, PrecisionExhausted, WrongClass

__all__ = [
    "PRECISION_CAP_BITS",
    "RootDisk",
    "AlgebraicInteger",
    "ZThetaElement",
    "Classification",
    "CertifiedDistance",
    "PropAlgConstants",
    "certify_roots",
    "classify",
    "zt_mul_theta",
    "zt_value_interval",
    "frac_dist",
    "prop_alg_constants",
    "garsia_lower_bound",
]

PRECISION_CAP_BITS = 2**20


# ---------------------------------------------------------------------------
# exact polynomial helpers (coefficients highest degree first)


def _as_int_poly(coeffs: Sequence[int]) -> tuple[int, ...]:
    p = tuple(int(c) for c in coeffs)
    if not p:
        raise ValueError("empty polynomial")
    if p[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    return p


def _poly_degree(p: Sequence) -> int:
    return len(p) - 1


def _poly_derivative(p: Sequence[int]) -> tuple[int, ...]:
    s = _poly_degree(p)
    if s == 0:
        return (0,)
    return tuple((s - i) * p[i] for i in range(s))


def _poly_eval_frac(p: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _poly_eval_mp(p: Sequence[int], z) -> "mp.mpc":
    acc = mp.mpf(0)
    for c in p:
        acc = acc * z + c
    return acc


def _frac_poly_trim(p: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _frac_poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    while len(a) >= len(b) and any(c != 0 for c in a):
        if a[0] == 0:
            a.pop(0)
            continue
        factor = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= factor * b[i]
        a.pop(0)
    return _frac_poly_trim(a)


def _poly_gcd(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Primitive integer gcd with positive leading coefficient."""
    a = [Fraction(c) for c in p]
    b = [Fraction(c) for c in q]
    a, b = _frac_poly_trim(a), _frac_poly_trim(b)
    while any(c != 0 for c in b):
        a, b = b, _frac_poly_mod(a, b)
        if len(b) == 1 and b[0] == 0:
            break
    # normalize to a primitive integer polynomial
    lead = a[0]
    monic = [c / lead for c in a]
    denom = 1
    for c in monic:
        denom = denom * c.denominator // _int_gcd(denom, c.denominator)
    ints = [int(c * denom) for c in monic]
    g = 0
    for c in ints:
        g = _int_gcd(g, abs(c))
    ints = [c // g for c in ints]
    if ints[0] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def _poly_divexact(p: Sequence[int], d: Sequence[int]) -> tuple[int, ...]:
    """Exact polynomial division p / d over the rationals, validated."""
    a = [Fraction(c) for c in p]
    out: list[Fraction] = []
    while len(a) >= len(d):
        factor = a[0] / Fraction(d[0])
        out.append(factor)
        for i in range(len(d)):
            a[i] -= factor * d[i]
        a.pop(0)
    if any(c != 0 for c in a):
        raise ArithmeticError("inexact polynomial division")
    result = []
    for c in out:
        if c.denominator != 1:
            raise ArithmeticError("non-integer quotient")
        result.append(int(c))
    return tuple(result)


def _strip_root(p: Sequence[int], r: int) -> tuple[int, ...]:
    """Exact synthetic division by (x - r)."""
    out = [p[0]]
    for c in p[1:]:
        out.append(c + r * out[-1])
    if out[-1] != 0:
        raise ArithmeticError(f"{r} is not a root")
    return tuple(out[:-1])


def is_squarefree(poly: Sequence[int]) -> bool:
    p = _as_int_poly(poly)
    if _poly_degree(p) <= 1:
        return True
    return _poly_degree(_poly_gcd(p, _poly_derivative(p))) == 0


# ---------------------------------------------------------------------------
# certified roots


@dataclass(frozen=True)
class RootDisk:
    """A certified enclosure: the disk |z - center| <= radius contains exactly
    one root; ``is_real`` marks disks that straddle the real axis (their root
    is real by conjugate symmetry)."""

    center: "mp.mpc"
    radius: "mp.mpf"
    is_real: bool

    def center_fractions(self) -> tuple[Fraction, Fraction]:
        """Exact rational (re, im) of the center (no rounding)."""
        return (
            _mpf_to_fraction(self.center.real),
            _mpf_to_fraction(self.center.imag),
        )

    def radius_fraction(self) -> Fraction:
        return _mpf_to_fraction(self.radius)

    def modulus_vs_one(self) -> str:
        """Exact comparison of the whole disk against the unit circle:
        "in" (entirely inside), "out" (entirely outside), or "straddles"."""
        re, im = self.center_fractions()
        r = self.radius_fraction()
        m2 = re * re + im * im
        if r < 1 and m2 < (1 - r) ** 2:
            return "in"
        if m2 > (1 + r) ** 2:
            return "out"
        return "straddles"

    def modulus_interval(self) -> tuple["mp.mpf", "mp.mpf"]:
        re, im = self.center_fractions()
        r = self.radius_fraction()
        m2 = re * re + im * im
        with mp.workprec(80):
            c = mp.sqrt(mp.mpf(m2.numerator) / m2.denominator)
            rr = mp.mpf(r.numerator) / r.denominator
            pad = mp.mpf(2) ** -70
            lo = c - rr - pad
            return (lo if lo > 0 else mp.mpf(0), c + rr + pad)

    def real_interval(self) -> tuple[Fraction, Fraction]:
        if not self.is_real:
            raise ValueError("not a certified real root")
        c = _mpf_to_fraction(self.center.real)
        r = self.radius_fraction()
        return (c - r, c + r)


def _mpf_to_fraction(x: "mp.mpf") -> Fraction:
    # direct mantissa/exponent extraction: exact, independent of the ambient
    # working precision (mp.mpf(x) would round); int() guards against gmpy2
    # mantissas leaking into Fraction internals
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)
    if man == 0:
        return Fraction(0)
    value = Fraction(man) * (Fraction(2) ** exp)
    return -value if sign else value


def certify_roots(
    poly: Sequence[int], precision_bits: int = 128
) -> tuple[RootDisk, ...]:
    """Disjoint certified disks, one per root of a squarefree monic polynomial.

    Each disk radius is ``s * |p(z)/p'(z)|`` (inflated by a small guard), which
    always contains at least one root; disjointness of all ``s`` disks then
    certifies exactly one root per disk.  Precision escalates until every
    radius is at most ``2**-precision_bits`` and all disks are disjoint.
    Raises ``NotSquarefree`` when ``gcd(p, p')`` is nonconstant.
    """
    p = _as_int_poly(poly)
    if p[0] != 1:
        raise ValueError("polynomial must be monic")
    s = _poly_degree(p)
    if s == 0:
        return ()
    if not is_squarefree(p):
        raise NotSquarefree("polynomial has repeated roots")
    dp = _poly_derivative(p)

    target = mp.mpf(2) ** (-precision_bits)
    prec = max(2 * precision_bits, 128)
    while prec <= PRECISION_CAP_BITS:
        with mp.workprec(prec):
            try:
                roots = mp.polyroots(
                    [mp.mpf(c) for c in p], maxsteps=200, extraprec=prec
                )
            except mp.libmp.NoConvergence:
                prec *= 2
                continue
            disks: list[RootDisk] = []
            ok = True
            for z in roots:
                dval = _poly_eval_mp(dp, z)
                if dval == 0:
                    ok = False
                    break
                radius = s * abs(_poly_eval_mp(p, z) / dval)
                radius = radius * (1 + mp.mpf(2) ** -16) + mp.mpf(2) ** (-prec + 8)
                is_real = abs(mp.im(z)) <= radius
                if is_real:
                    # snap to the axis; doubling the radius keeps containment
                    z = mp.mpc(mp.re(z), 0)
                    radius = 2 * radius
                disks.append(RootDisk(mp.mpc(z), +radius, is_real))
            if ok:
                ok = all(d.radius <= target for d in disks)
            if ok:
                for i in range(len(disks)):
                    for j in range(i + 1, len(disks)):
                        if (
                            abs(disks[i].center - disks[j].center)
                            <= disks[i].radius + disks[j].radius
                        ):
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                disks.sort(
                    key=lambda d: (
                        -float(abs(d.center)),
                        -float(mp.re(d.center)),
                        float(mp.im(d.center)),
                    )
                )
                return tuple(disks)
        prec *= 2
    raise PrecisionExhausted(
        f"could not certify roots at width 2^-{precision_bits} under the precision cap"
    )


# ---------------------------------------------------------------------------
# exact on-circle root counting


def _reciprocal(p: Sequence[int]) -> tuple[int, ...]:
    rev = tuple(reversed(tuple(p)))
    i = 0
    while i < len(rev) - 1 and rev[i] == 0:
        i += 1
    return rev[i:]


def _palindrome_transform(core: Sequence[int]) -> tuple[int, ...]:
    """For even palindromic core of degree 2d, the integer q with
    core(x) = x^d q(x + 1/x); roots of core on the unit circle correspond to
    real roots of q in (-2, 2)."""
    asc = list(reversed(list(core)))
    deg = len(asc) - 1
    if deg % 2 != 0:
        raise ArithmeticError("transform needs even degree")
    d = deg // 2
    if d == 0:
        return (1,)
    # P_k(y) = x^k + x^-k as a polynomial in y: P_0 = 2, P_1 = y,
    # P_{k+1} = y P_k - P_{k-1}
    q_asc = [0] * (d + 1)
    q_asc[0] = asc[d]
    pk_prev = [2]
    pk = [0, 1]
    for k in range(1, d + 1):
        for i, c in enumerate(pk):
            q_asc[i] += asc[d + k] * c
        if k < d:
            nxt = [0] + pk
            for i, c in enumerate(pk_prev):
                nxt[i] -= c
            pk_prev, pk = pk, nxt
    return tuple(reversed(q_asc))


def _exact_circle_count(poly: Sequence[int]) -> int:
    """Number of roots of a squarefree monic integer polynomial lying exactly
    on the unit circle, by exact integer arithmetic."""
    p = _as_int_poly(poly)
    while p[-1] == 0:  # roots at zero are off the circle
        p = p[:-1]
    if _poly_degree(p) == 0:
        return 0
    g = _poly_gcd(p, _reciprocal(p))
    count = 0
    if _poly_eval_frac(g, Fraction(1)) == 0:
        g = _strip_root(g, 1)
        count += 1
    if _poly_eval_frac(g, Fraction(-1)) == 0:
        g = _strip_root(g, -1)
        count += 1
    if _poly_degree(g) == 0:
        return count
    q = _palindrome_transform(g)
    # count real roots of q strictly inside (-2, 2), certified
    prec = 128
    while prec <= PRECISION_CAP_BITS:
        try:
            disks = certify_roots(q, prec // 2)
        except PrecisionExhausted:
            break
        inside = 0
        undecided = False
        for d in disks:
            if not d.is_real:
                continue
            lo, hi = d.real_interval()
            if -2 < lo and hi < 2:
                inside += 1
            elif hi <= -2 or lo >= 2:
                continue
            else:
                undecided = True
        if not undecided:
            return count + 2 * inside
        prec *= 2
    raise PrecisionExhausted("cannot separate transform roots from ±2")


# ---------------------------------------------------------------------------
# the algebraic integer


@dataclass(frozen=True)
class AlgebraicInteger:
    """A distinguished real root > 1 of a monic integer polynomial, with
    certified enclosures of all conjugates.

    ``height`` is the maximum absolute value of the non-leading coefficients
    (writing the polynomial as x^s - b_1 x^{s-1} - ... - b_s, the maximum
    |b_j|)."""

    poly: tuple[int, ...]
    height: int
    root_index: int
    roots: tuple[RootDisk, ...]
    precision_bits: int

    @classmethod
    def from_poly(
        cls,
        coeffs: Sequence[int],
        precision_bits: int = 128,
        root_index: int | None = None,
    ) -> "AlgebraicInteger":
        p = _as_int_poly(coeffs)
        if p[0] != 1:
            raise ValueError("polynomial must be monic")
        roots = certify_roots(p, precision_bits)
        if root_index is None:
            candidates = [
                i
                for i, d in enumerate(roots)
                if d.is_real and d.real_interval()[0] > 1
            ]
            if candidates:
                root_index = max(
                    candidates, key=lambda i: roots[i].real_interval()[0]
                )
            else:
                root_index = 0
        height = max(abs(c) for c in p[1:]) if len(p) > 1 else 0
        return cls(
            poly=p,
            height=height,
            root_index=root_index,
            roots=roots,
            precision_bits=precision_bits,
        )

    @property
    def degree(self) -> int:
        return _poly_degree(self.poly)

    @property
    def theta(self) -> "mp.mpf":
        return mp.re(self.roots[self.root_index].center)

    def real_bracket(self, width_bits: int) -> tuple[Fraction, Fraction]:
        """Exact rational bracket of width <= 2**-width_bits around the
        distinguished root (which must be real)."""
        disk = self.roots[self.root_index]
        lo, hi = disk.real_interval()
        return _bisect_bracket(self.poly, lo, hi, width_bits)


@lru_cache(maxsize=256)
def _bisect_bracket(
    poly: tuple[int, ...], lo: Fraction, hi: Fraction, width_bits: int
) -> tuple[Fraction, Fraction]:
    plo = _poly_eval_frac(poly, lo)
    phi = _poly_eval_frac(poly, hi)
    if plo == 0:
        return (lo, lo)
    if phi == 0:
        return (hi, hi)
    if (plo > 0) == (phi > 0):
        raise ArithmeticError("bracket does not straddle the root")
    sign_lo = plo > 0
    target = Fraction(1, 2**width_bits)
    while hi - lo > target:
        mid = (lo + hi) / 2
        val = _poly_eval_frac(poly, mid)
        if val == 0:
            return (mid, mid)
        if (val > 0) == sign_lo:
            lo = mid
        else:
            hi = mid
    return (lo, hi)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    """kind: PV | Salem | HasConjugateOutside | Degenerate.  ``witness`` is the
    index (into the root list) of the certifying conjugate, ``modulus`` its
    approximate modulus, and ``statuses`` the per-root verdicts
    ("in" / "out" / "circle")."""

    kind: str
    witness: int | None
    modulus: "mp.mpf | None"
    statuses: tuple[str, ...]


def _root_statuses(
    ai: AlgebraicInteger, cap_bits: int = 2**14
) -> tuple[tuple[str, ...], tuple[RootDisk, ...]]:
    """Certified in/out/on-circle status of every root.

    Off-circle roots are eventually separated from the unit circle by disk
    refinement; the exact on-circle count pins the rest without any interval
    comparison against 1.
    """
    circle_count = _exact_circle_count(ai.poly)
    bits = max(ai.precision_bits, 64)
    while bits <= cap_bits:
        disks = certify_roots(ai.poly, bits)
        statuses: list[str | None] = []
        for d in disks:
            verdict = d.modulus_vs_one()
            statuses.append(None if verdict == "straddles" else verdict)
        undecided = [i for i, st in enumerate(statuses) if st is None]
        if len(undecided) == circle_count:
            for i in undecided:
                statuses[i] = "circle"
            return tuple(statuses), disks  # type: ignore[arg-type]
        bits *= 2
    raise PrecisionExhausted(
        "cannot separate conjugate moduli from 1 under the precision cap"
    )


def classify(ai: AlgebraicInteger, cap_bits: int = 2**14) -> Classification:
    """Certified PV / Salem / has-conjugate-outside classification.

    PV: every other root strictly inside the unit circle.  Salem: no root
    outside except the distinguished one, and at least one exactly on the
    circle.  HasConjugateOutside: some other root strictly outside.
    Degenerate: the distinguished root is not a real number > 1.  Raises
    ``PrecisionExhausted`` only when off-circle roots cannot be separated from
    the circle under the precision cap.
    """
    statuses, disks = _root_statuses(ai, cap_bits)
    dom = disks[ai.root_index]
    dom_ok = dom.is_real
    if dom_ok:
        lo2, hi2 = dom.real_interval()
        if lo2 <= 1:
            if hi2 <= 1:
                dom_ok = False
            elif _poly_eval_frac(ai.poly, Fraction(1)) == 0:
                # the bracket holds exactly one root, so that root is 1 itself
                dom_ok = False
            else:
                width = 64
                while True:
                    refined = _bisect_bracket(ai.poly, lo2, hi2, width)
                    if refined[0] > 1:
                        dom_ok = True
                        break
                    if refined[1] < 1 or refined[0] == refined[1]:
                        dom_ok = refined[0] > 1
                        break
                    width *= 2
                    if width > PRECISION_CAP_BITS:
                        raise PrecisionExhausted(
                            "cannot separate the distinguished root from 1"
                        )
    if not dom_ok:
        return Classification("Degenerate", None, None, statuses)

    others = [i for i in range(len(disks)) if i != ai.root_index]
    outside = [i for i in others if statuses[i] == "out"]
    on_circle = [i for i in others if statuses[i] == "circle"]
    if outside:
        witness = max(
            outside, key=lambda i: (float(abs(disks[i].center)), -i)
        )
        return Classification(
            "HasConjugateOutside", witness, abs(disks[witness].center), statuses
        )
    if on_circle:
        witness = on_circle[0]
        return Classification("Salem", witness, abs(disks[witness].center), statuses)
    if not others:
        return Classification("PV", None, None, statuses)
    witness = max(others, key=lambda i: (float(abs(disks[i].center)), -i))
    return Classification("PV", witness, abs(disks[witness].center), statuses)


# ---------------------------------------------------------------------------
# exact ring elements and fractional distances


@dataclass(frozen=True)
class ZThetaElement:
    """Integer coordinates in the power basis 1, theta, ..., theta^(s-1)."""

    coords: tuple[int, ...]

    @classmethod
    def from_int(cls, k: int, degree: int) -> "ZThetaElement":
        return cls((int(k),) + (0,) * (degree - 1))


def zt_mul_theta(
    x: ZThetaElement, poly: "Sequence[int] | AlgebraicInteger"
) -> ZThetaElement:
    """Exact coordinates of theta * x via the companion-matrix action."""
    if isinstance(poly, AlgebraicInteger):
        poly = poly.poly
    p = _as_int_poly(poly)
    s = _poly_degree(p)
    coords = x.coords
    if len(coords) != s:
        raise ValueError(f"expected {s} coordinates, got {len(coords)}")
    # theta^s = b_1 theta^(s-1) + ... + b_s with p = x^s - b_1 x^(s-1) - ... - b_s
    top = tuple(-p[s - i] for i in range(s))  # ascending: (b_s, ..., b_1)
    carry = coords[s - 1]
    new = [carry * top[0]]
    for i in range(1, s):
        new.append(coords[i - 1] + carry * top[i])
    return ZThetaElement(tuple(new))


def _interval_add(a, b, c, d):
    return (a + c, b + d)


def _interval_mul(a, b, c, d):
    vals = (a * c, a * d, b * c, b * d)
    return (min(vals), max(vals))


def zt_value_interval(
    x: ZThetaElement, ai: AlgebraicInteger, width_bits: int
) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of the real value of ``x`` at the root."""
    lo, hi = ai.real_bracket(width_bits)
    acc = (Fraction(0), Fraction(0))
    for c in reversed(x.coords):
        acc = _interval_mul(acc[0], acc[1], lo, hi)
        acc = _interval_add(acc[0], acc[1], Fraction(c), Fraction(c))
    return acc


class CertifiedDistance(NamedTuple):
    lo: Fraction
    hi: Fraction
    nearest: int | None

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


def _dist_interval_to_integers(
    a: Fraction, b: Fraction
) -> tuple[Fraction, Fraction, int | None]:
    """Range of dist(., Z) over [a, b] (assumes b - a < 1/2), plus the nearest
    integer when it is unambiguous."""

    def dist(x: Fraction) -> Fraction:
        k = round(x)
        return abs(x - k)

    import math

    has_integer = math.ceil(a) <= math.floor(b)
    has_half = math.ceil(a - Fraction(1, 2)) <= math.floor(b - Fraction(1, 2))
    lo = Fraction(0) if has_integer else min(dist(a), dist(b))
    hi = Fraction(1, 2) if has_half else max(dist(a), dist(b))
    nearest = None
    if not has_half:
        nearest = round((a + b) / 2)
    elif has_integer:
        nearest = round((a + b) / 2)
    return lo, hi, nearest


def frac_dist(
    x: ZThetaElement,
    ai: AlgebraicInteger,
    target_err: Fraction = Fraction(1, 1024),
) -> CertifiedDistance:
    """Certified distance of the real value of ``x`` to the nearest integer.

    Precision escalates until the distance interval has width at most
    ``target_err`` (which must be at most 1/8).  Integer elements return an
    exact zero."""
    target = Fraction(target_err)
    if target > Fraction(1, 8):
        raise ValueError("target_err must be at most 1/8")
    if all(c == 0 for c in x.coords[1:]):
        k = x.coords[0]
        return CertifiedDistance(Fraction(0), Fraction(0), k)
    maxbits = max(abs(c) for c in x.coords).bit_length()
    bits = ai.degree * maxbits + 64
    while bits <= PRECISION_CAP_BITS:
        a, b = zt_value_interval(x, ai, bits)
        if b - a < Fraction(1, 4):
            lo, hi, nearest = _dist_interval_to_integers(a, b)
            if hi - lo <= target:
                return CertifiedDistance(lo, hi, nearest)
        bits *= 2
    raise PrecisionExhausted(
        "distance to the nearest integer not certified under the precision cap"
    )


# ---------------------------------------------------------------------------
# explicit constants


class PropAlgConstants(NamedTuple):
    alpha: "mp.mpf"
    beta: int
    delta1: Fraction
    s: int
    height: int
    theta2_index: int
    theta2_modulus: "mp.mpf"


def _ceil_log_ratio(ai: AlgebraicInteger, theta2_index: int) -> int:
    """ceil(s * log(theta) / log|theta_2|), certified.

    Exact integer ratios (both roots integers with theta^s a power of
    |theta_2|) are resolved algebraically; otherwise interval refinement
    separates the value from the nearest integer."""
    s = ai.degree
    p = ai.poly

    def exact_int(disk: RootDisk) -> int | None:
        if not disk.is_real:
            return None
        lo, hi = disk.real_interval()
        import math

        k = math.floor(hi)
        for cand in (k, k + 1):
            if lo <= cand <= hi and _poly_eval_frac(p, Fraction(cand)) == 0:
                return cand
        return None

    t_int = exact_int(ai.roots[ai.root_index])
    disk2 = ai.roots[theta2_index]
    t2_int = exact_int(disk2)
    if t2_int is not None:
        t2_int = abs(t2_int)
    if t_int is not None and t2_int is not None and t2_int >= 2:
        # is theta^s an exact power of |theta_2|?
        power = t_int**s
        k = 0
        acc = 1
        while acc < power:
            acc *= t2_int
            k += 1
        if acc == power:
            return k
    bits = max(ai.precision_bits, 64)
    while bits <= 2**14:
        disks = certify_roots(p, bits)
        with mp.workprec(bits + 32):
            d1 = disks[ai.root_index]
            d2 = disks[theta2_index]
            t_lo = mp.re(d1.center) - d1.radius
            t_hi = mp.re(d1.center) + d1.radius
            m_lo = abs(d2.center) - d2.radius
            m_hi = abs(d2.center) + d2.radius
            val_lo = s * mp.log(t_lo) / mp.log(m_hi)
            val_hi = s * mp.log(t_hi) / mp.log(m_lo)
            if mp.floor(val_lo) == mp.floor(val_hi) and val_lo != mp.floor(val_lo):
                return int(mp.floor(val_hi)) + (0 if val_hi == mp.floor(val_hi) else 1)
        bits *= 2
    raise PrecisionExhausted("cannot certify the ceiling of the log ratio")


def prop_alg_constants(
    ai: AlgebraicInteger, cap_bits: int = 2**14
) -> PropAlgConstants:
    """Explicit decay constants for a root with a conjugate outside the circle.

    delta1 = 1/(1 + s*H) exactly; beta = 1 + ceil(s log theta / log|theta_2|)
    with theta_2 the largest-modulus conjugate strictly outside the unit
    circle; alpha = delta1^2 / log(beta).  Raises ``WrongClass`` unless the
    classification is HasConjugateOutside."""
    cls = classify(ai, cap_bits)
    if cls.kind != "HasConjugateOutside":
        raise WrongClass(
            f"constants require a conjugate outside the unit circle, got {cls.kind}"
        )
    s = ai.degree
    H = ai.height
    delta1 = Fraction(1, 1 + s * H)
    theta2_index = cls.witness
    assert theta2_index is not None
    beta = 1 + _ceil_log_ratio(ai, theta2_index)
    with mp.workprec(max(ai.precision_bits, 64) + 32):
        alpha = mp.mpf(delta1.numerator) ** 2 / (
            mp.mpf(delta1.denominator) ** 2 * mp.log(beta)
        )
        return PropAlgConstants(
            alpha=+alpha,
            beta=beta,
            delta1=delta1,
            s=s,
            height=H,
            theta2_index=theta2_index,
            theta2_modulus=abs(ai.roots[theta2_index].center),
        )


def garsia_lower_bound(
    ai: AlgebraicInteger,
    conj_index: int,
    q_height: int,
    q_degree: int,
    cap_bits: int = 2**14,
) -> "mp.mpf":
    """Positive lower bound for |Q(theta_j)| over nonvanishing integer
    polynomials Q of the given height and degree, where theta_j is the root at
    ``conj_index``.

    The bound is  prod_{|t_j| != 1, j != conj} ||t_j| - 1|  divided by
    s^(s-2) * (prod_{|t_j| > 1, j != conj} |t_j|)^s * height^s; roots exactly
    on the unit circle are excluded by the certified status machinery."""
    if q_height < 1:
        raise ValueError("height must be at least 1 (Q must be nonzero)")
    s = ai.degree
    if not 0 <= q_degree <= s - 1:
        raise ValueError("degree of Q must lie in [0, s-1]")
    statuses, disks = _root_statuses(ai, cap_bits)
    with mp.workprec(max(ai.precision_bits, 64) + 32):
        numerator = mp.mpf(1)
        expanding = mp.mpf(1)
        for j, (st, d) in enumerate(zip(statuses, disks)):
            if j == conj_index:
                continue
            # outward-rounded modulus bounds keep the result a true lower
            # bound: shrink every numerator term, grow the denominator
            lo, hi = d.modulus_interval()
            if st == "in":
                term = 1 - hi
            elif st == "out":
                term = lo - 1
                expanding *= hi
            else:
                continue
            if term <= 0:
                raise PrecisionExhausted(
                    "root disk too wide to separate its modulus from 1"
                )
            numerator *= term
        denom = mp.mpf(s) ** (s - 2) * expanding**s * mp.mpf(q_height) ** s
        return +(numerator / denom)
