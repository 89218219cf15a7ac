"""Local Euler factors of the moment Dirichlet series and their factorization.

At a prime p with Satake angle theta (t = 2 cos theta), the series
sum_a lam_sym^j(p^a)^l X^a factors, up to a correction that is 1 + O(X^2),
into a product of inverse linear factors whose root multiset is dictated by
the first-difference weights from `combinatorics`: weight w_m attaches the
full set of roots e^(i(lj-2m-2i)theta), i = 0..lj-2m. The even-parity m =
lj/2 term degenerates to (1 - X)^(-w) and plays the zeta role.

Floating mode expands everything in complex doubles and certifies the X^1
cancellation numerically; symbolic mode redoes the expansion in exact
Laurent polynomials in the root alpha = e^(i theta), reduces palindromic
results to integer polynomials in t, and certifies the cancellation as a
polynomial identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import combinatorics
from .errors import ConsistencyError
from .hecke import sym_prime_power
from .symbolic import ONE, ZERO, IntPolynomial

DEFAULT_ORDER = 6

RHS_IMAG_TOL = 1e-9


@dataclass(frozen=True)
class LocalFactorSeries:
    """Truncated expansion in X = p^(-s): coeffs[a] multiplies X^a."""

    order: int
    coeffs: tuple
    label: str

    def __post_init__(self):
        lead = self.coeffs[0]
        ok = lead == ONE if isinstance(lead, IntPolynomial) else abs(lead - 1.0) < 1e-12
        if not ok:
            raise ConsistencyError(f"local factor not normalized: {self.label}")

    def __getitem__(self, a):
        return self.coeffs[a]


def _check_order(A: int) -> None:
    if A < 0:
        raise ValueError(f"series order must be nonnegative, got {A}")


def _root_exponents(l: int, j: int):
    """(exponent, multiplicity) pairs for the factored side's root multiset.

    Exponents are the integers w with root e^(i w theta); multiplicities
    come from the first-difference vector. Total count is the degree.
    """
    c = combinatorics.coeffs_bruteforce(l, j)
    w = combinatorics.diff_coeffs(c)
    lj = l * j
    out = []
    for m, mult in enumerate(w.values):
        if mult == 0:
            continue
        r = lj - 2 * m
        for i in range(r + 1):
            out.append((r - 2 * i, mult))
    return out


def degree(l: int, j: int) -> int:
    """Degree of the factored product, certified equal to (j+1)^l."""
    c = combinatorics.coeffs_bruteforce(l, j)
    w = combinatorics.diff_coeffs(c)
    lj = l * j
    total = sum(mult * (lj - 2 * m + 1) for m, mult in enumerate(w.values))
    expected = (j + 1) ** l
    if total != expected:
        raise ConsistencyError(
            f"degree mismatch at (l={l}, j={j}): sum {total} != {expected}"
        )
    return total


def lhs_local(l: int, j: int, t: float, A: int = DEFAULT_ORDER) -> LocalFactorSeries:
    """Moment side: coeffs[a] = lam_sym^j(p^a)^l."""
    if l < 1:
        raise ValueError(f"l must be positive, got {l}")
    _check_order(A)
    coeffs = [sym_prime_power(j, a, t) ** l for a in range(A + 1)]
    return LocalFactorSeries(order=A, coeffs=tuple(coeffs), label=f"lhs(l={l},j={j},t={t})")


def rhs_local(l: int, j: int, t: float, A: int = DEFAULT_ORDER) -> LocalFactorSeries:
    """Factored side expanded from its root multiset.

    Conjugate roots pair up, so each coefficient is real to rounding. The
    rounding error scales with the intermediate partial products, which at
    large degree dwarf the final coefficient, so the imaginary residue is
    checked against the running peak magnitude per order: genuine rounding
    sits below 1e-11 of the peak, a broken root multiset at 1e-4 or above.
    """
    if l < 1:
        raise ValueError(f"l must be positive, got {l}")
    _check_order(A)
    if abs(t) > 2.0 + 1e-6:
        raise ValueError(f"t={t} outside the Deligne interval [-2, 2]")
    theta = math.acos(max(-1.0, min(1.0, t / 2.0)))
    s = [0j] * (A + 1)
    s[0] = 1 + 0j
    peaks = [1.0] * (A + 1)
    for w, mult in _root_exponents(l, j):
        r = cmath.exp(1j * w * theta)
        for _ in range(mult):
            for k in range(1, A + 1):
                v = s[k] + r * s[k - 1]
                s[k] = v
                m = abs(v.real) + abs(v.imag)
                if m > peaks[k]:
                    peaks[k] = m
    coeffs = []
    for a, v in enumerate(s):
        if abs(v.imag) > RHS_IMAG_TOL * max(1.0, abs(v.real), peaks[a]):
            raise ConsistencyError(
                f"imaginary residue {v.imag!r} in rhs X^{a} at (l={l}, j={j}, t={t})"
            )
        coeffs.append(v.real)
    return LocalFactorSeries(order=A, coeffs=tuple(coeffs), label=f"rhs(l={l},j={j},t={t})")


def _divide(lhs_coeffs, rhs_coeffs, A, zero):
    # formal quotient; rhs constant term is 1 so no division happens
    q = [zero] * (A + 1)
    for n in range(A + 1):
        acc = lhs_coeffs[n]
        for k in range(n):
            acc = acc - q[k] * rhs_coeffs[n - k]
        q[n] = acc
    return q


def correction_series(l: int, j: int, t: float, A: int = DEFAULT_ORDER) -> LocalFactorSeries:
    """Formal quotient lhs/rhs; equals 1 + O(X^2) when the library is right.

    The X^1 coefficient is the difference of the two first-order terms and
    must vanish; it is returned as computed (tests pin the tolerance).
    """
    lhs = lhs_local(l, j, t, A)
    rhs = rhs_local(l, j, t, A)
    q = _divide(lhs.coeffs, rhs.coeffs, A, 0.0)
    return LocalFactorSeries(
        order=A, coeffs=tuple(q), label=f"correction(l={l},j={j},t={t})"
    )


# ---------------------------------------------------------------------------
# exact symbolic mode: Laurent polynomials in alpha reduced to Z[t]

_P_CACHE = [IntPolynomial([2]), IntPolynomial([0, 1])]


def _power_sum_poly(r: int) -> IntPolynomial:
    """alpha^r + alpha^(-r) as a polynomial in t = alpha + alpha^(-1)."""
    t = _P_CACHE[1]
    while len(_P_CACHE) <= r:
        _P_CACHE.append(t * _P_CACHE[-1] - _P_CACHE[-2])
    return _P_CACHE[r]


def _laurent_shift_add(acc: dict, src: dict, w: int) -> None:
    # acc += alpha^w * src
    for e, c in src.items():
        acc[e + w] = acc.get(e + w, 0) + c


def _laurent_reduce(d: dict) -> IntPolynomial:
    """Collapse a palindromic Laurent polynomial to Z[t].

    Palindromy (coefficient at alpha^e equals that at alpha^-e) is forced
    by the conjugate-closed root multisets; its failure is a defect.
    """
    out = ZERO
    seen = set()
    for e, c in d.items():
        if c == 0 or e in seen:
            continue
        if e == 0:
            out = out + IntPolynomial([c])
            seen.add(0)
            continue
        mate = d.get(-e, 0)
        if mate != c:
            raise ConsistencyError(f"non-palindromic Laurent data at exponent {e}")
        out = out + c * _power_sum_poly(abs(e))
        seen.add(e)
        seen.add(-e)
    return out


def _geometric_product_sym(exponents, A):
    """Expand prod (1 - alpha^w X)^(-1) over (w, mult) pairs, to order A.

    Returns IntPolynomial coefficients in t for X^0..X^A.
    """
    s = [dict() for _ in range(A + 1)]
    s[0][0] = 1
    for w, mult in exponents:
        for _ in range(mult):
            for k in range(1, A + 1):
                _laurent_shift_add(s[k], s[k - 1], w)
    return [_laurent_reduce(d) for d in s]


def sym_prime_power_poly(j: int, a: int) -> IntPolynomial:
    """Exact polynomial in t giving lam_sym^j(p^a); oracle for the float path."""
    if j < 1:
        raise ValueError(f"j must be positive, got {j}")
    if a < 0:
        raise ValueError(f"a must be nonnegative, got {a}")
    coeffs = _geometric_product_sym([(j - 2 * m, 1) for m in range(j + 1)], a)
    return coeffs[a]


def lhs_local_sym(l: int, j: int, A: int = DEFAULT_ORDER) -> LocalFactorSeries:
    """Moment side with exact polynomial coefficients in t."""
    if l < 1:
        raise ValueError(f"l must be positive, got {l}")
    _check_order(A)
    prime_power = _geometric_product_sym([(j - 2 * m, 1) for m in range(j + 1)], A)
    coeffs = tuple(p**l for p in prime_power)
    return LocalFactorSeries(order=A, coeffs=coeffs, label=f"lhs_sym(l={l},j={j})")


def rhs_local_sym(l: int, j: int, A: int = DEFAULT_ORDER) -> LocalFactorSeries:
    """Factored side with exact polynomial coefficients in t."""
    if l < 1:
        raise ValueError(f"l must be positive, got {l}")
    _check_order(A)
    coeffs = tuple(_geometric_product_sym(_root_exponents(l, j), A))
    return LocalFactorSeries(order=A, coeffs=coeffs, label=f"rhs_sym(l={l},j={j})")


def correction_series_sym(l: int, j: int, A: int = DEFAULT_ORDER) -> LocalFactorSeries:
    """Exact correction factor: X^1 coefficient is the zero polynomial."""
    lhs = lhs_local_sym(l, j, A)
    rhs = rhs_local_sym(l, j, A)
    q = _divide(lhs.coeffs, rhs.coeffs, A, ZERO)
    return LocalFactorSeries(
        order=A, coeffs=tuple(q), label=f"correction_sym(l={l},j={j})"
    )
