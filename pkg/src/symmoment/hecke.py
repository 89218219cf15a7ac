"""Level-1 eigenform q-expansions and symmetric-power coefficients.

Exact integer coefficients a(n) for the unique normalized cusp eigenforms
of weights 12, 16, 18, 20, 22, 26, built from the sparse eta-cube series
and Eisenstein multiplications. Normalized values lam(n) = a(n)/n^((k-1)/2)
feed the Satake angles, the symmetric-power values at prime powers, and a
multiplicative sieve over n <= N.

Series multiplication packs coefficient vectors into single big integers
(Kronecker substitution) so the convolution runs through one large integer
product; gmpy2 supplies an FFT multiply when installed, plain Python ints
otherwise. Exactness does not depend on which backend is active.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

from .errors import CapacityError, ConsistencyError

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpz = int

DEFAULT_LIMIT = 100_000
HARD_CAP = 1_000_000

SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)

IMAG_TOL = 1e-10


def _check_limit(n: int, limit: int | None = None) -> None:
    if n < 1:
        raise ValueError(f"N must be positive, got {n}")
    cap = HARD_CAP if limit is None else min(limit, HARD_CAP)
    if n > cap:
        raise CapacityError(f"N={n} exceeds limit {cap}")


# ---------------------------------------------------------------------------
# exact truncated series arithmetic


def _pack_signed(coeffs, nbytes):
    # pos/neg split keeps to_bytes applicable; difference restores signs
    pos = bytearray(len(coeffs) * nbytes)
    neg = bytearray(len(coeffs) * nbytes)
    for i, c in enumerate(coeffs):
        if c > 0:
            pos[i * nbytes : i * nbytes + nbytes] = c.to_bytes(nbytes, "little")
        elif c < 0:
            neg[i * nbytes : i * nbytes + nbytes] = (-c).to_bytes(nbytes, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack_balanced(low, nbytes, n_out):
    """Recover signed digits from low = packed value mod 2^(8*nbytes*(n_out+1)).

    Digits live in (-2^(B-1), 2^(B-1)) by the slack built into nbytes, so
    each base-2^B digit of the nonnegative residue maps back to the signed
    value by subtracting the base when it crosses half, carrying upward.
    """
    data = low.to_bytes(nbytes * (n_out + 1), "little")
    half = 1 << (8 * nbytes - 1)
    full = half << 1
    out = [0] * n_out
    carry = 0
    for i in range(n_out):
        d = int.from_bytes(data[i * nbytes : (i + 1) * nbytes], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out[i] = d
    return out


def series_mul(a, b, n_out):
    """Exact product of integer power series a*b truncated to n_out terms.

    Input lists are coefficient vectors indexed by exponent. Runs through a
    single big-integer multiply via Kronecker packing; the digit width is
    sized from min(len) * max|a| * max|b| so no convolution sum can wrap.
    """
    a = a[:n_out]
    b = b[:n_out]
    ma = max(map(abs, a), default=0)
    mb = max(map(abs, b), default=0)
    if ma == 0 or mb == 0:
        return [0] * n_out
    bound = min(len(a), len(b)) * ma * mb
    nbytes = (bound.bit_length() + 2 + 7) // 8
    va = _pack_signed(a, nbytes)
    vb = va if b is a else _pack_signed(b, nbytes)
    prod = _mpz(va) * _mpz(vb)
    window = 8 * nbytes * (n_out + 1)
    # mask instead of %: bitwise AND stays linear-time on both backends
    low = int(prod & ((_mpz(1) << window) - 1))
    return _unpack_balanced(low, nbytes, n_out)


def _eta_cube(n_terms):
    # eta-tilde^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2), pentagonal-style sparsity
    out = [0] * n_terms
    k = 0
    while k * (k + 1) // 2 < n_terms:
        out[k * (k + 1) // 2] = (1 - 2 * (k & 1)) * (2 * k + 1)
        k += 1
    return out


def _delta_tau(N):
    # tau(n) for n = 0..N; the q-shift moves eta^24 exponent n-1 to n
    s = _eta_cube(N)
    s = series_mul(s, s, N)
    s = series_mul(s, s, N)
    s = series_mul(s, s, N)
    tau = [0] * (N + 1)
    tau[1 : N + 1] = s[:N]
    return tau


def _divisor_power_sum(power, N):
    sig = [0] * (N + 1)
    for d in range(1, N + 1):
        dp = d**power
        for m in range(d, N + 1, d):
            sig[m] += dp
    return sig


def _eisenstein(weight, N):
    # only the two generators are ever needed
    if weight == 4:
        mult, power = 240, 3
    elif weight == 6:
        mult, power = -504, 5
    else:
        raise ValueError(f"no Eisenstein generator of weight {weight}")
    sig = _divisor_power_sum(power, N)
    out = [mult * s for s in sig]
    out[0] = 1
    return out


# weight -> extra Eisenstein factors on top of Delta
_EIGENFORM_RECIPE = {
    12: (),
    16: (4,),
    18: (6,),
    20: (4, 4),
    22: (4, 6),
    26: (4, 4, 6),
}


@dataclass(frozen=True)
class EigenformTable:
    """q-expansion of the normalized eigenform of one-dimensional weight.

    raw[n] = a(n) exactly for 1 <= n <= limit (raw[0] = 0 padding);
    normalized[n] = a(n) / n^((weight-1)/2) in double precision.
    """

    weight: int
    limit: int
    raw: tuple
    normalized: tuple = field(repr=False)

    def __post_init__(self):
        if self.raw[1] != 1:
            raise ConsistencyError("eigenform not normalized: a(1) != 1")

    def spot_check(self) -> None:
        """Cheap structural validation: Hecke recursion and multiplicativity.

        Raises ConsistencyError on any mismatch; used both after
        construction in tests and when re-reading cached tables.
        """
        kk = self.weight - 1
        for p in (2, 3, 5):
            c = 1
            while p ** (c + 1) <= self.limit:
                lhs = self.raw[p ** (c + 1)]
                rhs = self.raw[p] * self.raw[p**c] - p**kk * self.raw[p ** (c - 1)]
                if lhs != rhs:
                    raise ConsistencyError(
                        f"Hecke recursion fails at p={p}, c={c}, weight={self.weight}"
                    )
                c += 1
        for m, n in ((2, 3), (3, 4), (2, 9), (5, 8)):
            if m * n <= self.limit and self.raw[m * n] != self.raw[m] * self.raw[n]:
                raise ConsistencyError(f"multiplicativity fails at {m}*{n}")


def _normalize(raw, weight):
    out = [0.0] * len(raw)
    e = (weight - 1) / 2
    for n in range(1, len(raw)):
        out[n] = raw[n] / n**e
    return out


def delta_qexp(N: int, limit: int | None = None) -> EigenformTable:
    """Weight-12 table with raw = Ramanujan tau(1..N)."""
    _check_limit(N, limit)
    tau = _delta_tau(N)
    return EigenformTable(
        weight=12, limit=N, raw=tuple(tau), normalized=tuple(_normalize(tau, 12))
    )


def eigenform_qexp(weight: int, N: int, limit: int | None = None) -> EigenformTable:
    """Normalized cusp eigenform of any one-dimensional level-1 weight."""
    if weight not in _EIGENFORM_RECIPE:
        raise ValueError(
            f"weight {weight} not supported; choose from {SUPPORTED_WEIGHTS}"
        )
    _check_limit(N, limit)
    terms = N + 1
    series = _delta_tau(N)
    for ew in _EIGENFORM_RECIPE[weight]:
        series = series_mul(series, _eisenstein(ew, terms), terms)
    return EigenformTable(
        weight=weight,
        limit=N,
        raw=tuple(series),
        normalized=tuple(_normalize(series, weight)),
    )


# ---------------------------------------------------------------------------
# Satake data


@dataclass(frozen=True)
class SatakeTable:
    """Per-prime data t_p = lam(p) in [-2,2] and theta_p = arccos(t_p/2)."""

    limit: int
    primes: tuple
    t: tuple
    theta: tuple


def primes_up_to(N: int) -> list:
    if N < 2:
        return []
    flags = bytearray([1]) * (N + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(N) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i in range(2, N + 1) if flags[i]]


def satake_table(form: EigenformTable) -> SatakeTable:
    ps = primes_up_to(form.limit)
    ts = []
    thetas = []
    for p in ps:
        t = form.normalized[p]
        if abs(t) > 2.0 + 1e-9:
            raise ConsistencyError(f"Deligne bound violated at p={p}: t={t}")
        ts.append(t)
        # clamp guards arccos against rounding spill at |t| = 2
        thetas.append(math.acos(max(-1.0, min(1.0, t / 2.0))))
    return SatakeTable(limit=form.limit, primes=tuple(ps), t=tuple(ts), theta=tuple(thetas))


# ---------------------------------------------------------------------------
# symmetric-power coefficients


def sym_prime_power(j: int, a: int, t: float) -> float:
    """lam_sym^j(p^a) given t = lam_f(p).

    Expands the local factor prod_m (1 - alpha^(j-2m) X)^(-1) to order a by
    multiplying in one geometric series at a time (in-place prefix pass per
    root). Roots are e^(i(j-2m)theta) with theta = arccos(t/2). The result
    is real up to rounding; a larger imaginary residue means a defect.
    """
    if j < 1:
        raise ValueError(f"j must be positive, got {j}")
    if a < 0:
        raise ValueError(f"a must be nonnegative, got {a}")
    if abs(t) > 2.0 + 1e-6:
        raise ValueError(f"t={t} outside the Deligne interval [-2, 2]")
    if a == 0:
        return 1.0
    theta = math.acos(max(-1.0, min(1.0, t / 2.0)))
    s = [0j] * (a + 1)
    s[0] = 1 + 0j
    for m in range(j + 1):
        r = complex(math.cos((j - 2 * m) * theta), math.sin((j - 2 * m) * theta))
        for k in range(1, a + 1):
            s[k] += r * s[k - 1]
    val = s[a]
    if abs(val.imag) > IMAG_TOL * max(1.0, abs(val.real)):
        raise ConsistencyError(
            f"imaginary residue {val.imag!r} in lam_sym^{j}(p^{a}) at t={t}"
        )
    return val.real


def smallest_prime_factors(N: int) -> list:
    """spf[n] = least prime factor of n (spf[0] = spf[1] = 0)."""
    spf = list(range(N + 1))
    if N >= 1:
        spf[1] = 0
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == p:
            for m in range(p * p, N + 1, p):
                if spf[m] == m:
                    spf[m] = p
    return spf


def sym_coeff_sieve(j: int, N: int, form: EigenformTable) -> list:
    """lam_sym^j(n) for n = 0..N by multiplicative extension (index 0 unused).

    Each prime power value comes from sym_prime_power and is memoized, so
    the cost is one factorization pass plus one evaluation per distinct
    (p, a) pair.
    """
    if form.limit < N:
        raise ValueError(f"form table limit {form.limit} < N={N}")
    _check_limit(N)
    spf = smallest_prime_factors(N)
    memo = {}
    out = [0.0] * (N + 1)
    if N >= 1:
        out[1] = 1.0
    for n in range(2, N + 1):
        m = n
        val = 1.0
        while m > 1:
            p = spf[m]
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            key = (p, a)
            f = memo.get(key)
            if f is None:
                f = sym_prime_power(j, a, form.normalized[p])
                memo[key] = f
            val *= f
        out[n] = val
    return out


# ---------------------------------------------------------------------------
# on-disk cache


def cache_path(cache_dir: str, weight: int, N: int) -> str:
    return os.path.join(cache_dir, f"tau_{weight}_{N}.csv")


def save_table(form: EigenformTable, cache_dir: str) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    path = cache_path(cache_dir, form.weight, form.limit)
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "a_n"])
        for n in range(1, form.limit + 1):
            writer.writerow([n, form.raw[n]])
    os.replace(tmp, path)
    return path


def load_table(weight: int, N: int, cache_dir: str) -> EigenformTable | None:
    """Read a cached table back, re-validating; None when absent.

    A malformed or failing file raises ConsistencyError rather than being
    silently recomputed, since stale caches are a real failure mode.
    """
    path = cache_path(cache_dir, weight, N)
    if not os.path.exists(path):
        return None
    raw = [0] * (N + 1)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["n", "a_n"]:
            raise ConsistencyError(f"bad cache header in {path}: {header}")
        count = 0
        for row in reader:
            n = int(row[0])
            if not 1 <= n <= N:
                raise ConsistencyError(f"cache row out of range in {path}: n={n}")
            raw[n] = int(row[1])
            count += 1
    if count != N:
        raise ConsistencyError(f"cache {path} has {count} rows, expected {N}")
    form = EigenformTable(
        weight=weight, limit=N, raw=tuple(raw), normalized=tuple(_normalize(raw, weight))
    )
    form.spot_check()
    return form


def cached_eigenform(weight: int, N: int, cache_dir: str) -> EigenformTable:
    """Load from cache when present, else compute and persist."""
    form = load_table(weight, N, cache_dir)
    if form is None:
        form = eigenform_qexp(weight, N)
        save_table(form, cache_dir)
    return form
