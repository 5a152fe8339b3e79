"""Binary splitting-tree contention resolution.

PGFs are held as truncated power series: ``coeffs[k] = Pr[X = k]`` for
``k <= l_max``. Coefficients below the truncation point are exact; whatever
probability lies beyond ``l_max`` is reported as ``tail_mass``.

Conventions (blocked access, fair coin):

* ``Q_n`` is the PGF of the whole CRI when ``n`` nodes start it. An empty
  or singleton group costs one slot, so ``Q_0 = Q_1 = z``.
* ``G_{N+1}`` is the PGF of the slot in which a tagged node transmits alone
  when it starts the CRI together with ``N`` other nodes. ``G_1 = z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

DEFAULT_L_MAX = 512
TAIL_BOUND = 1e-6
MAX_TREE_SLOTS = 1_000_000


@dataclass(frozen=True, eq=False)
class TruncatedPgf:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("coefficients must be a 1-d series of length >= 2")
        if np.any(c < -1e-15) or np.any(c > 1 + 1e-12):
            raise ValueError("coefficients must be probabilities")
        if c.sum() > 1 + 1e-12:
            raise ValueError(f"coefficients sum to {c.sum()} > 1")
        c = np.clip(c, 0.0, None)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def l_max(self) -> int:
        return self.coeffs.size - 1

    @property
    def tail_mass(self) -> float:
        return 1.0 - float(np.sum(self.coeffs))

    def __call__(self, z: float) -> float:
        return float(np.polynomial.polynomial.polyval(z, self.coeffs))


@dataclass(frozen=True)
class SplitDistribution:
    """How ``n`` colliding nodes split over the sides of a fair coin."""

    q_sides: int = 2

    def __post_init__(self):
        if self.q_sides != 2:
            raise NotImplementedError("only binary (q_sides=2) splitting is supported")

    def prob(self, n: int, k: int) -> float:
        return binomial_split(n, k)

    def pmf(self, n: int) -> np.ndarray:
        return np.array([binomial_split(n, k) for k in range(n + 1)])


def binomial_split(n: int, k: int) -> float:
    """``Pr[k of n nodes flip 0] = C(n, k) 2^-n``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return comb(n, k) / 2.0**n


# -- truncated series arithmetic ------------------------------------------

def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: a.size]


def _shift(a: np.ndarray) -> np.ndarray:
    """Multiply by ``z`` and truncate."""
    out = np.zeros_like(a)
    out[1:] = a[:-1]
    return out


def series_divide(num: np.ndarray, den) -> np.ndarray:
    """Truncated power-series quotient ``num / den`` (needs ``den[0] != 0``)."""
    den = np.asarray(den, dtype=float)
    if den[0] == 0:
        raise ZeroDivisionError("series divisor has zero constant term")
    out = np.zeros(num.size)
    d = den.size
    for k in range(num.size):
        acc = num[k]
        for j in range(1, min(d, k + 1)):
            acc -= den[j] * out[k - j]
        out[k] = acc / den[0]
    return out


def _z(l_max: int) -> np.ndarray:
    s = np.zeros(l_max + 1)
    s[1] = 1.0
    return s


def cri_divisor(n: int) -> np.ndarray:
    """Denominator isolating the self-referential terms of ``Q_n``, n >= 2."""
    return np.array([1.0, 0.0, -(2.0 ** (1 - n))])


def tagged_divisor(n_others: int) -> np.ndarray:
    """Denominator isolating the self-referential terms of ``G_{N+1}``, N >= 1."""
    c = 2.0 ** (-n_others - 1)
    return np.array([1.0, -c, -c])


def cri_numerator(n: int, l_max: int) -> np.ndarray:
    """``z sum_{k=1}^{n-1} B_{n,k} Q_k Q_{n-k}`` for n >= 2."""
    acc = np.zeros(l_max + 1)
    for k in range(1, n):
        acc += binomial_split(n, k) * _mul(_cri_series(k, l_max), _cri_series(n - k, l_max))
    return _shift(acc)


def tagged_numerator(n_others: int, l_max: int) -> np.ndarray:
    big_n = n_others
    acc = np.zeros(l_max + 1)
    # tagged node flips 0 and shares the first group with k others, k < N
    for k in range(big_n):
        acc += binomial_split(big_n, k) * _tagged_series(k + 1, l_max)
    # tagged node flips 1: the k >= 1 nodes that flipped 0 go first
    for k in range(1, big_n + 1):
        acc += binomial_split(big_n, k) * _mul(
            _cri_series(k, l_max), _tagged_series(big_n - k + 1, l_max)
        )
    return 0.5 * _shift(acc)


@lru_cache(maxsize=None)
def _cri_series(n: int, l_max: int) -> np.ndarray:
    if n <= 1:
        out = _z(l_max)
    else:
        out = series_divide(cri_numerator(n, l_max), cri_divisor(n))
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def _tagged_series(n_total: int, l_max: int) -> np.ndarray:
    if n_total == 1:
        out = _z(l_max)
    else:
        n_others = n_total - 1
        out = series_divide(tagged_numerator(n_others, l_max), tagged_divisor(n_others))
    out.flags.writeable = False
    return out


def _check_l_max(l_max: int):
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")


def cri_pgf(n: int, l_max: int = DEFAULT_L_MAX) -> TruncatedPgf:
    """PGF of the CRI length when ``n`` nodes collide initially."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    _check_l_max(l_max)
    return TruncatedPgf(_cri_series(n, l_max))


def tagged_pgf(n_total: int, l_max: int = DEFAULT_L_MAX) -> TruncatedPgf:
    """PGF of the tagged packet's delay among ``n_total`` contenders."""
    if n_total < 1:
        raise ValueError(f"n_total must be >= 1, got {n_total}")
    _check_l_max(l_max)
    return TruncatedPgf(_tagged_series(n_total, l_max))


def _check_tail(p: TruncatedPgf, bound: float):
    if p.tail_mass > bound:
        raise ValueError(
            f"tail mass {p.tail_mass:.3g} exceeds {bound:.3g}; increase l_max"
        )


def pgf_mean(p: TruncatedPgf, tail_bound: float = TAIL_BOUND) -> float:
    """``G'(1)`` evaluated on the series."""
    _check_tail(p, tail_bound)
    k = np.arange(p.coeffs.size)
    return float(np.dot(k, p.coeffs))


def pgf_variance(p: TruncatedPgf, tail_bound: float = TAIL_BOUND) -> float:
    """``G''(1) + G'(1) - G'(1)^2``."""
    _check_tail(p, tail_bound)
    k = np.arange(p.coeffs.size)
    mean = float(np.dot(k, p.coeffs))
    second_factorial = float(np.dot(k * (k - 1), p.coeffs))
    return max(second_factorial + mean - mean * mean, 0.0)


def pgf_pmf(p: TruncatedPgf, x: int) -> float:
    """``Pr[X = x] = G^{(x)}(0) / x!``, i.e. the x-th series coefficient."""
    if not 0 <= x <= p.l_max:
        raise ValueError(f"x={x} outside 0..{p.l_max}")
    return float(p.coeffs[x])


def sample_pgf(p: TruncatedPgf, size, rng: np.random.Generator) -> np.ndarray:
    """Draw from the truncated law (renormalised over the kept coefficients)."""
    cdf = np.cumsum(p.coeffs)
    cdf /= cdf[-1]
    return np.searchsorted(cdf, rng.random(size), side="right")


# -- slot-level simulation -------------------------------------------------

@dataclass(frozen=True)
class TreeOutcome:
    cri_length: int
    tagged_delay: int
    # slot of the first collision-free transmission by any contender
    first_success: int


def simulate_tree(n: int, rng: np.random.Generator) -> TreeOutcome:
    """Run one CRI of the standard tree algorithm with ``n`` contenders.

    Contender 0 is the tagged one. Groups are resolved depth first, the
    group that flipped 0 before the group that flipped 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    stack = [list(range(n))]
    slot = 0
    tagged = first = 0
    while stack:
        slot += 1
        if slot > MAX_TREE_SLOTS:
            raise RuntimeError(f"tree did not resolve within {MAX_TREE_SLOTS} slots")
        group = stack.pop()
        if len(group) == 1:
            first = first or slot
            if group[0] == 0:
                tagged = slot
        elif len(group) > 1:
            flips = rng.random(len(group)) < 0.5
            stack.append([g for g, f in zip(group, flips) if f])
            stack.append([g for g, f in zip(group, flips) if not f])
    return TreeOutcome(slot, tagged, first)


def simulate_trees(n: int, runs: int, rng: np.random.Generator):
    """Vectorised :func:`simulate_tree` over ``runs`` independent CRIs.

    Returns ``(cri_length, tagged_delay, first_success)`` integer arrays.
    Only group sizes and the tagged node's membership are tracked.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    depth = 16
    sizes = np.zeros((runs, depth), dtype=np.int32)
    has_tag = np.zeros((runs, depth), dtype=bool)
    sizes[:, 0] = n
    has_tag[:, 0] = True
    top = np.ones(runs, dtype=np.int64)
    cri = np.zeros(runs, dtype=np.int64)
    tagged = np.zeros(runs, dtype=np.int64)
    first = np.zeros(runs, dtype=np.int64)

    slot = 0
    live = np.arange(runs)
    while live.size:
        slot += 1
        if slot > MAX_TREE_SLOTS:
            raise RuntimeError(f"tree did not resolve within {MAX_TREE_SLOTS} slots")
        if top[live].max() + 2 > depth:
            sizes = np.pad(sizes, ((0, 0), (0, depth)))
            has_tag = np.pad(has_tag, ((0, 0), (0, depth)))
            depth *= 2
        top[live] -= 1
        sp = top[live]
        s = sizes[live, sp]
        g = has_tag[live, sp]

        alone = s == 1
        hit = live[alone & (first[live] == 0)]
        first[hit] = slot
        tagged[live[alone & g]] = slot

        coll = s >= 2
        idx = live[coll]
        if idx.size:
            s_c, g_c = s[coll], g[coll]
            zeros = rng.binomial(s_c - g_c, 0.5)
            tag_to_one = g_c & (rng.random(idx.size) < 0.5)
            tag_to_zero = g_c & ~tag_to_one
            size0 = zeros + tag_to_zero
            t = top[idx]
            sizes[idx, t] = s_c - size0
            has_tag[idx, t] = tag_to_one
            sizes[idx, t + 1] = size0
            has_tag[idx, t + 1] = tag_to_zero
            top[idx] = t + 2

        done = live[top[live] == 0]
        cri[done] = slot
        live = live[top[live] > 0]
    return cri, tagged, first
