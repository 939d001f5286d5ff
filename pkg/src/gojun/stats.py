"""Correlation measures, hypothesis tests, and co-occurrence statistics.

Everything here is implemented directly over the standard library so test
suites can cross-check it against independent references. Exact methods
(sign test, small-sample rank-sum) enumerate; large-sample methods use
normal or Student-t tails evaluated to better than 1e-10.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DegenerateVarianceError, ZeroJointError

#: Total sample size up to which the rank-sum test enumerates exactly.
RANK_SUM_EXACT_LIMIT = 12


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str
    n: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "method": self.method,
            "n": dict(self.n),
        }


# ---------------------------------------------------------------------------
# Distribution functions


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    return h


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided(t: float, df: int) -> float:
    """Two-sided p-value for a Student-t statistic."""
    if df < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    if math.isinf(t):
        return 0.0
    return betainc_reg(df / 2.0, 0.5, df / (df + t * t))


# ---------------------------------------------------------------------------
# Correlation


def _check_lengths(xs: Sequence[float], ys: Sequence[float]) -> int:
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("need at least two observations")
    return len(xs)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation coefficient."""
    n = _check_lengths(xs, ys)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVarianceError("an argument has zero variance")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def fractional_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with tied values sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def rank_correlation(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman's rho: Pearson over fractional ranks."""
    _check_lengths(xs, ys)
    return pearson(fractional_ranks(xs), fractional_ranks(ys))


def pearson_test(xs: Sequence[float], ys: Sequence[float]) -> TestResult:
    """Pearson r with a two-sided t-transform p-value."""
    n = _check_lengths(xs, ys)
    r = pearson(xs, ys)
    if n == 2 or abs(r) >= 1.0:
        p = 0.0 if abs(r) >= 1.0 else 1.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = student_t_two_sided(t, n - 2)
    return TestResult(statistic=r, p_value=p, method="pearson", n={"n": n})


def spearman_test(xs: Sequence[float], ys: Sequence[float]) -> TestResult:
    n = _check_lengths(xs, ys)
    rho = rank_correlation(xs, ys)
    if n == 2 or abs(rho) >= 1.0:
        p = 0.0 if abs(rho) >= 1.0 else 1.0
    else:
        t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
        p = student_t_two_sided(t, n - 2)
    return TestResult(statistic=rho, p_value=p, method="spearman", n={"n": n})


def phi_coefficient(xs: Sequence[int], ys: Sequence[int]) -> float:
    """Pearson correlation over two {0,1}-coded series."""
    return pearson([float(x) for x in xs], [float(y) for y in ys])


# ---------------------------------------------------------------------------
# Hypothesis tests


def wilcoxon_rank_sum(xs: Sequence[float], ys: Sequence[float]) -> TestResult:
    """Two-sided rank-sum test with average-rank ties.

    Exact by enumerating all rank assignments when the pooled size is at
    most RANK_SUM_EXACT_LIMIT, otherwise a tie-corrected normal
    approximation with continuity correction. The statistic is the
    Mann-Whitney U of the first sample.
    """
    if not xs or not ys:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(xs), len(ys)
    total = n1 + n2
    pooled = list(xs) + list(ys)
    ranks = fractional_ranks(pooled)
    w = sum(ranks[:n1])
    u = w - n1 * (n1 + 1) / 2.0
    sizes = {"n1": n1, "n2": n2}

    if total <= RANK_SUM_EXACT_LIMIT:
        n_le = 0
        n_ge = 0
        count = 0
        for combo in itertools.combinations(range(total), n1):
            count += 1
            w_alt = sum(ranks[i] for i in combo)
            if w_alt <= w:
                n_le += 1
            if w_alt >= w:
                n_ge += 1
        p = min(1.0, 2.0 * min(n_le, n_ge) / count)
        return TestResult(statistic=u, p_value=p, method="rank-sum-exact", n=sizes)

    mu = n1 * n2 / 2.0
    tie_counts = Counter(ranks).values()
    tie_term = sum(t**3 - t for t in tie_counts)
    var = n1 * n2 / 12.0 * ((total + 1) - tie_term / (total * (total - 1)))
    if var <= 0.0:
        return TestResult(statistic=u, p_value=1.0, method="rank-sum-normal", n=sizes)
    diff = u - mu
    if diff > 0:
        diff -= 0.5
    elif diff < 0:
        diff += 0.5
    z = diff / math.sqrt(var)
    p = min(1.0, 2.0 * normal_cdf(-abs(z)))
    return TestResult(statistic=u, p_value=p, method="rank-sum-normal", n=sizes)


def sign_test(n_pos: int, n_neg: int) -> TestResult:
    """Exact two-sided sign test: 2*P(X >= max count) under Binomial(n, 1/2)."""
    if n_pos < 0 or n_neg < 0:
        raise ValueError("counts must be non-negative")
    n = n_pos + n_neg
    if n < 1:
        raise ValueError("need at least one non-tied observation")
    k = max(n_pos, n_neg)
    tail = sum(math.comb(n, i) for i in range(k, n + 1))
    p = min(1.0, 2.0 * tail / 2**n)
    return TestResult(
        statistic=float(k), p_value=p, method="sign-exact", n={"n_pos": n_pos, "n_neg": n_neg}
    )


def paired_t_test(xs: Sequence[float], ys: Sequence[float]) -> TestResult:
    n = _check_lengths(xs, ys)
    diffs = [x - y for x, y in zip(xs, ys)]
    mean = sum(diffs) / n
    ss = sum((d - mean) ** 2 for d in diffs)
    if ss == 0.0:
        raise DegenerateVarianceError("paired differences have zero variance")
    sd = math.sqrt(ss / (n - 1))
    t = mean / (sd / math.sqrt(n))
    p = student_t_two_sided(t, n - 1)
    return TestResult(statistic=t, p_value=p, method="paired-t", n={"n": n})


def two_proportion_z_test(k1: int, n1: int, k2: int, n2: int) -> TestResult:
    if n1 < 1 or n2 < 1:
        raise ValueError("group sizes must be >= 1")
    if not (0 <= k1 <= n1 and 0 <= k2 <= n2):
        raise ValueError("success counts must lie within group sizes")
    pooled = (k1 + k2) / (n1 + n2)
    if pooled in (0.0, 1.0):
        raise DegenerateVarianceError("pooled proportion is degenerate (0 or 1)")
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    z = (k1 / n1 - k2 / n2) / se
    p = min(1.0, 2.0 * normal_cdf(-abs(z)))
    return TestResult(
        statistic=z, p_value=p, method="two-proportion-z", n={"n1": n1, "n2": n2}
    )


# ---------------------------------------------------------------------------
# Co-occurrence statistics


@dataclass
class CooccurrenceTable:
    """Joint and marginal event counts for (noun, verb) co-occurrence."""

    joint: Counter
    noun_counts: Counter
    verb_counts: Counter
    total: int

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "CooccurrenceTable":
        joint: Counter = Counter()
        nouns: Counter = Counter()
        verbs: Counter = Counter()
        total = 0
        for noun, verb in pairs:
            joint[(noun, verb)] += 1
            nouns[noun] += 1
            verbs[verb] += 1
            total += 1
        return cls(joint=joint, noun_counts=nouns, verb_counts=verbs, total=total)

    def validate(self) -> "CooccurrenceTable":
        for (noun, verb), c in self.joint.items():
            bound = min(self.noun_counts[noun], self.verb_counts[verb])
            if not (0 <= c <= bound <= self.total):
                raise ValueError(f"inconsistent counts for ({noun!r}, {verb!r})")
        return self


def npmi(table: CooccurrenceTable, noun: str, verb: str) -> float:
    """Pointwise mutual information normalized by -log joint probability."""
    c_joint = table.joint.get((noun, verb), 0)
    if c_joint == 0:
        raise ZeroJointError(f"no joint occurrences of ({noun!r}, {verb!r})")
    p_joint = c_joint / table.total
    if p_joint >= 1.0:
        return 1.0
    p_noun = table.noun_counts[noun] / table.total
    p_verb = table.verb_counts[verb] / table.total
    pmi = math.log(p_joint / (p_noun * p_verb))
    return pmi / (-math.log(p_joint))


def delta_npmi(table: CooccurrenceTable, noun_dat: str, noun_acc: str, verb: str) -> float:
    """NPMI difference: how much more the dative noun sticks to the verb."""
    return npmi(table, noun_dat, verb) - npmi(table, noun_acc, verb)
