"""Cancellation along geodesic Y-factorizations.

For a geodesic factorization u = y_1 ... y_n with Y = (punctured r-ball) ∩ H:
  - y_i and y_{i+1} cancel at most min(ceil(k_i/2), ceil(k_{i+1}/2)) - 1 letters,
  - the second half of y_j survives reduction of y_1 ... y_j,
  - |y_1 ... y_j|_X strictly increases with j.
"""
import logging
from dataclasses import dataclass, field

from .exceptions import AlphabetMismatch, NonGeodesicFactorization
from .factorization import y_length

logger = logging.getLogger(__name__)


def _half_up(k):
    return -(-k // 2)


def pair_cancellation(y, z):
    """Letters of y annihilated when y.z is reduced."""
    if y.rank != z.rank:
        raise AlphabetMismatch(f"words over F_{y.rank} and F_{z.rank} cannot be combined")
    left, right = y.letters, z.letters
    count = 0
    limit = min(len(left), len(right))
    while count < limit and left[-1 - count] == right[count].inverse():
        count += 1
    return count


def pair_bound(k, l):
    return min(_half_up(k), _half_up(l)) - 1


@dataclass
class CancellationReport:
    factorization: object
    pair_cancellations: tuple = ()
    pair_bounds: tuple = ()
    survival_flags: tuple = ()
    growth_flags: tuple = ()
    prefix_lengths: tuple = ()
    violations: list = field(default_factory=list)

    @property
    def pair_flags(self):
        return tuple(c <= b for c, b in zip(self.pair_cancellations, self.pair_bounds))

    @property
    def passed(self):
        return not self.violations

    def as_dict(self):
        return {
            'factorization': self.factorization.as_dict(),
            'pair_cancellations': list(self.pair_cancellations),
            'pair_bounds': list(self.pair_bounds),
            'pair_flags': list(self.pair_flags),
            'survival_flags': list(self.survival_flags),
            'growth_flags': list(self.growth_flags),
            'prefix_lengths': list(self.prefix_lengths),
            'passed': self.passed,
            'violations': list(self.violations),
        }


def _surviving_halves(factors):
    """Per prefix y_1...y_j, whether letters ceil(k_j/2)..k_j of y_j are all still present.

    Reduction runs once with every letter tagged (factor, position); a tag
    popped off the stack is a cancelled letter.
    """
    stack = []
    flags = []
    for j, y in enumerate(factors):
        for p, letter in enumerate(y.letters, start=1):
            if stack and stack[-1][0] == letter.inverse():
                stack.pop()
            else:
                stack.append((letter, (j, p)))
        present = set()
        for _, tag in reversed(stack):
            if tag[0] != j:
                break
            present.add(tag[1])
        needed = range(_half_up(len(y)), len(y) + 1)
        flags.append(all(p in present for p in needed))
    return tuple(flags)


def check_lemma_2_3(sub, factorization, cap=None):
    """Check the three cancellation properties on a Y-geodesic factorization.

    A factorization longer than |u|_Y is rejected: the properties are only
    claimed for geodesics. Observed violations are reported, never repaired.
    """
    u = factorization.u
    geodesic_length = y_length(sub, u, cap)
    if factorization.n != geodesic_length:
        raise NonGeodesicFactorization(
            f"{factorization.n} factors given for {u.text}, but |{u.text}|_Y = {geodesic_length}")

    factors = factorization.factors
    report = CancellationReport(factorization)
    report.pair_cancellations = tuple(pair_cancellation(y, z) for y, z in zip(factors, factors[1:]))
    report.pair_bounds = tuple(pair_bound(len(y), len(z)) for y, z in zip(factors, factors[1:]))
    for i, (count, bound) in enumerate(zip(report.pair_cancellations, report.pair_bounds), start=1):
        if count > bound:
            report.violations.append(
                f"pair {i}: {factors[i - 1].text}.{factors[i].text} cancels {count} > {bound}")

    report.survival_flags = _surviving_halves(factors)
    for j, survived in enumerate(report.survival_flags, start=1):
        if not survived:
            report.violations.append(f"prefix {j}: second half of {factors[j - 1].text} was cancelled")

    lengths = tuple(len(p) for p in factorization.prefixes())
    report.prefix_lengths = lengths
    report.growth_flags = tuple(a < b for a, b in zip(lengths, lengths[1:]))
    for j, grew in enumerate(report.growth_flags, start=1):
        if not grew:
            report.violations.append(f"prefix {j}: length {lengths[j]} does not exceed {lengths[j - 1]}")

    if report.violations:
        logger.warning("cancellation check failed for %s: %s", u.text, '; '.join(report.violations))
    return report
