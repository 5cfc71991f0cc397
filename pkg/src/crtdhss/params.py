"""Access structures, public parameters, and their validity conditions.

Participants are globally indexed 1..n, sorted by level and then by
nondecreasing modulus degree, so the prefix sets [1, N_l] coincide with
"the first l levels". A coalition is authorized when, for some level l,
it holds at least t_l members inside that prefix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InsufficientIrreduciblesError
from .fieldpoly import Poly, is_pairwise_coprime, is_prime, poly_gcd, pow_mod

MAX_PRIME = 2**64 - 1

# Exhaustive irreducible search is used below this candidate-space size;
# larger spaces fall back to rejection sampling.
_ENUMERATION_CUTOFF = 1 << 12


@dataclass(frozen=True)
class AccessStructure:
    """Level sizes n_1..n_m and strictly increasing thresholds t_1..t_m."""

    level_sizes: tuple[int, ...]
    thresholds: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "level_sizes", tuple(self.level_sizes))
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        sizes, thresholds = self.level_sizes, self.thresholds
        if not sizes or len(sizes) != len(thresholds):
            raise ValueError("level sizes and thresholds must align and be nonempty")
        if any(n < 1 for n in sizes):
            raise ValueError("every level must have at least one participant")
        if thresholds[0] < 1:
            raise ValueError("thresholds start at 1")
        if any(a >= b for a, b in zip(thresholds, thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")
        if any(t > n for t, n in zip(thresholds, sizes)):
            raise ValueError("each threshold must not exceed its own level size")

    @property
    def m(self) -> int:
        return len(self.level_sizes)

    @property
    def n(self) -> int:
        return sum(self.level_sizes)

    @property
    def prefix_counts(self) -> tuple[int, ...]:
        """N_l = number of participants in the first l levels, for l=1..m."""
        out, acc = [], 0
        for size in self.level_sizes:
            acc += size
            out.append(acc)
        return tuple(out)

    def level_of(self, participant: int) -> int:
        if not 1 <= participant <= self.n:
            raise ValueError(f"participant index {participant} out of range 1..{self.n}")
        for level, bound in enumerate(self.prefix_counts, start=1):
            if participant <= bound:
                return level
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class PublicParams:
    """Prime p, secret degree bound d0, the public moduli, and hash config."""

    p: int
    d0: int
    moduli: tuple[Poly, ...]
    hash_backend: str = "crypto"
    table_seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(self.moduli))
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p > MAX_PRIME:
            raise ValueError("field modulus must fit in 64 bits")
        if self.d0 < 1:
            raise ValueError("secret degree bound must be at least 1")
        if not self.moduli:
            raise ValueError("at least one modulus is required")
        for m in self.moduli:
            if not isinstance(m, Poly) or m.p != self.p:
                raise ValueError("every modulus must be a polynomial over F_p")
            if m.degree < 1:
                raise ValueError("every modulus must have degree at least 1")
        if self.hash_backend not in ("crypto", "table"):
            raise ValueError(f"unknown hash backend {self.hash_backend!r}")
        if (self.table_seed is None) == (self.hash_backend == "table"):
            raise ValueError("table_seed must be given exactly when hash_backend is 'table'")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(m.degree for m in self.moduli)

    @property
    def secret_modulus(self) -> Poly:
        """m_0(x) = x**d0."""
        return Poly.x_power(self.p, self.d0)


@dataclass(frozen=True)
class ValidationReport:
    """Named violations of the parameter conditions; empty means valid."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_params(structure: AccessStructure, params: PublicParams) -> ValidationReport:
    """Check the three moduli conditions plus pairwise coprimality.

    Violations are reported by name rather than raised: parameter files are
    operator input and a full list beats failing on the first problem.
    """
    violations = []
    degrees = params.degrees
    n = structure.n

    if len(params.moduli) != n:
        violations.append(
            f"participant_count: {len(params.moduli)} moduli for {n} participants"
        )

    for i, m in enumerate(params.moduli, start=1):
        if m.coefficient(0) == 0:
            violations.append(
                f"condition_i: modulus {i} shares the factor x with x^{params.d0}"
            )

    if any(d < params.d0 for d in degrees) or any(
        a > b for a, b in zip(degrees, degrees[1:])
    ):
        violations.append(
            "condition_ii: degrees must be nondecreasing and at least d0"
        )

    if len(params.moduli) == n:
        for level, t in enumerate(structure.thresholds, start=1):
            top = sum(degrees[n - t + 1 :])  # the t-1 largest degrees
            low = sum(degrees[:t])
            if params.d0 + top > low:
                violations.append(
                    f"condition_iii: level {level} needs d0 + {top} <= {low}"
                )

    if not is_pairwise_coprime(params.moduli):
        violations.append("pairwise_coprime: some moduli share a factor")

    return ValidationReport(tuple(violations))


def is_authorized(structure: AccessStructure, subset: Iterable[int]) -> bool:
    """True iff some level l sees at least t_l members within its prefix."""
    return min_authorized_level(structure, subset) is not None


def min_authorized_level(structure: AccessStructure, subset: Iterable[int]) -> Optional[int]:
    """Smallest level whose threshold the subset meets, or None."""
    members = set(subset)
    for i in members:
        if not 1 <= i <= structure.n:
            raise ValueError(f"participant index {i} out of range 1..{structure.n}")
    for level, (bound, t) in enumerate(
        zip(structure.prefix_counts, structure.thresholds), start=1
    ):
        if sum(1 for i in members if i <= bound) >= t:
            return level
    return None


def information_rate(structure: AccessStructure, params: PublicParams) -> Fraction:
    """Secret-space bits over the largest share-space bits: d0 / max(d_i)."""
    return Fraction(params.d0, max(params.degrees))


# ---------------------------------------------------------------------------
# Irreducible polynomial machinery
# ---------------------------------------------------------------------------


def _mobius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def monic_irreducible_count(p: int, degree: int) -> int:
    """Number of monic irreducible polynomials of the given degree over F_p."""
    if degree < 1:
        raise ValueError("degree must be positive")
    total = 0
    for e in range(1, degree + 1):
        if degree % e == 0:
            total += _mobius(e) * p ** (degree // e)
    return total // degree


def is_irreducible(f: Poly) -> bool:
    """Irreducibility over F_p via Frobenius powers.

    f is reducible iff it has an irreducible factor of degree k <= deg(f)/2,
    which is detected by gcd(x^(p^k) - x, f) != 1.
    """
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    p = f.p
    x = Poly.x_power(p, 1)
    u = x % f
    one = Poly.one(p)
    for _ in range(d // 2):
        u = pow_mod(u, p, f)
        if poly_gcd(u - x, f) != one:
            return False
    return True


def _linear_moduli(p: int, count: int, rng: random.Random) -> list[Poly]:
    # x - a with a != 0, so the constant term is nonzero; p - 1 are usable.
    if count > p - 1:
        raise InsufficientIrreduciblesError(
            f"need {count} linear moduli but only {p - 1} avoid the factor x"
        )
    if p <= _ENUMERATION_CUTOFF:
        roots = list(range(1, p))
        rng.shuffle(roots)
        chosen = roots[:count]
    else:
        seen: set[int] = set()
        chosen = []
        while len(chosen) < count:
            a = rng.randrange(1, p)
            if a not in seen:
                seen.add(a)
                chosen.append(a)
    return [Poly(p, [-a, 1]) for a in chosen]


def _higher_degree_moduli(p: int, degree: int, count: int, rng: random.Random) -> list[Poly]:
    available = monic_irreducible_count(p, degree)
    if count > available:
        raise InsufficientIrreduciblesError(
            f"need {count} monic irreducibles of degree {degree} over F_{p}, "
            f"only {available} exist"
        )
    if p**degree <= _ENUMERATION_CUTOFF:
        candidates = []
        for index in range(p**degree):
            coeffs = []
            v = index
            for _ in range(degree):
                coeffs.append(v % p)
                v //= p
            coeffs.append(1)
            f = Poly(p, coeffs)
            if is_irreducible(f):
                candidates.append(f)
        rng.shuffle(candidates)
        return candidates[:count]
    chosen: list[Poly] = []
    seen: set[tuple[int, ...]] = set()
    while len(chosen) < count:
        coeffs = [rng.randrange(p) for _ in range(degree)] + [1]
        f = Poly(p, coeffs)
        if f.coeffs in seen or not is_irreducible(f):
            continue
        seen.add(f.coeffs)
        chosen.append(f)
    return chosen


def generate_moduli(
    p: int, degree_profile: Sequence[int], rng: random.Random
) -> tuple[Poly, ...]:
    """Draw distinct monic irreducible moduli matching the degree profile.

    Irreducibility plus degree >= 1 guarantees pairwise coprimality, and no
    output equals x, so conditions on the constant term hold by construction.
    The profile must be nondecreasing; condition (iii) against a threshold
    sequence remains the caller's responsibility.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    profile = tuple(degree_profile)
    if not profile or any(d < 1 for d in profile):
        raise ValueError("degree profile must be nonempty and positive")
    if any(a > b for a, b in zip(profile, profile[1:])):
        raise ValueError("degree profile must be nondecreasing")

    by_degree: dict[int, list[Poly]] = {}
    for degree in sorted(set(profile)):
        count = profile.count(degree)
        if degree == 1:
            by_degree[degree] = _linear_moduli(p, count, rng)
        else:
            by_degree[degree] = _higher_degree_moduli(p, degree, count, rng)
    return tuple(by_degree[d].pop(0) for d in profile)
