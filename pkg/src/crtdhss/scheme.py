"""Dealing and reconstruction for the hierarchical CRT scheme.

The dealer fixes one master polynomial f_l per level, all congruent to the
secret modulo x**d0. Participants above the bottom level hold uniformly
random vectors; bottom-level participants hold residues of f_m. Published
masks let a share act as a residue of f_l after hash-unmasking, so any
coalition meeting some level's threshold can CRT-reconstruct f_l and read
the secret off its low-order coefficients.

Secrets and shares are fixed-length coefficient vectors, not normalized
polynomials: the coefficient-wise hash must cover trailing zeros too.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    InconsistentSharesError,
    InvalidParametersError,
    MissingBulletinEntryError,
    UnauthorizedSubsetError,
)
from .fieldpoly import Poly, crt_combine
from .hashing import HashFamily
from .params import AccessStructure, PublicParams, min_authorized_level, validate_params


@dataclass(frozen=True)
class Share:
    """One participant's private coefficient vector of length d_i."""

    participant: int
    level: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def poly(self, p: int) -> Poly:
        return Poly(p, self.coeffs)


@dataclass(frozen=True)
class Bulletin:
    """Published masks indexed by (level, participant)."""

    entries: Mapping[tuple[int, int], Poly]

    def entry(self, level: int, participant: int) -> Poly:
        try:
            return self.entries[(level, participant)]
        except KeyError:
            raise MissingBulletinEntryError((level, participant)) from None

    def __contains__(self, key: tuple[int, int]) -> bool:
        return key in self.entries


@dataclass(frozen=True)
class MasterPolys:
    """Dealer-internal master polynomials f_1..f_m. Never published."""

    polys: tuple[Poly, ...]


def _check_setup(structure: AccessStructure, params: PublicParams, family: HashFamily) -> None:
    report = validate_params(structure, params)
    if not report.ok:
        raise InvalidParametersError(report.violations)
    if family.p != params.p:
        raise ValueError("hash family and parameters disagree on the field")
    if family.num_levels != structure.m:
        raise ValueError("hash family must provide one function per level")
    if family.backend != params.hash_backend or family.table_seed != params.table_seed:
        raise ValueError("hash family does not match the published hash configuration")


def _check_secret(params: PublicParams, secret: Sequence[int]) -> tuple[int, ...]:
    vector = tuple(secret)
    if len(vector) != params.d0:
        raise ValueError(f"secret must have exactly {params.d0} coefficients")
    if any(not 0 <= c < params.p for c in vector):
        raise ValueError("secret coefficients must be field elements")
    return vector


def _draw_vector(rng: random.Random, p: int, length: int) -> tuple[int, ...]:
    return tuple(rng.randrange(p) for _ in range(length))


def _master_polys(
    structure: AccessStructure,
    params: PublicParams,
    secret: tuple[int, ...],
    rng: random.Random,
) -> MasterPolys:
    # Draw order: alpha_1..alpha_m, then the random share vectors (caller).
    degrees = params.degrees
    s_poly = Poly(params.p, secret)
    polys = []
    for t in structure.thresholds:
        alpha_len = sum(degrees[:t]) - params.d0
        alpha = Poly(params.p, _draw_vector(rng, params.p, alpha_len))
        f = s_poly + alpha.shift(params.d0)
        assert f % params.secret_modulus == s_poly % params.secret_modulus
        polys.append(f)
    return MasterPolys(tuple(polys))


def deal_with_internals(
    structure: AccessStructure,
    params: PublicParams,
    family: HashFamily,
    secret: Sequence[int],
    rng: random.Random,
) -> tuple[tuple[Share, ...], Bulletin, MasterPolys]:
    """Deal and also return the dealer's master polynomials (for audits/tests)."""
    _check_setup(structure, params, family)
    vector = _check_secret(params, secret)
    masters = _master_polys(structure, params, vector, rng)

    m = structure.m
    degrees = params.degrees
    prefix = structure.prefix_counts
    n_random = prefix[m - 2] if m > 1 else 0  # N_{m-1}
    last_start = n_random + 1

    shares = []
    for i in range(1, structure.n + 1):
        level = structure.level_of(i)
        if i < last_start:
            coeffs = _draw_vector(rng, params.p, degrees[i - 1])
        else:
            coeffs = (masters.polys[m - 1] % params.moduli[i - 1]).padded(degrees[i - 1])
        shares.append(Share(i, level, coeffs))

    entries: dict[tuple[int, int], Poly] = {}
    for level in range(1, m):
        f = masters.polys[level - 1]
        for i in range(1, prefix[level - 1] + 1):
            masked = family.hash_poly(level, shares[i - 1].coeffs)
            entries[(level, i)] = (f - masked) % params.moduli[i - 1]
    f_last = masters.polys[m - 1]
    for i in range(1, n_random + 1):
        masked = family.hash_poly(m, shares[i - 1].coeffs)
        entries[(m, i)] = (f_last - masked) % params.moduli[i - 1]

    return tuple(shares), Bulletin(entries), masters


def deal(
    structure: AccessStructure,
    params: PublicParams,
    family: HashFamily,
    secret: Sequence[int],
    rng: random.Random,
) -> tuple[tuple[Share, ...], Bulletin]:
    """Produce all n shares and the public bulletin for the given secret."""
    shares, bulletin, _ = deal_with_internals(structure, params, family, secret, rng)
    return shares, bulletin


def unmask_share(family: HashFamily, bulletin: Bulletin, share: Share, use_level: int) -> Poly:
    """The residue of f_use_level modulo this participant's modulus.

    Masked shares are unmasked by adding the published entry to the hashed
    share vector; a bottom-level share used at the bottom level is already
    the residue itself.
    """
    key = (use_level, share.participant)
    if key in bulletin:
        return family.hash_poly(use_level, share.coeffs) + bulletin.entry(*key)
    if share.level == use_level:
        return Poly(family.p, share.coeffs)
    raise MissingBulletinEntryError(key)


def reconstruct(
    structure: AccessStructure,
    params: PublicParams,
    family: HashFamily,
    bulletin: Bulletin,
    shares: Iterable[Share],
) -> tuple[int, ...]:
    """Recover the secret vector from an authorized coalition's shares.

    Uses the smallest authorized level and every coalition member within its
    prefix; the surplus congruences beyond the threshold double as a
    consistency check on the pooled shares.
    """
    _check_setup(structure, params, family)
    by_owner: dict[int, Share] = {}
    for share in shares:
        existing = by_owner.get(share.participant)
        if existing is not None and existing != share:
            raise InconsistentSharesError(
                f"conflicting shares supplied for participant {share.participant}"
            )
        by_owner[share.participant] = share

    degrees = params.degrees
    for i, share in by_owner.items():
        if not 1 <= i <= structure.n:
            raise ValueError(f"participant index {i} out of range 1..{structure.n}")
        if share.level != structure.level_of(i):
            raise ValueError(f"share of participant {i} carries the wrong level")
        if len(share.coeffs) != degrees[i - 1]:
            raise ValueError(f"share of participant {i} has the wrong length")
        if any(not 0 <= c < params.p for c in share.coeffs):
            raise ValueError(f"share of participant {i} is not over F_{params.p}")

    level = min_authorized_level(structure, by_owner.keys())
    if level is None:
        raise UnauthorizedSubsetError("these participants do not meet any threshold")

    bound = structure.prefix_counts[level - 1]
    members = sorted(i for i in by_owner if i <= bound)
    residues = [
        unmask_share(family, bulletin, by_owner[i], level) % params.moduli[i - 1]
        for i in members
    ]
    f = crt_combine(residues, [params.moduli[i - 1] for i in members])

    t = structure.thresholds[level - 1]
    if f.degree >= sum(degrees[:t]):
        raise InconsistentSharesError(
            "reconstructed polynomial exceeds its degree bound; shares are "
            "tampered or mismatched"
        )
    return (f % params.secret_modulus).padded(params.d0)
