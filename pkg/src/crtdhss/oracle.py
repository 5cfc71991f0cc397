"""Brute-force security auditor for desk-scale parameter sets.

Everything here answers one question exactly, by exhaustion: given an
unauthorized coalition's view of a transcript, how many dealer choices
remain consistent with it, and how are they distributed over candidate
secrets? Two complementary enumerations are implemented:

- `enumerate_consistent` walks the dealer's randomness (secret, blinding
  polynomials, random share vectors) and keeps the states that reproduce
  the observed view, yielding a histogram over secrets.
- `count_consistent_tuples` / `count_secret_preimages` walk candidate
  master-polynomial tuples directly, parameterized by their free
  coefficients, verifying the coalition's algebraic constraints on each.

The two viewpoints cross-validate each other; both are exact counts, never
samples. A state budget guards every enumeration up front.

View modes:

- "coalition": a dealer state must reproduce the coalition's own shares
  and the bulletin entries published for coalition members.
- "full": additionally every remaining bulletin entry must match, which
  drags the hash function's preimage structure into the count. This is
  decidable only under the table hash backend, where all p inputs per
  coefficient can be enumerated.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import BudgetExceededError, NoCrtSolutionError
from .fieldpoly import Poly, crt_combine
from .hashing import HashFamily, family_from_params
from .params import AccessStructure, PublicParams, is_authorized
from .scheme import Bulletin, deal

MODE_COALITION = "coalition"
MODE_FULL = "full"

_MODES = (MODE_COALITION, MODE_FULL)


@dataclass(frozen=True)
class EnumerationBudget:
    """Hard cap on enumerated states, enforced before any work starts."""

    max_states: int = 10_000_000

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("budget must allow at least one state")

    def check(self, state_count: int) -> None:
        if state_count > self.max_states:
            raise BudgetExceededError(state_count, self.max_states)


DEFAULT_BUDGET = EnumerationBudget()


@dataclass(frozen=True)
class CoalitionView:
    """What an unauthorized coalition sees: its shares plus the bulletin."""

    structure: AccessStructure
    params: PublicParams
    family: HashFamily
    coalition: frozenset[int]
    shares: Mapping[int, tuple[int, ...]]
    bulletin: Bulletin
    mode: str = MODE_COALITION

    def __post_init__(self):
        object.__setattr__(self, "coalition", frozenset(self.coalition))
        object.__setattr__(
            self, "shares", {i: tuple(v) for i, v in dict(self.shares).items()}
        )
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        if self.mode == MODE_FULL and self.family.backend != "table":
            raise ValueError(
                "the full-view mode needs the table hash backend: preimage "
                "existence is not decidable against a cryptographic hash"
            )
        if is_authorized(self.structure, self.coalition):
            raise ValueError("the coalition is authorized; nothing to audit")
        if set(self.shares) != set(self.coalition):
            raise ValueError("exactly the coalition members' shares are required")
        degrees = self.params.degrees
        for i, vector in self.shares.items():
            if len(vector) != degrees[i - 1]:
                raise ValueError(f"share of participant {i} has the wrong length")
        if self.family.p != self.params.p or self.family.num_levels != self.structure.m:
            raise ValueError("hash family does not fit the parameters")


def observe_coalition(
    structure: AccessStructure,
    params: PublicParams,
    coalition,
    mode: str = MODE_COALITION,
    rng: Optional[random.Random] = None,
    secret: Optional[Sequence[int]] = None,
) -> tuple[CoalitionView, tuple[int, ...]]:
    """Deal a transcript and record the coalition's view of it.

    Returns the view together with the secret that was dealt, so audits can
    compare the histogram against the ground truth.
    """
    rng = rng if rng is not None else random.Random(0)
    family = family_from_params(params, structure.m)
    vector = (
        tuple(secret)
        if secret is not None
        else tuple(rng.randrange(params.p) for _ in range(params.d0))
    )
    shares, bulletin = deal(structure, params, family, vector, rng)
    view = CoalitionView(
        structure=structure,
        params=params,
        family=family,
        coalition=frozenset(coalition),
        shares={i: shares[i - 1].coeffs for i in coalition},
        bulletin=bulletin,
        mode=mode,
    )
    return view, vector


def preimage_exponent(structure: AccessStructure, params: PublicParams, coalition) -> int:
    """Exponent e with exactly p**e consistent master tuples per secret.

    Sums, over levels, the free degrees left in each master polynomial once
    the coalition's congruences and the shared secret slot are pinned.
    Nonnegative for every unauthorized coalition under valid parameters.
    """
    members = frozenset(coalition)
    if is_authorized(structure, members):
        raise ValueError("the coalition is authorized; the count is not defined")
    degrees = params.degrees
    total = 0
    for bound, t in zip(structure.prefix_counts, structure.thresholds):
        inside = sum(degrees[i - 1] for i in members if i <= bound)
        total += sum(degrees[:t]) - inside - params.d0
    return total


# ---------------------------------------------------------------------------
# Dealer-randomness enumeration
# ---------------------------------------------------------------------------


def _state_layout(view: CoalitionView):
    """Digit layout of one dealer state: secret, blindings, random vectors."""
    structure, params = view.structure, view.params
    degrees = params.degrees
    m = structure.m
    n_random = structure.prefix_counts[m - 2] if m > 1 else 0
    alpha_lens = [sum(degrees[:t]) - params.d0 for t in structure.thresholds]
    total_digits = params.d0 + sum(alpha_lens) + sum(degrees[:n_random])
    return alpha_lens, n_random, total_digits


def state_count(view: CoalitionView) -> int:
    """Number of dealer-randomness states behind one transcript."""
    _, _, total_digits = _state_layout(view)
    return view.params.p**total_digits


def _mask_targets(view: CoalitionView) -> list[tuple[int, int]]:
    if view.mode == MODE_FULL:
        return sorted(view.bulletin.entries)
    return sorted(k for k in view.bulletin.entries if k[1] in view.coalition)


def _count_range(view: CoalitionView, start: int, stop: int) -> dict[tuple[int, ...], int]:
    """Histogram of consistent dealer states with flat index in [start, stop)."""
    structure, params, family = view.structure, view.params, view.family
    p = params.p
    d0 = params.d0
    degrees = params.degrees
    moduli = params.moduli
    m = structure.m
    alpha_lens, n_random, total_digits = _state_layout(view)

    coalition_random = sorted(i for i in view.coalition if i <= n_random)
    coalition_bottom = sorted(i for i in view.coalition if i > n_random)
    observed_random = {i: view.shares[i] for i in coalition_random}
    observed_bottom = {
        i: Poly(p, view.shares[i]) % moduli[i - 1] for i in coalition_bottom
    }
    mask_targets = _mask_targets(view)
    observed_masks = {key: view.bulletin.entries[key] for key in mask_targets}

    # digit offsets: secret | alpha_1..alpha_m | c_1..c_{n_random}
    alpha_offsets = []
    pos = d0
    for length in alpha_lens:
        alpha_offsets.append((pos, length))
        pos += length
    c_offsets = {}
    for i in range(1, n_random + 1):
        c_offsets[i] = (pos, degrees[i - 1])
        pos += degrees[i - 1]
    assert pos == total_digits

    histogram: dict[tuple[int, ...], int] = {}
    digits = [0] * total_digits
    for index in range(start, stop):
        v = index
        for j in range(total_digits):
            digits[j] = v % p
            v //= p
        secret = tuple(digits[:d0])

        consistent = True
        for i in coalition_random:
            off, length = c_offsets[i]
            if tuple(digits[off : off + length]) != observed_random[i]:
                consistent = False
                break
        if not consistent:
            continue

        masters: dict[int, Poly] = {}

        def master(level: int) -> Poly:
            f = masters.get(level)
            if f is None:
                off, length = alpha_offsets[level - 1]
                f = Poly(p, digits[:d0] + digits[off : off + length])
                masters[level] = f
            return f

        for i in coalition_bottom:
            if master(m) % moduli[i - 1] != observed_bottom[i]:
                consistent = False
                break
        if not consistent:
            continue

        for level, i in mask_targets:
            off, length = c_offsets[i]
            masked = family.hash_poly(level, tuple(digits[off : off + length]))
            if (master(level) - masked) % moduli[i - 1] != observed_masks[(level, i)]:
                consistent = False
                break
        if not consistent:
            continue

        histogram[secret] = histogram.get(secret, 0) + 1
    return histogram


def _all_secrets(p: int, d0: int):
    total = p**d0
    for index in range(total):
        v = index
        coeffs = []
        for _ in range(d0):
            coeffs.append(v % p)
            v //= p
        yield tuple(coeffs)


def enumerate_consistent(
    view: CoalitionView,
    budget: EnumerationBudget = DEFAULT_BUDGET,
    workers: int = 1,
) -> dict[tuple[int, ...], int]:
    """Exact histogram over secrets of dealer states matching the view.

    The enumeration space is every (secret, blinding, random-vector) choice
    the dealer could have made; a state counts when it reproduces the
    coalition's shares and the masks selected by the view mode. Partitioned
    index ranges merge to the identical histogram, so `workers > 1` only
    changes wall time.
    """
    total = state_count(view)
    budget.check(total)
    if workers <= 1:
        histogram = _count_range(view, 0, total)
    else:
        chunk = -(-total // workers)
        spans = [
            (view, lo, min(lo + chunk, total)) for lo in range(0, total, chunk)
        ]
        histogram = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for partial in pool.map(_count_range, *zip(*spans)):
                for secret, count in partial.items():
                    histogram[secret] = histogram.get(secret, 0) + count
    p, d0 = view.params.p, view.params.d0
    return {secret: histogram.get(secret, 0) for secret in _all_secrets(p, d0)}


# ---------------------------------------------------------------------------
# Master-tuple enumeration (free-coefficient parameterization)
# ---------------------------------------------------------------------------


def _coalition_residues(view: CoalitionView) -> dict[tuple[int, int], Poly]:
    """The residue of each master polynomial pinned by a coalition member."""
    structure, params, family = view.structure, view.params, view.family
    p = params.p
    m = structure.m
    prefix = structure.prefix_counts
    n_random = prefix[m - 2] if m > 1 else 0
    residues = {}
    for i in sorted(view.coalition):
        share = view.shares[i]
        for level in range(structure.level_of(i), m + 1):
            if level == m and i > n_random:
                value = Poly(p, share)
            else:
                value = family.hash_poly(level, share) + view.bulletin.entry(level, i)
            residues[(level, i)] = value % params.moduli[i - 1]
    return residues


def _scan_fiber(view: CoalitionView, secret: tuple[int, ...], seen: set) -> int:
    """Count consistent master tuples whose bottom poly opens to `secret`.

    Tuples are generated from the free coefficients left by the coalition's
    congruences, then re-verified against every constraint before counting;
    the parameterization proposes, the conditions dispose.
    """
    structure, params = view.structure, view.params
    p = params.p
    d0 = params.d0
    degrees = params.degrees
    m = structure.m
    x_d0 = params.secret_modulus
    residues = _coalition_residues(view)
    s_poly = Poly(p, secret)

    bases, steps, free_lens, bounds = [], [], [], []
    for bound, t in zip(structure.prefix_counts, structure.thresholds):
        members = [i for i in sorted(view.coalition) if i <= bound]
        level = len(bases) + 1
        mods = [x_d0] + [params.moduli[i - 1] for i in members]
        res = [s_poly] + [residues[(level, i)] for i in members]
        step = Poly.one(p)
        for mod in mods:
            step = step * mod
        degree_cap = sum(degrees[:t])
        bases.append(crt_combine(res, mods))
        steps.append(step)
        # A negative free length leaves k = 0 as the only candidate; the
        # degree-cap check below rejects it when the base does not fit.
        free_lens.append(max(0, degree_cap - step.degree))
        bounds.append(degree_cap)

    total_free = sum(free_lens)
    count = 0
    for index in range(p**total_free):
        v = index
        digits = []
        for _ in range(total_free):
            digits.append(v % p)
            v //= p
        tuple_polys = []
        pos = 0
        for base, step, length in zip(bases, steps, free_lens):
            k = Poly(p, digits[pos : pos + length])
            pos += length
            tuple_polys.append(base + k * step)

        ok = all(g.degree < cap for g, cap in zip(tuple_polys, bounds))
        if ok:
            opened = tuple_polys[m - 1] % x_d0
            ok = all(g % x_d0 == opened for g in tuple_polys) and opened == s_poly % x_d0
        if ok:
            for (level, i), res in residues.items():
                if tuple_polys[level - 1] % params.moduli[i - 1] != res:
                    ok = False
                    break
        if ok:
            key = tuple(g.coeffs for g in tuple_polys)
            if key in seen:
                raise AssertionError("free-coefficient parameterization collided")
            seen.add(key)
            count += 1
    return count


def _checked_view(
    structure: AccessStructure,
    params: PublicParams,
    coalition,
    view: Optional[CoalitionView],
) -> CoalitionView:
    if view is None:
        view, _ = observe_coalition(structure, params, coalition)
        return view
    if (
        view.structure != structure
        or view.params != params
        or view.coalition != frozenset(coalition)
    ):
        raise ValueError("view does not belong to this structure/params/coalition")
    return view


def count_secret_preimages(
    structure: AccessStructure,
    params: PublicParams,
    coalition,
    secret: Sequence[int],
    budget: EnumerationBudget = DEFAULT_BUDGET,
    view: Optional[CoalitionView] = None,
) -> int:
    """Exact number of consistent master tuples opening to one secret.

    Counts over a concrete observed view (a freshly dealt one by default;
    the count itself is view-independent).
    """
    view = _checked_view(structure, params, coalition, view)
    exponent = preimage_exponent(structure, params, coalition)
    budget.check(params.p**exponent)
    vector = tuple(secret)
    if len(vector) != params.d0:
        raise ValueError(f"secret must have exactly {params.d0} coefficients")
    return _scan_fiber(view, vector, set())


def count_consistent_tuples(
    structure: AccessStructure,
    params: PublicParams,
    coalition,
    budget: EnumerationBudget = DEFAULT_BUDGET,
    view: Optional[CoalitionView] = None,
) -> int:
    """Exact number of master tuples consistent with the coalition's data."""
    view = _checked_view(structure, params, coalition, view)
    exponent = preimage_exponent(structure, params, coalition)
    budget.check(params.p ** (exponent + params.d0))
    seen: set = set()
    total = 0
    for secret in _all_secrets(params.p, params.d0):
        total += _scan_fiber(view, secret, seen)
    return total


# ---------------------------------------------------------------------------
# Entropy
# ---------------------------------------------------------------------------


def histogram_entropy_bits(histogram: Mapping[tuple[int, ...], int]) -> float:
    """Shannon entropy of a count histogram, in bits."""
    counts = [c for c in histogram.values() if c]
    if not counts:
        raise ValueError("histogram is empty")
    if len(set(counts)) == 1:
        return math.log2(len(counts))
    total = sum(counts)
    return math.log2(total) - sum(c * math.log2(c) for c in counts) / total


def loss_entropy(
    view: CoalitionView,
    budget: EnumerationBudget = DEFAULT_BUDGET,
    workers: int = 1,
) -> float:
    """Bits the view leaks about the secret: H(S) minus histogram entropy.

    Exactly 0.0 in "coalition" mode; nonnegative (up to float rounding) and
    merely *reported* in "full" mode, where the hash table's collision
    structure decides how much the published masks give away.
    """
    histogram = enumerate_consistent(view, budget, workers=workers)
    p, d0 = view.params.p, view.params.d0
    return math.log2(p**d0) - histogram_entropy_bits(histogram)


# ---------------------------------------------------------------------------
# Exhaustive CRT (test oracle for the reconstruction path)
# ---------------------------------------------------------------------------


def crt_bruteforce(
    residues: Sequence[Poly],
    moduli: Sequence[Poly],
    max_states: int = DEFAULT_BUDGET.max_states,
) -> Poly:
    """Solve a congruence system by trying every candidate polynomial.

    Scans all p**(sum of modulus degrees) polynomials below the product
    degree and demands exactly one solution, making it an independent check
    of CRT reconstruction. No coprimality is assumed: inconsistent systems
    over non-coprime moduli are reported as having no solution.
    """
    if len(residues) != len(moduli) or not moduli:
        raise ValueError("need equally many residues and moduli, at least one")
    p = moduli[0].p
    for m in moduli:
        if m.degree < 1:
            raise ValueError("every modulus must have degree at least 1")
        if m.p != p:
            raise ValueError("moduli live in different fields")
    total_degree = sum(m.degree for m in moduli)
    states = p**total_degree
    if states > max_states:
        raise BudgetExceededError(states, max_states)

    reduced = [r % m for r, m in zip(residues, moduli)]
    matches = []
    for index in range(states):
        v = index
        coeffs = []
        for _ in range(total_degree):
            coeffs.append(v % p)
            v //= p
        candidate = Poly(p, coeffs)
        if all(candidate % m == r for r, m in zip(reduced, moduli)):
            matches.append(candidate)
            if len(matches) > 1:
                raise ValueError(
                    "congruence system has multiple low-degree solutions; "
                    "the moduli are not coprime"
                )
    if not matches:
        raise NoCrtSolutionError("no polynomial satisfies every congruence")
    return matches[0]
