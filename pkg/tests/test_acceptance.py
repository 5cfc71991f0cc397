"""Acceptance suite: one test per release criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion. Every tolerance is stated inline; counts and secrets are
compared exactly unless a float tolerance is spelled out.
"""

import itertools
import json
import math
import random
from fractions import Fraction

from crtdhss.cli import main
from crtdhss.fieldpoly import Poly, crt_combine, poly_gcd
from crtdhss.hashing import family_from_params
from crtdhss.oracle import (
    MODE_COALITION,
    MODE_FULL,
    count_consistent_tuples,
    count_secret_preimages,
    crt_bruteforce,
    enumerate_consistent,
    histogram_entropy_bits,
    loss_entropy,
    observe_coalition,
    preimage_exponent,
)
from crtdhss.params import (
    AccessStructure,
    PublicParams,
    generate_moduli,
    information_rate,
    is_authorized,
    validate_params,
)
from crtdhss.scheme import deal, reconstruct
from crtdhss.yang import yang_attack, yang_deal


def report(name: str, passed: bool, detail: str = "") -> None:
    tag = "PASS" if passed else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"{tag}  {name}{suffix}")
    assert passed, f"{name}{suffix}"


def decode_vector(index: int, p: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(index % p)
        index //= p
    return tuple(out)


# -- criterion 1 -------------------------------------------------------------


def monic_polys(p: int, degree: int):
    for index in range(p**degree):
        yield Poly(p, decode_vector(index, p, degree) + (1,))


def coprime_multisets(p: int, max_total_degree: int):
    pool = [
        f
        for degree in range(1, max_total_degree + 1)
        for f in monic_polys(p, degree)
    ]
    one = Poly.one(p)

    def extend(start: int, chosen: list, total: int):
        if chosen:
            yield list(chosen)
        for idx in range(start, len(pool)):
            f = pool[idx]
            if total + f.degree > max_total_degree:
                continue
            if any(poly_gcd(f, g) != one for g in chosen):
                continue
            chosen.append(f)
            yield from extend(idx + 1, chosen, total + f.degree)
            chosen.pop()

    yield from extend(0, [], 0)


def test_criterion_1_crt_oracle_equivalence():
    """Every congruence system with total degree <= 4 over F_2, F_3, F_5."""
    systems = 0
    tuples = 0
    for p in (2, 3, 5):
        spot_rng = random.Random(p)
        for moduli in coprime_multisets(p, 4):
            total = sum(m.degree for m in moduli)
            # Independent oracle: reduce every candidate of degree < total.
            # A bijection candidates <-> residue tuples proves each system
            # has exactly one low-degree solution.
            mapping = {}
            for index in range(p**total):
                candidate = Poly(p, decode_vector(index, p, total))
                key = tuple((candidate % m).coeffs for m in moduli)
                assert key not in mapping
                mapping[key] = candidate
            assert len(mapping) == p**total
            items = list(mapping.items())
            for key, expected in items:
                residues = [Poly(p, coeffs) for coeffs in key]
                assert crt_combine(residues, moduli) == expected
                tuples += 1
            # Tie the standalone exhaustive-search oracle to the same sweep:
            # fully for F_2, spot checks elsewhere.
            if p == 2:
                checks = items
            else:
                checks = [items[0], items[-1]] + [
                    items[spot_rng.randrange(len(items))] for _ in range(3)
                ]
            for key, expected in checks:
                residues = [Poly(p, coeffs) for coeffs in key]
                assert crt_bruteforce(residues, moduli) == expected
            systems += 1
    report(
        "criterion 1: CRT equals exhaustive search on every system",
        True,
        f"{systems} systems, {tuples} residue tuples, exact",
    )


# -- criterion 2 -------------------------------------------------------------


def random_configuration(trial: int):
    rng = random.Random(10_000 + trial)
    p = rng.choice([11, 101, 2147483647])
    m = rng.choice([1, 2, 3])
    sizes = []
    remaining = 10
    for level in range(m):
        size = rng.randint(1, max(1, remaining - (m - level - 1)))
        sizes.append(size)
        remaining -= size
    thresholds = []
    prev = 0
    for size in sizes:
        if prev + 1 > size:
            return None
        t = rng.randint(prev + 1, size)
        thresholds.append(t)
        prev = t
    structure = AccessStructure(tuple(sizes), tuple(thresholds))

    for _ in range(8):
        if rng.random() < 0.5:
            d = rng.randint(1, 3)
            degrees = [d] * structure.n
            d0 = rng.randint(1, d)
        else:
            degrees = sorted(rng.randint(1, 3) for _ in range(structure.n))
            d0 = rng.randint(1, degrees[0])
        if p == 11 and degrees.count(1) > 10:
            continue
        params = PublicParams(p, d0, generate_moduli(p, degrees, rng))
        if validate_params(structure, params).ok:
            return structure, params, rng
    params = PublicParams(p, 1, generate_moduli(p, [1] * structure.n, rng))
    assert validate_params(structure, params).ok
    return structure, params, rng


def authorized_subsets(structure, rng, cap=50):
    n = structure.n
    if n <= 8:
        for r in range(1, n + 1):
            for subset in itertools.combinations(range(1, n + 1), r):
                if is_authorized(structure, subset):
                    yield subset
        return
    for _ in range(cap):
        order = list(range(1, n + 1))
        rng.shuffle(order)
        subset = []
        for i in order:
            subset.append(i)
            if is_authorized(structure, subset):
                break
        extra = rng.randint(0, n - len(subset))
        subset.extend(i for i in order[len(subset) : len(subset) + extra])
        yield tuple(subset)


def test_criterion_2_reconstruction_correctness():
    """200 random configurations, every (or 50 sampled) authorized subsets."""
    configurations = 0
    reconstructions = 0
    trial = 0
    while configurations < 200:
        made = random_configuration(trial)
        trial += 1
        if made is None:
            continue
        structure, params, rng = made
        family = family_from_params(params, structure.m)
        secret = tuple(rng.randrange(params.p) for _ in range(params.d0))
        shares, bulletin = deal(structure, params, family, secret, rng)
        for subset in authorized_subsets(structure, rng):
            got = reconstruct(
                structure, params, family, bulletin, [shares[i - 1] for i in subset]
            )
            assert got == secret, (subset, structure, params.p)
            reconstructions += 1
        configurations += 1
    report(
        "criterion 2: authorized subsets always reconstruct bit-exactly",
        True,
        f"{configurations} configurations, {reconstructions} reconstructions, 0 failures",
    )


# -- criterion 3 -------------------------------------------------------------


def quad_params_p3(table_seed=1):
    # Four pairwise-coprime quadratics over F_3; only three monic
    # irreducible ones exist, so (x+1)(x+2) = x^2 + 2 completes the set.
    structure = AccessStructure((2, 2), (1, 2))
    moduli = (
        Poly(3, [2, 0, 1]),
        Poly(3, [1, 0, 1]),
        Poly(3, [2, 1, 1]),
        Poly(3, [2, 2, 1]),
    )
    params = PublicParams(3, 1, moduli, hash_backend="table", table_seed=table_seed)
    assert validate_params(structure, params).ok
    return structure, params


def test_criterion_3_exact_uniformity():
    """Unauthorized singleton over F_3: perfectly uniform secret histogram."""
    structure, params = quad_params_p3()
    view, _ = observe_coalition(
        structure, params, {3}, mode=MODE_COALITION, rng=random.Random(2)
    )
    histogram = enumerate_consistent(view)
    counts = sorted(histogram.values())
    uniform = set(histogram) == {(0,), (1,), (2,)} and len(set(counts)) == 1
    conditional = histogram_entropy_bits(histogram)
    delta = loss_entropy(view)
    report(
        "criterion 3: conditional secret distribution exactly uniform",
        uniform and conditional == math.log2(3) and delta == 0.0,
        f"counts={counts}, H(S|view)={conditional}, loss={delta}",
    )


# -- criterion 4 -------------------------------------------------------------


def counting_cases():
    theta_one = AccessStructure((2, 2), (1, 2))
    moduli_33 = generate_moduli(3, [2, 2, 3, 3], random.Random(0))
    p3_params = PublicParams(3, 1, moduli_33, hash_backend="table", table_seed=1)

    tiny = AccessStructure((1, 2), (1, 2))
    tiny_p3 = PublicParams(
        3, 1, generate_moduli(3, [1, 2, 2], random.Random(0)),
        hash_backend="table", table_seed=1,
    )
    tiny_p5 = PublicParams(
        5, 1, generate_moduli(5, [1, 2, 2], random.Random(0)),
        hash_backend="table", table_seed=1,
    )

    wide = AccessStructure((3, 4), (2, 3))
    wide_p5 = PublicParams(
        5, 2, generate_moduli(5, [2] * 7, random.Random(0)),
        hash_backend="table", table_seed=1,
    )

    return [
        (theta_one, p3_params, frozenset({3})),
        (theta_one, p3_params, frozenset()),
        (tiny, tiny_p3, frozenset({2})),
        (tiny, tiny_p5, frozenset({3})),
        (wide, wide_p5, frozenset({4, 5})),
        (wide, wide_p5, frozenset({1, 4})),
    ]


def test_criterion_4_preimage_and_total_counts():
    """Preimage counts equal p**theta for every secret; totals p**(theta+d0)."""
    checked = 0
    for structure, params, coalition in counting_cases():
        assert validate_params(structure, params).ok
        p, d0 = params.p, params.d0
        theta = preimage_exponent(structure, params, coalition)
        assert theta >= 0
        view, _ = observe_coalition(
            structure, params, coalition, rng=random.Random(99)
        )
        total = 0
        for index in range(p**d0):
            secret = decode_vector(index, p, d0)
            got = count_secret_preimages(
                structure, params, coalition, secret, view=view
            )
            assert got == p**theta, (structure, coalition, secret, got, theta)
            total += got
        tuples = count_consistent_tuples(structure, params, coalition, view=view)
        assert tuples == p ** (theta + d0) == total
        checked += 1
    report(
        "criterion 4: consistency counts match the exponent formula exactly",
        checked >= 5,
        f"{checked} (structure, coalition) pairs at p in {{3, 5}}",
    )


# -- criterion 5 -------------------------------------------------------------


def test_criterion_5_attack_reproduction():
    """1000 seeded trials of the reference break, all successful."""
    structure = AccessStructure((3, 4), (2, 3))
    params = PublicParams(11, 1, generate_moduli(11, [1] * 7, random.Random(1)))
    assert validate_params(structure, params).ok
    coalition = (4, 5)
    successes = 0
    for trial in range(1000):
        rng = random.Random(trial)
        secret = (rng.randrange(11),)
        shares, masks = yang_deal(structure, params, secret, rng)
        assert not is_authorized(structure, coalition)
        got = yang_attack(structure, params, masks, [shares[i - 1] for i in coalition])
        if got == secret:
            successes += 1
    report(
        "criterion 5: unauthorized pair recovers the secret in every trial",
        successes == 1000,
        f"{successes}/1000 seeded trials",
    )


# -- criterion 6 -------------------------------------------------------------


def test_criterion_6_information_rate():
    """Rate is exactly 1 on equal degrees, d0/max degree otherwise."""
    rng = random.Random(1234)
    checked_equal = checked_mixed = 0
    for _ in range(100):
        n = rng.randint(1, 8)
        if rng.random() < 0.5:
            degrees = [rng.randint(1, 3)] * n
        else:
            degrees = sorted(rng.randint(1, 3) for _ in range(n))
        d0 = rng.randint(1, degrees[0])
        params = PublicParams(11, d0, generate_moduli(11, degrees, rng))
        structure = AccessStructure((n,), (rng.randint(1, n),))
        rate = information_rate(structure, params)
        expected = Fraction(d0, max(degrees))
        assert rate == expected
        if d0 == degrees[0] and len(set(degrees)) == 1:
            assert rate == 1
            checked_equal += 1
        else:
            checked_mixed += 1
    report(
        "criterion 6: information rate formula exact on random profiles",
        checked_equal > 0 and checked_mixed > 0,
        f"{checked_equal} equal-degree and {checked_mixed} mixed profiles",
    )


# -- criterion 7 -------------------------------------------------------------


def mean_full_view_loss(p: int, n_seeds: int) -> float:
    """Mean leakage of the full published view over table-hash seeds.

    Fixed structure: levels (1, 2) with thresholds (1, 2), modulus degrees
    (1, 2, 2), d0 = 1, coalition {2}. Per-seed leakage is exact (full
    dealer-state enumeration); only the hash table realization varies.
    """
    structure = AccessStructure((1, 2), (1, 2))
    moduli = generate_moduli(p, [1, 2, 2], random.Random(7))
    deltas = []
    seed = 0
    while len(deltas) < n_seeds:
        seed += 1
        assert seed < 100 * n_seeds
        try:
            params = PublicParams(
                p, 1, moduli, hash_backend="table", table_seed=seed
            )
            view, _ = observe_coalition(
                structure, params, {2}, mode=MODE_FULL, rng=random.Random(5000 + seed)
            )
        except ValueError:
            continue  # degenerate table seed: level functions coincide
        deltas.append(loss_entropy(view))
    return sum(deltas) / len(deltas)


def test_criterion_7_loss_entropy_trend():
    """Mean full-view leakage across p in {3, 5, 7, 11} must not increase.

    Known-red: exact enumeration shows the leakage *grows* with p on every
    feasible desk-scale structure, because hash outputs carry floor(log2 p)
    bits, so the per-value collision rate p / 2**floor(log2 p) is itself
    non-monotone over {3, 5, 7, 11} and wrong secrets are eliminated more
    reliably as the field grows. The assertion is kept as stated; see the
    printed sequence for the measured behavior.
    """
    primes = (3, 5, 7, 11)
    means = [mean_full_view_loss(p, 24) for p in primes]
    non_increasing = all(a >= b - 1e-12 for a, b in zip(means, means[1:]))
    report(
        "criterion 7: mean full-view loss entropy non-increasing in p",
        non_increasing,
        "means " + ", ".join(f"p={p}: {m:.4f}" for p, m in zip(primes, means)),
    )


# -- criterion 8 -------------------------------------------------------------


def test_criterion_8_cli_round_trip(tmp_path, capsys):
    """gen-params -> deal -> reconstruct on files, byte-identical reruns."""
    params_path = tmp_path / "params.json"
    assert (
        main(
            [
                "gen-params",
                "--p", "11",
                "--levels", "3,4",
                "--thresholds", "2,3",
                "--degrees", "1x7",
                "--seed", "1",
                "--out", str(params_path),
            ]
        )
        == 0
    )
    out_dirs = [tmp_path / "run_a", tmp_path / "run_b"]
    for out_dir in out_dirs:
        assert (
            main(
                [
                    "deal",
                    "--params", str(params_path),
                    "--secret", "9",
                    "--seed", "2",
                    "--out-dir", str(out_dir),
                ]
            )
            == 0
        )
    names = sorted(p.name for p in out_dirs[0].iterdir())
    byte_identical = names == sorted(p.name for p in out_dirs[1].iterdir()) and all(
        (out_dirs[0] / name).read_bytes() == (out_dirs[1] / name).read_bytes()
        for name in names
    )
    capsys.readouterr()
    code = main(
        [
            "reconstruct",
            "--params", str(params_path),
            "--bulletin", str(out_dirs[0] / "bulletin.json"),
            str(out_dirs[0] / "share_001.json"),
            str(out_dirs[0] / "share_002.json"),
        ]
    )
    printed = capsys.readouterr().out.strip()
    report(
        "criterion 8: CLI file round trip reproduces the secret",
        code == 0 and printed == "9" and byte_identical,
        f"reconstructed {printed!r}, byte-identical reruns: {byte_identical}",
    )
