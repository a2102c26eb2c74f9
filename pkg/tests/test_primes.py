import random
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp, mpf

from cancelsum import (DomainError, LambdaSieve, PrecisionContext,
                       ResourceError, build_sieve, coefficients_value,
                       interval_union_measure, lambda_coefficients,
                       load_sieve, psi, psi_interval_half,
                       psi_weak_pentagonal, save_sieve, threshold_psi)


@pytest.fixture(scope="module")
def sieve100k():
    return build_sieve(100_000)


@pytest.fixture(scope="module")
def sieve1m():
    return build_sieve(1_000_000)


def bool_prime_sieve(limit: int) -> np.ndarray:
    """Independent oracle sieve (numpy boolean array)."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


# ---------------------------------------------------------------------------
# sieve structure


def test_prime_powers_to_ten():
    sieve = build_sieve(10)
    assert [pp for pp, _ in sieve.entries] == [2, 3, 4, 5, 7, 8, 9]
    assert sieve.lambda_at(4) == (2, 2)
    assert sieve.lambda_at(9) == (3, 2)
    assert sieve.lambda_at(6) is None
    assert sieve.lambda_at(1) is None


def test_sieve_against_independent_oracle():
    limit = 3000
    flags = bool_prime_sieve(limit)
    oracle = []
    for p in range(2, limit + 1):
        if flags[p]:
            pp = p
            while pp <= limit:
                oracle.append((pp, p))
                pp *= p
    oracle.sort()
    assert build_sieve(limit).entries == oracle


def test_prime_count_million(sieve1m):
    assert sieve1m.prime_count() == 78498
    assert int(bool_prime_sieve(1_000_000).sum()) == 78498


def test_sieve_limit_validation():
    with pytest.raises(DomainError):
        build_sieve(1)
    with pytest.raises(ResourceError):
        build_sieve(200_000_000)


# ---------------------------------------------------------------------------
# Chebyshev psi


def test_psi_at_ten(sieve600, ctx192):
    with ctx192.workprec():
        want = 3 * mp.log(2) + 2 * mp.log(3) + mp.log(5) + mp.log(7)
        got = psi(10, sieve600, ctx192)
        assert abs(got - want) < mpf(2) ** -180
        assert abs(got - mpf("7.8320")) < mpf("1e-4")


def test_psi_below_two(sieve600, ctx192):
    assert psi(1, sieve600, ctx192) == 0
    assert psi(Fraction(3, 2), sieve600, ctx192) == 0


def test_psi_steps_follow_von_mangoldt(sieve600, ctx192):
    with ctx192.workprec():
        prev = mpf(0)
        for n in range(2, 61):
            cur = psi(n, sieve600, ctx192)
            gap = cur - prev
            hit = sieve600.lambda_at(n)
            if hit is None:
                assert gap == 0
            else:
                assert abs(gap - mp.log(hit[0])) < mpf(2) ** -180
            prev = cur


def test_psi_million_ratio(sieve1m, ctx128):
    ratio = psi(1_000_000, sieve1m, ctx128) / 1_000_000
    assert 0.9 < float(ratio) < 1.1


def test_psi_beyond_limit(sieve600, ctx128):
    with pytest.raises(DomainError):
        psi(601, sieve600, ctx128)


# ---------------------------------------------------------------------------
# alternating psi sums


def test_weak_sum_single_term(sieve600, ctx192):
    # x*T = 1 keeps only l = 0, so the sum is psi(e^sqrt(40)) itself
    rep = psi_weak_pentagonal(40, Fraction(1, 40), sieve600, ctx192)
    assert rep.term_count == 1
    full = threshold_psi(40, Fraction(1, 40), 0, sieve600, ctx192)
    with ctx192.workprec():
        # coefficient path and prefix path accumulate logs in different
        # orders, so agreement is to accumulation tolerance only
        assert abs(rep.value.real - full) <= full * mpf(2) ** -(192 - 16)
    # e^sqrt(40) = 557.83, and 557 is the last prime power below it
    assert psi(557, sieve600, ctx192) == full


def test_weak_sum_anchor_40_3000(sieve600, ctx192):
    rep = psi_weak_pentagonal(40, 3000, sieve600, ctx192)
    assert rep.term_count == 693
    assert abs(rep.value.real - mpf("40.7685498")) < mpf("1e-6")


def test_weak_sum_requires_nonempty_range(sieve600, ctx192):
    with pytest.raises(DomainError):
        psi_weak_pentagonal(40, Fraction(1, 41), sieve600, ctx192)


def test_weak_sum_requires_sieve_coverage(sieve600, ctx192):
    with pytest.raises(DomainError):
        psi_weak_pentagonal(45, 3000, sieve600, ctx192)


def test_unknown_method_rejected(sieve600, ctx192):
    with pytest.raises(DomainError):
        lambda_coefficients(40, 3000, sieve600, ctx192, method="nope")


def test_bucket_equals_direct_seeded(sieve100k, ctx128):
    # identical predicate, independent aggregation: exact same coefficient
    # dict and bit-identical value on random instances with e^sqrt(x) <= 1e5
    rng = random.Random(31337)
    for _ in range(20):
        x = Fraction(rng.randint(20, 1300), 10)  # x in [2, 130]
        if float(x) < 2:
            x += 2
        choice = rng.random()
        if choice < 0.3:
            T = Fraction(1, rng.randint(1, max(1, int(x))))
        elif choice < 0.6:
            T = rng.randint(1, 5000)
        else:
            T = Fraction(rng.randint(1, 40000), rng.randint(1, 7))
        if x * T < 1:
            T = Fraction(2, 1) / x
        bucket = lambda_coefficients(x, T, sieve100k, ctx128, method="bucket")
        direct = lambda_coefficients(x, T, sieve100k, ctx128, method="direct")
        assert bucket == direct
        vb = coefficients_value(bucket, ctx128)
        vd = coefficients_value(direct, ctx128)
        assert vb == vd


def test_coefficients_are_bounded_counts(sieve600, ctx192):
    # each prime's coefficient is a signed count of sub-cutoffs, bounded
    # by the number of admissible powers times the index count
    coeff = lambda_coefficients(40, 3000, sieve600, ctx192)
    L = 346
    for p, c in coeff.items():
        assert isinstance(c, int)
        assert abs(c) <= 2 * L + 1


# ---------------------------------------------------------------------------
# interval-union halving


def test_interval_half_anchor(sieve600, ctx192):
    rep = psi_interval_half(40, 3000, sieve600, ctx192)
    assert rep.ell_max == 346
    assert rep.boundary == 0  # even L
    assert abs(rep.psi_full - mpf("549.369561059901")) < mpf("1e-11")
    assert abs(rep.rel_err - mpf("0.0371048")) < mpf("1e-6")
    # Theorem-scale bound: |lhs - rhs| <= 25 + boundary absolute, i.e.
    # rel_err <= 50/psi_full at this x
    assert rep.rel_err <= 50 / rep.psi_full


def test_interval_half_bridge_even_L(sieve600, ctx192):
    # lhs - rhs = -S/2 - boundary ties the union sum to the alternating sum
    rep = psi_interval_half(40, 3000, sieve600, ctx192)
    weak = psi_weak_pentagonal(40, 3000, sieve600, ctx192)
    with ctx192.workprec():
        lhs_minus_rhs = rep.lhs - rep.rhs
        bridge = -weak.value.real / 2 - rep.boundary
        assert abs(lhs_minus_rhs - bridge) <= rep.psi_full * mpf(2) ** -(192 - 16)


def test_interval_half_bridge_odd_L(sieve600, ctx192):
    # x*T = 400 gives L = 19 (odd) with final threshold 3.9, so the
    # boundary term psi(e^sqrt(3.9)) is live
    rep = psi_interval_half(40, 10, sieve600, ctx192)
    assert rep.ell_max == 19
    assert rep.boundary > 0
    weak = psi_weak_pentagonal(40, 10, sieve600, ctx192)
    with ctx192.workprec():
        bridge = -weak.value.real / 2 - rep.boundary
        assert abs((rep.lhs - rep.rhs) - bridge) <= rep.psi_full * mpf(2) ** -(192 - 16)
        assert rep.boundary == threshold_psi(40, 10, 19, sieve600, ctx192)


def test_interval_half_telescoping_complement(sieve600, ctx192):
    # union intervals plus their complement telescope to
    # psi(thr_1) - psi(thr_L) for even L
    x, T = 40, 3000
    rep = psi_interval_half(x, T, sieve600, ctx192)
    L = rep.ell_max
    with ctx192.workprec():
        complement = mpf(0)
        for l in range(1, (L - 1) // 2 + 1):
            complement += (threshold_psi(x, T, 2 * l, sieve600, ctx192) -
                           threshold_psi(x, T, 2 * l + 1, sieve600, ctx192))
        total = rep.lhs + complement
        want = (threshold_psi(x, T, 1, sieve600, ctx192) -
                threshold_psi(x, T, L, sieve600, ctx192))
        assert abs(total - want) <= rep.psi_full * mpf(2) ** -(192 - 16)


def test_threshold_psi_validation(sieve600, ctx192):
    with pytest.raises(DomainError):
        threshold_psi(40, 3000, 347, sieve600, ctx192)
    with pytest.raises(DomainError):
        threshold_psi(40, 3000, -1, sieve600, ctx192)


def test_interval_union_measure(ctx192):
    val = interval_union_measure(40, 3000, ctx192)
    assert 0.4 < float(val) < 0.6


def test_interval_half_json(sieve600, ctx192):
    d = psi_interval_half(40, 3000, sieve600, ctx192).to_json_dict()
    assert set(d) == {"lhs", "rhs", "rel_err", "boundary", "ell_max",
                      "psi_full", "bits"}
    float(d["lhs"])
    assert d["ell_max"] == 346
    assert d["bits"] == 192


# ---------------------------------------------------------------------------
# cache files


def test_lsiv_roundtrip(tmp_path, sieve600):
    path = str(tmp_path / "s.lsiv")
    save_sieve(sieve600, path)
    loaded = load_sieve(path)
    assert loaded.limit == sieve600.limit
    assert loaded.entries == sieve600.entries


def test_lsiv_bad_magic(tmp_path):
    path = str(tmp_path / "bad.lsiv")
    with open(path, "wb") as fh:
        fh.write(b"XXXX" + b"\x00" * 12)
    with pytest.raises(DomainError):
        load_sieve(path)


def test_lsiv_truncated(tmp_path, sieve600):
    path = str(tmp_path / "t.lsiv")
    save_sieve(sieve600, path)
    blob = open(path, "rb").read()
    with open(path, "wb") as fh:
        fh.write(blob[:-7])
    with pytest.raises(DomainError):
        load_sieve(path)
