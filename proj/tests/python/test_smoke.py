import math

import numpy as np
import pytest

import cfal


def test_field_basics():
    f = cfal.quadratic_field(5)
    assert f.discriminant == 5
    assert f.degree == 2
    assert abs(abs(np.linalg.det(f.embedding_matrix)) - math.sqrt(5)) < 1e-12
    conj, norm, trace = cfal.embed(f, (1, 1))
    assert norm == algebraic_norm_by_hand(f, 1, 1)
    assert trace == 3
    assert conj.shape == (2,)


def algebraic_norm_by_hand(f, u, v):
    return u * u + f.s * u * v - f.t * v * v


def test_ring_mul_is_multiplicative_on_norms():
    f = cfal.quadratic_field(3)
    a, b = cfal.RingElement(2, -1), cfal.RingElement(5, 3)
    ab = cfal.ring_mul(f, a, b)
    assert cfal.norm(f, ab) == cfal.norm(f, a) * cfal.norm(f, b)


def test_errors_carry_kind():
    with pytest.raises(cfal.CfalError) as exc:
        cfal.quadratic_field(4)
    assert exc.value.kind == "NotSquarefree"
    with pytest.raises(ValueError):
        cfal.prime_above(cfal.quadratic_field(5), 5)


def test_prime_above():
    f = cfal.quadratic_field(5)
    assert cfal.prime_above(f, 11).inertial_degree == 1
    assert cfal.prime_above(f, 2).inertial_degree == 2
    assert cfal.prime_above(f, 2).order == 4


def test_rates():
    h = np.array([[1.0, 0.3], [0.5, -1.2]])
    ch = cfal.Channel(h, 100.0)
    f = cfal.quadratic_field(5)
    eq = cfal.best_equation(f, ch)
    assert eq.rate_bits >= 0
    assert eq.rate_bits <= cfal.mac_sum_capacity(ch) + 1e-9
    again = cfal.am_rate(ch, eq.a, f)
    assert again.rate_bits == pytest.approx(eq.rate_bits)
    z = cfal.best_equation(cfal.rationals(), ch)
    assert eq.rate_bits >= z.rate_bits - 1e-12
    rate, block, a = cfal.naive_rate(ch)
    assert block in (0, 1) and len(a) == 2 and rate >= 0


def test_shortest_vector():
    b = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.5]])
    coords, norm_sq = cfal.shortest_vector(b)
    assert norm_sq == pytest.approx(1.0)
    assert list(coords) == [1, 0, 0]
    assert cfal.minkowski_bound(b) == pytest.approx(math.sqrt(3) * 3.0 ** (1 / 3))


def test_sweep_is_deterministic():
    rows = cfal.run_sweep([10.0, 20.0], 50, ["mac", "am_Z", "am_ring(5)"], seed=3)
    assert len(rows) == 6
    assert rows == cfal.run_sweep([10.0, 20.0], 50, ["mac", "am_Z", "am_ring(5)"], seed=3, threads=3)
    csv = cfal.sweep_csv([10.0], 20, ["mac"], seed=3)
    assert csv.splitlines()[0] == "snr_db,scheme,mean_rate_bits,stderr_bits,trials,seed"


def test_codec_roundtrip():
    lat = cfal.build_codec(d=5, p=11, T=2, lf=1, lc=0, snr=cfal.snr_from_db(40.0))
    assert lat.fine_volume() == pytest.approx(55.0)
    assert lat.second_moment == pytest.approx(cfal.snr_from_db(40.0))
    h = cfal.sample_channels(1, 0)
    ch = cfal.Channel(h, cfal.snr_from_db(40.0))
    eq = cfal.best_equation(cfal.quadratic_field(5), ch)
    stats = cfal.simulate_codec(lat, ch, eq, trials=200, seed=1)
    assert stats["trials"] == 200
    assert 0.0 <= stats["error_rate"] <= 1.0
    value, terms = cfal.union_bound(lat, eq.nu_sq, 100)
    assert terms >= 100 and value > 0
