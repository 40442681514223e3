import math

import numpy as np

from wimax_phy import harness, link
from wimax_phy.channel import get_channel_model

AWGN = get_channel_model("awgn")


def qfunc(x):
    return 0.5 * math.erfc(x / math.sqrt(2))


def make_exp(**kw):
    defaults = dict(
        profile=link.make_profile("bpsk", None, g="1/4"),
        channel=AWGN,
        snr_grid=(4.0,),
        snr_axis="ebn0",
        min_errors=100,
        max_bits=200_000,
        master_seed=1,
    )
    defaults.update(kw)
    return harness.Experiment(**defaults)


def test_infinite_snr_zero_errors_full_budget():
    e = make_exp(snr_grid=(math.inf,), snr_axis="snr", min_errors=10, max_bits=19_200)
    pt = harness.run_point(e, 0)
    assert pt.bit_errors == 0 and pt.ber == 0.0
    assert pt.bits == 19_200  # ran to the bit budget


def test_awgn_bpsk_point_matches_q_function():
    e = make_exp(min_errors=3000, max_bits=400_000)
    pt = harness.run_point(e, 0)
    target = qfunc(math.sqrt(2 * 10 ** 0.4))  # ~1.25e-2
    assert abs(pt.ber - target) < 3 * pt.stderr


def test_identical_seeds_identical_points():
    e = make_exp(min_errors=50, max_bits=50_000, master_seed=99)
    a = harness.run_point(e, 0)
    b = harness.run_point(e, 0)
    assert a == b


def test_burst_prefix_independent_of_budget():
    # hash(master, snr_index, burst) seeding: early bursts never change
    e = make_exp(min_errors=10**9, max_bits=10**7, master_seed=5)
    first = [nxt for _, nxt in zip(range(12), harness.iter_burst_errors(e, 0, max_bursts=12))]
    longer = [nxt for _, nxt in zip(range(12), harness.iter_burst_errors(e, 0, max_bursts=500))]
    assert first == longer


def test_single_point_curve_equals_run_point():
    e = make_exp(min_errors=40, max_bits=40_000, master_seed=7)
    curve = harness.run_curve(e)
    assert len(curve.points) == 1
    assert curve.points[0] == harness.run_point(e, 0)


def test_curve_ordering_and_monotone_awgn():
    grid = (0.0, 2.0, 4.0, 6.0, 8.0)
    e = make_exp(snr_grid=grid, min_errors=400, max_bits=1_500_000, master_seed=2)
    curve = harness.run_curve(e)
    assert tuple(p.snr_db for p in curve.points) == grid
    for lo, hi in zip(curve.points, curve.points[1:]):
        # nonincreasing within 3 combined standard errors
        slack = 3 * math.hypot(lo.stderr, hi.stderr)
        assert hi.ber <= lo.ber + slack


def test_stderr_formula_against_empirical_spread():
    target = qfunc(math.sqrt(2 * 10 ** 0.4))
    points = [
        harness.run_point(make_exp(min_errors=10**9, max_bits=96_000, master_seed=s), 0)
        for s in range(12)
    ]
    bers = np.array([p.ber for p in points])
    reported = points[0].stderr
    empirical = bers.std(ddof=1)
    assert reported > 0 and empirical / reported < 2 and reported / max(empirical, 1e-12) < 2
    assert abs(bers.mean() - target) < 4 * reported / math.sqrt(len(points))


def test_coded_beats_uncoded_at_high_snr_over_sui3():
    sui3 = get_channel_model("sui3")
    grid = (8.0, 12.0, 16.0, 20.0)
    unc = harness.Experiment(link.make_profile("qpsk", None, g="1/8"), sui3, snr_grid=grid,
                             min_errors=60, max_bits=150_000, master_seed=3)
    cod = harness.Experiment(link.make_profile("qpsk", "1/2", g="1/8"), sui3, snr_grid=grid,
                             min_errors=60, max_bits=150_000, master_seed=3)
    u = harness.run_point(unc, len(grid) - 1)
    c = harness.run_point(cod, len(grid) - 1)
    assert c.ber <= u.ber


def test_experiment_validation():
    import pytest

    with pytest.raises(ValueError, match="increasing"):
        make_exp(snr_grid=(4.0, 2.0))
    with pytest.raises(ValueError, match="snr_axis"):
        make_exp(snr_axis="esn0")
    with pytest.raises(ValueError, match="min_errors"):
        make_exp(min_errors=0)
    with pytest.raises(ValueError, match="one burst"):
        make_exp(max_bits=10)
