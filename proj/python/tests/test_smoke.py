import itertools
import math

import pytest

import apdisc


def brute_disc(dims, values):
    """Max |sum| over every progression inside a 1- or 2-dim grid."""
    d = len(dims)
    pts = list(itertools.product(*[range(1, n + 1) for n in dims]))

    def idx(p):
        i = 0
        for k in range(d):
            i = i * dims[k] + (p[k] - 1)
        return i

    def inside(p):
        return all(1 <= p[k] <= dims[k] for k in range(d))

    best = max(abs(v) for v in values)
    for b in itertools.product(*[range(-(n - 1), n) for n in dims]):
        if not any(b):
            continue
        for a in pts:
            s, x = 0, a
            while inside(x):
                s += values[idx(x)]
                best = max(best, abs(s))
                x = tuple(x[k] + b[k] for k in range(d))
    return best


def test_disc_eval_constant_and_alternating():
    value, (start, diff, length) = apdisc.disc_eval(apdisc.Coloring([6], [1] * 6))
    assert value == 6 and length == 6
    alt = apdisc.Coloring([8], [1, -1] * 4)
    value, witness = apdisc.disc_eval(alt)
    assert value == brute_disc([8], alt.values)
    assert abs(apdisc.chi_sum(alt, *witness)) == value


def test_disc_eval_matches_brute_force():
    import random

    rng = random.Random(1)
    for dims in ([5], [3, 4], [4, 4]):
        size = math.prod(dims)
        for _ in range(10):
            values = [rng.choice([-1, 0, 1]) for _ in range(size)]
            assert apdisc.disc_eval(apdisc.Coloring(dims, values))[0] == brute_disc(dims, values)


def test_solve_respects_ledger_and_is_deterministic():
    r = apdisc.solve([16, 16], seed=3)
    assert r.chi.is_full()
    assert apdisc.disc_eval(r.chi)[0] <= r.ledger_bound
    assert apdisc.solve([16, 16], seed=3).chi == r.chi
    rnd = apdisc.solve([64], method="random", seed=1)
    assert rnd.chi.is_full()


def test_exact_and_certificate():
    value, witness = apdisc.exact_min_disc([3, 3])
    assert apdisc.disc_eval(witness)[0] == value
    cert = apdisc.lower_bound_value([16, 16])
    assert cert.L == 3 and cert.D == [2, 2]
    assert cert.R == pytest.approx(256 ** (1 / 6))
    lhs, rhs, ok = apdisc.energy_inequality_check(apdisc.Coloring([4], [1] * 4),
                                                  apdisc.manual_cert([4], 1, [1]))
    assert (lhs, ok) == (8, True)
    assert rhs == pytest.approx(16 / math.pi ** 2)


def test_counting_and_lattice():
    line = [[i] for i in range(1, 5)]
    assert apdisc.f_count(line, 2) == 5
    assert apdisc.count_small_gcd_points([10, 10], 1, 10) <= 360
    assert all(abs(a) + abs(b) == 1 for a, b in apdisc.lll_reduce([[1, 0], [4, 1]]))
    pm = apdisc.projection_map([1, 1], [4, 4])
    assert pm["target"] == [24] and pm["lambda"] == "1/4"


def test_errors_map_to_python_exceptions():
    with pytest.raises(apdisc.InputError):
        apdisc.solve([0])
    with pytest.raises(ValueError):
        apdisc.Coloring([3], [1, 1])
    with pytest.raises(apdisc.HypothesisError):
        apdisc.energy_inequality_check(apdisc.Coloring([4], [1] * 4), apdisc.manual_cert([4], 3, [1]))
