import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fista_lab.momentum import (
    MomentumParams,
    MomentumState,
    check_key_inequality,
    check_little_o_inequalities,
    limit_inertia,
    sequence,
    step,
)

GOLDEN = (1 + math.sqrt(5)) / 2

# a_k after 10^6 steps of the (0.5, 1, 3) recurrence
A_LIMIT_05_1_3 = 0.5694991259569394


def test_first_mod_step():
    t, a, nxt = step(MomentumParams.mod(1, 1, 4), MomentumState())
    assert t == pytest.approx(GOLDEN, abs=1e-15)
    assert a == 0.0
    assert nxt == MomentumState(2, t)


def test_cd_closed_form_at_k3():
    params = MomentumParams.cd(2)
    state = MomentumState()
    for _ in range(3):
        t, a, state = step(params, state)
    assert t == 2.5
    assert a == pytest.approx(0.4, abs=1e-15)


def test_bt_and_mod_111_4_are_bitwise_identical():
    s_bt, s_mod = MomentumState(), MomentumState()
    bt, mod = MomentumParams.bt(), MomentumParams.mod(1, 1, 4)
    for _ in range(10**4):
        t1, a1, s_bt = step(bt, s_bt)
        t2, a2, s_mod = step(mod, s_mod)
        assert t1 == t2 and a1 == a2


def test_sequence_matches_step():
    for params in (MomentumParams.lazy(), MomentumParams.cd(50), MomentumParams.mod(0.5, 0.3, 3.0)):
        t, a = sequence(params, 200)
        state = MomentumState()
        for k in range(1, 201):
            tk, ak, state = step(params, state)
            assert (tk, ak) == (t[k], a[k])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(scheme="mod", p=0.0, q=1, r=4),
        dict(scheme="mod", p=1.5, q=1, r=4),
        dict(scheme="mod", p=1, q=-1, r=4),
        dict(scheme="mod", p=1, q=1, r=4.5),
        dict(scheme="mod", p=1, q=1, r=0.0),
        dict(scheme="cd", d=0.0),
        dict(scheme="bt", p=0.5),
        dict(scheme="heavy-ball"),
    ],
)
def test_invalid_params_rejected_at_construction(kwargs):
    with pytest.raises(ValueError):
        MomentumParams(**kwargs)


def test_cd_theory_flag():
    assert MomentumParams.cd(2).outside_theory
    assert not MomentumParams.cd(2.5).outside_theory
    assert not MomentumParams.lazy().outside_theory


def test_lazy_preset():
    assert MomentumParams.lazy() == MomentumParams.mod(1 / 50, 1 / 10, 4)


def test_limit_examples():
    assert limit_inertia(1, 1, 2).a_inf == pytest.approx(0.5, abs=1e-15)
    lim = limit_inertia(1, 1, 4)
    assert lim.a_inf == 1.0 and lim.divergent_t
    assert limit_inertia(0.5, 1, 3).a_inf == pytest.approx(A_LIMIT_05_1_3, abs=1e-12)


def test_limit_matches_iteration_oracle():
    _, a = sequence(MomentumParams.mod(0.5, 1, 3), 10**6)
    assert a[-1] == pytest.approx(A_LIMIT_05_1_3, abs=1e-15)


@pytest.mark.parametrize("r", [0.0, -1.0, 4.01])
def test_limit_rejects_bad_r(r):
    with pytest.raises(ValueError):
        limit_inertia(1, 1, r)


def test_key_inequality_examples():
    rep = check_key_inequality(1, 1, 10**4)
    assert rep.holds
    t, _ = sequence(MomentumParams.bt(), 10**4)
    gap = t[1:] ** 2 - t[1:] - t[:-1] ** 2
    assert np.all(np.abs(gap) <= 1e-9 * t[1:] ** 2)

    assert check_key_inequality(0.5, 2.25, 10**4).holds

    bad = check_key_inequality(1, 4, 100)
    assert not bad.holds
    t1 = (1 + math.sqrt(8)) / 2
    assert t1 * t1 - t1 - 1 == pytest.approx(0.75, abs=1e-12)
    assert bad.max_violation >= 0.75 - 1e-9


def test_little_o_boundary_holds():
    rep = check_little_o_inequalities(0.5, 0.25, 10**4)
    assert rep.holds and rep.in_theory


def test_little_o_lazy_setting_breaks_right_link():
    # the right link needs q <= p^2; at (1/50, 1/10) it is off by (q - p^2)/4
    rep = check_little_o_inequalities(1 / 50, 1 / 10, 10**4)
    assert rep.lower_bound and rep.chain_left
    assert not rep.chain_right
    assert rep.max_violation_right == pytest.approx((0.1 - 0.0004) / 4, abs=1e-8)


def test_little_o_degenerates_at_p_one():
    rep = check_little_o_inequalities(1.0, 1.0, 10**3)
    assert rep.holds
    assert not rep.in_theory


@pytest.mark.parametrize("p", [0.02, 0.1, 0.5, 0.9])
@pytest.mark.parametrize("q_over_p2", [0.0, 0.5, 1.0, 3.0, 20.0])
def test_right_link_slack_is_exactly_affine_in_q(p, q_over_p2):
    # t_{k-1}^2 - (t_k^2 - t_k) - (1-p) t_k == (p^2 - q) / 4 for every k
    q = q_over_p2 * p * p
    t, _ = sequence(MomentumParams.mod(p, q), 2000)
    cur, prev = t[1:], t[:-1]
    slack = prev**2 - (cur**2 - cur) - (1 - p) * cur
    assert np.allclose(slack, (p * p - q) / 4, atol=1e-9 * cur[-1] ** 2)
    assert check_little_o_inequalities(p, q, 2000).chain_right == (q <= p * p)


valid_pq = st.tuples(
    st.floats(min_value=0.01, max_value=1.0),
    st.floats(min_value=0.0, max_value=4.0),
)


@settings(max_examples=40, deadline=None)
@given(valid_pq)
def test_t_increasing_and_lower_bound(pq):
    p, q = pq
    t, _ = sequence(MomentumParams.mod(p, q), 5000)
    k = np.arange(1, 5001)
    assert np.all(np.diff(t) > 0)
    assert np.all(t[1:] >= (k + 1) * p / 2 * (1 - 1e-12))


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.01, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
def test_key_inequality_holds_when_q_below_bound(p, frac):
    assert check_key_inequality(p, frac * (2 - p) ** 2, 2000).holds


@pytest.mark.parametrize(
    "params",
    [MomentumParams.bt(), MomentumParams.cd(2), MomentumParams.cd(75), MomentumParams.lazy(), MomentumParams.mod(0.3, 0.2, 2.0)],
)
def test_first_inertia_is_zero(params):
    assert step(params, MomentumState())[1] == 0.0


def test_cd_inertia_identity():
    d = 7.5
    _, a = sequence(MomentumParams.cd(d), 10**4)
    k = np.arange(1, 10**4 + 1)
    assert np.allclose(a[1:], (k - 1) / (k + d), rtol=4e-16, atol=0)
    assert np.all(a[1:] < 1)


@pytest.mark.parametrize("pqr", [(1.0, 1.0, 3.0), (0.5, 0.5, 3.5), (0.2, 0.5, 3.9)])
def test_monotone_approach_to_limit_when_r_below_4(pqr):
    _, a = sequence(MomentumParams.mod(*pqr), 10**4)
    dist = np.abs(a[1:] - limit_inertia(*pqr).a_inf)
    tail = dist[50:]
    tail = tail[tail > 1e-12]  # below this the distance is roundoff noise
    assert np.all(np.diff(tail) <= 0)
    assert dist[-1] <= 1e-6
