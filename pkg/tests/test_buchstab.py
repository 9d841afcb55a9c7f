import math
import random

import pytest

from sievelab.buchstab import (
    BuchstabTable,
    default_table,
    omega,
    omega_lower,
    omega_upper,
)


def test_reciprocal_branch():
    assert omega(1.5) == pytest.approx(2 / 3, abs=1e-15)
    assert omega_lower(1.5) == pytest.approx(2 / 3, abs=1e-15)
    assert omega_upper(1.5) == pytest.approx(2 / 3, abs=1e-15)


def test_log_branch():
    assert omega(2.5) == pytest.approx((1 + math.log(1.5)) / 2.5, abs=1e-12)
    assert omega(2.5) == pytest.approx(0.562186, abs=5e-7)


def test_band_on_34():
    assert 0.5607 <= omega(3.5) <= 0.5644
    assert omega_lower(3.2) >= 0.5607
    assert omega_upper(3.2) <= 0.5644


def test_tail_constants():
    assert omega_lower(5.0) == 0.5612
    assert omega_upper(5.0) == 0.5617
    assert omega_lower(4.0) == 0.5612
    assert omega_upper(100.0) == 0.5617


def test_domain_errors():
    for fn in (omega, omega_lower, omega_upper):
        with pytest.raises(ValueError):
            fn(0.999)


def test_table_invariants():
    tab = default_table()
    m = tab.per_unit
    # 1/u on the first unit block, to machine precision.
    for idx in range(0, m + 1, 250):
        u = 1.0 + idx * tab.grid_step
        assert abs(tab.values[idx] - 1.0 / u) <= 1e-12


def test_envelopes_bracket_omega():
    rng = random.Random(17)
    for _ in range(10_000):
        u = rng.uniform(1.0, 20.0)
        assert omega_lower(u) - 1e-6 <= omega(u) <= omega_upper(u) + 1e-6


def test_delay_equation_residual():
    tab = default_table()
    h = tab.grid_step
    rng = random.Random(5)
    for _ in range(1000):
        u = rng.uniform(2.1, 19.9)
        # centred finite difference of u*omega(u) on the table grid
        left = (u - h) * omega(u - h)
        right = (u + h) * omega(u + h)
        deriv = (right - left) / (2 * h)
        assert abs(deriv - omega(u - 1.0)) <= 10 * h


def test_continuity_at_joins():
    eps = 1e-9
    for u0 in (2.0, 3.0):
        lo = omega(u0 - eps)
        hi = omega(u0 + eps)
        assert abs(lo - hi) <= 1e-8


def test_grid_convergence():
    coarse = BuchstabTable(grid_step=2e-4, u_max=8)
    fine = BuchstabTable(grid_step=1e-4, u_max=8)
    rng = random.Random(11)
    for _ in range(200):
        u = rng.uniform(3.0, 7.9)
        assert abs(coarse.omega(u) - fine.omega(u)) < 1e-5


def test_lazy_extension():
    tab = BuchstabTable(grid_step=1e-3, u_max=6)
    val = tab.omega(9.5)
    assert tab.u_max >= 9.5
    assert 0.5612 - 1e-3 <= val <= 0.5617 + 1e-3
