import math

import numpy as np
import pytest
import scipy.constants as sc
from scipy.integrate import quad

from magicpol import DomainError, TrapSpec, heating_per_cycle, restored_energy, wavepacket_moments
from magicpol.heating import RB87_MASS, density, wavefunction


@pytest.fixture
def trap():
    return TrapSpec(omega0=2 * math.pi * 1e5)


def radial_moment(trap, t, power):
    d0 = trap.d0
    # integrate in units of d0 so the integrand is O(1)
    f = lambda x: 4 * math.pi * x**2 * x**power * density(trap, x * d0, t) * d0**3  # noqa: E731
    upper = 40 * math.sqrt(1 + (trap.omega0 * t) ** 2)
    val, _ = quad(f, 0, upper, epsabs=0, epsrel=1e-12, limit=200)
    return val * d0**power


def test_trap_derived_fields(trap):
    assert trap.d0 == pytest.approx(math.sqrt(sc.hbar / (RB87_MASS * trap.omega0)))
    assert trap.e0 == pytest.approx(1.5 * sc.hbar * trap.omega0)
    assert TrapSpec.from_frequency(1e6, "hz").omega0 == pytest.approx(2 * math.pi * 1e6)
    assert TrapSpec.from_frequency(1e6, "rad/s").omega0 == 1e6
    with pytest.raises(DomainError):
        TrapSpec.from_frequency(1.0, "khz")
    with pytest.raises(DomainError):
        TrapSpec(0.0)
    with pytest.raises(DomainError):
        TrapSpec(1.0, mass=-1.0)


def test_moment_examples(trap):
    d2 = trap.d0**2
    assert wavepacket_moments(trap, 0.0) == pytest.approx((1.5 * d2, trap.e0 / 2))
    assert wavepacket_moments(trap, 1 / trap.omega0)[0] == pytest.approx(3 * d2)
    assert wavepacket_moments(trap, 2 / trap.omega0)[0] == pytest.approx(7.5 * d2)


@pytest.mark.parametrize("w0t", [0.0, 1.0, 2.0])
def test_quadrature_oracle(trap, w0t):
    t = w0t / trap.omega0
    assert radial_moment(trap, t, 0) == pytest.approx(1.0, rel=1e-9)
    assert radial_moment(trap, t, 2) == pytest.approx(wavepacket_moments(trap, t)[0], rel=1e-6)


def test_density_is_abs_psi_squared(trap):
    r = np.linspace(0, 5 * trap.d0, 11)
    t = 1.3 / trap.omega0
    np.testing.assert_allclose(np.abs(wavefunction(trap, r, t)) ** 2, density(trap, r, t), rtol=1e-12)


def test_kinetic_energy_constant_from_wavefunction(trap):
    # <T> = hbar^2/(2M) * integral |grad Psi|^2, by finite differences on the exact Psi
    for w0t in (0.0, 0.7, 3.0):
        t = w0t / trap.omega0
        d0 = trap.d0
        s = math.sqrt(1 + w0t**2)
        x = np.linspace(0, 40 * s, 400_001)
        psi = wavefunction(trap, x * d0, t)
        dpsi = np.gradient(psi, x * d0)
        kin = sc.hbar**2 / (2 * trap.mass) * np.trapezoid(4 * np.pi * (x * d0) ** 2 * np.abs(dpsi) ** 2, x * d0)
        assert kin == pytest.approx(wavepacket_moments(trap, t)[1], rel=1e-6)


def test_restored_energy_examples(trap):
    assert restored_energy(trap, 0.0) == trap.e0
    assert restored_energy(trap, 1 / trap.omega0) == pytest.approx(1.5 * trap.e0)


def test_heating_examples():
    t1 = TrapSpec.from_frequency(1e6, "hz")
    assert heating_per_cycle(t1, 1e-6).hbar_omega0 == pytest.approx((2 * math.pi) ** 2 / 4)
    assert heating_per_cycle(t1, 1e-6).hbar_omega0 == pytest.approx(9.87, abs=0.005)
    t2 = TrapSpec(1e6)
    assert heating_per_cycle(t2, 1e-6).hbar_omega0 == pytest.approx(0.25)
    assert heating_per_cycle(t2, 0.0).kelvin == 0.0
    h = heating_per_cycle(t1, 1e-6)
    assert h.kelvin * sc.k == pytest.approx(h.joule)
    assert h.joule == pytest.approx(h.hbar_omega0 * sc.hbar * t1.omega0)


def test_negative_time(trap):
    for fn in (wavepacket_moments, restored_energy, heating_per_cycle):
        with pytest.raises(DomainError):
            fn(trap, -1e-9)


def test_random_identities():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        trap = TrapSpec(10 ** rng.uniform(2, 8), RB87_MASS * rng.uniform(0.05, 3))
        tau = rng.uniform(0, 5) / trap.omega0
        msr, kin = wavepacket_moments(trap, tau)
        chain = trap.e0 / 2 + trap.mass * trap.omega0**2 * msr / 2
        assert restored_energy(trap, tau) == pytest.approx(chain, rel=1e-13)
        # E - E0 cancels for small omega0*tau, so compare on the scale of E0
        diff = heating_per_cycle(trap, tau).joule - (restored_energy(trap, tau) - trap.e0) / 3
        assert abs(diff) <= 1e-14 * trap.e0
        assert kin == trap.e0 / 2


def test_scaling_under_omega_doubling():
    a = TrapSpec(1e6)
    b = TrapSpec(2e6)
    ha = heating_per_cycle(a, 1e-6)
    hb = heating_per_cycle(b, 0.5e-6)
    assert hb.hbar_omega0 == pytest.approx(ha.hbar_omega0)
    assert hb.kelvin == pytest.approx(2 * ha.kelvin)
