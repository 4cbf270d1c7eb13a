import math

import numpy as np
import pytest

from pairsim import (ConfigError, Efficiency, OpticalPower, Rate, Wavelength,
                     idler_wavelength, photon_flux)


class TestPhotonFlux:
    def test_zero_power(self):
        assert photon_flux(OpticalPower(0.0), Wavelength(657.0)).hz == 0.0

    def test_one_microwatt_657nm(self):
        # frozen from hand arithmetic: 1e-6 W * 657e-9 m / (h c)
        flux = photon_flux(OpticalPower(1.0e-6), Wavelength(657.0)).hz
        assert flux == pytest.approx(3.30741458487556e12, rel=1e-12)
        assert flux == pytest.approx(3.31e12, rel=2e-3)

    def test_300mw_766nm(self):
        flux = photon_flux(OpticalPower(0.3), Wavelength(766.0)).hz
        assert flux == pytest.approx(1.1568399872213146e18, rel=1e-12)
        assert flux == pytest.approx(1.16e18, rel=5e-3)

    def test_linear_in_power(self):
        rng = np.random.default_rng(7)
        lam = Wavelength(657.0)
        base = photon_flux(OpticalPower(1.0), lam).hz
        for a in rng.uniform(0.0, 10.0, 50):
            scaled = photon_flux(OpticalPower(a), lam).hz
            assert scaled == pytest.approx(a * base, rel=1e-12, abs=1e-30)

    def test_rejects_bad_power(self):
        with pytest.raises(ConfigError):
            OpticalPower(-1e-6)
        with pytest.raises(ConfigError):
            OpticalPower(float("nan"))
        with pytest.raises(ConfigError):
            OpticalPower(float("inf"))


class TestIdlerWavelength:
    def test_degenerate_657(self):
        assert idler_wavelength(Wavelength(657.0), Wavelength(1314.0)).nm == 1314.0

    def test_degenerate_351(self):
        assert idler_wavelength(Wavelength(351.0), Wavelength(702.0)).nm == 702.0

    def test_500_750_gives_1500(self):
        li = idler_wavelength(Wavelength(500.0), Wavelength(750.0)).nm
        assert li == pytest.approx(1500.0, rel=1e-12)

    def test_signal_must_exceed_pump(self):
        with pytest.raises(ConfigError):
            idler_wavelength(Wavelength(657.0), Wavelength(657.0))
        with pytest.raises(ConfigError):
            idler_wavelength(Wavelength(657.0), Wavelength(400.0))

    def test_involution_about_degeneracy(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            lp = Wavelength(rng.uniform(300.0, 900.0))
            ls = Wavelength(lp.nm * rng.uniform(1.01, 1.99))
            li = idler_wavelength(lp, ls)
            back = idler_wavelength(lp, li)
            assert back.nm == pytest.approx(ls.nm, rel=1e-12)

    def test_degenerate_fixed_point_is_exact(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            lp = rng.uniform(300.0, 900.0)
            assert idler_wavelength(Wavelength(lp), Wavelength(2.0 * lp)).nm \
                == 2.0 * lp


class TestValueTypes:
    def test_wavelength_positive(self):
        with pytest.raises(ConfigError):
            Wavelength(0.0)
        with pytest.raises(ConfigError):
            Wavelength(-5.0)
        with pytest.raises(ConfigError):
            Wavelength(math.inf)

    def test_wavelength_units(self):
        w = Wavelength(1314.0)
        assert w.um == pytest.approx(1.314)
        assert w.meters == pytest.approx(1.314e-6)
        assert Wavelength.from_meters(657e-9).nm == pytest.approx(657.0)

    def test_rate_non_negative(self):
        assert Rate(0.0).hz == 0.0
        with pytest.raises(ConfigError):
            Rate(-1.0)

    def test_efficiency_bounds(self):
        assert Efficiency(0.0).value == 0.0
        assert Efficiency(1.0).value == 1.0
        with pytest.raises(ConfigError):
            Efficiency(1.0001)
        with pytest.raises(ConfigError):
            Efficiency(-0.0001)
