"""pairsim demo: invert measured count rates into source figures of merit.

Takes the headline operating point of the waveguide source (155 kHz net
singles per arm, 1550 net coincidences per second, 1.0 uW guided pump at
657 nm, twin photons separated at a 50/50 coupler) and inverts it: pair
production rate N = S1 S2 / (2 Rc), conversion efficiency per guided pump
photon, per-arm efficiency products, and the Poisson uncertainties a 10 s
counting run would carry.
"""

from pairsim import (EstimateInput, OpticalPower, Rate, Wavelength, estimate)

measured = EstimateInput(
    s1_net=Rate(155e3),
    s2_net=Rate(155e3),
    rc_net=Rate(1550.0),
    splitter_correction=True,          # 50/50 coupler loses half the pairs
    pump_power_guided=OpticalPower(1.0e-6),
    pump_wavelength=Wavelength(657.0),
)

result = estimate(measured, duration_s=10.0)

print(f"pair production rate N = {result.pair_rate.hz / 1e6:.3f} MHz "
      f"(+/- {result.pair_rate_sigma_hz / 1e6:.3f} MHz, 1 sigma over 10 s)")
print(f"conversion efficiency  = {result.conversion_efficiency:.3e} "
      f"pairs per guided pump photon "
      f"(+/- {result.conversion_efficiency_sigma:.1e})")
print(f"coincidences per watt  = {result.rc_per_watt:.3e} 1/(s W)")
p1, p2 = result.efficiency_products
print(f"efficiency products    = mu1*eta1 = {p1.value:.4f}, "
      f"mu2*eta2 = {p2.value:.4f}")
