"""pairsim demo: design the QPM operating point of a 657 nm pumped guide.

Solves the poling period that phase-matches degenerate pair generation
(657 nm -> 2 x 1314 nm) at 100 C in congruent lithium niobate, round-trips
the degeneracy temperature from that period, and sweeps a short temperature
tuning curve. The bundled index model is a bulk fit, so the computed period
sits a few percent above the 12.1 um of a real proton-exchanged guide.
"""

import numpy as np

from pairsim import (Wavelength, phase_mismatch, solve_degeneracy_temperature,
                     solve_poling_period, temperature_tuning_curve)

pump = Wavelength(657.0)
signal = Wavelength(1314.0)
temperature = 100.0

point = solve_poling_period(pump, signal, temperature)
print(f"pump {pump.nm:.0f} nm -> degenerate pairs at {point.signal.nm:.0f} nm")
print(f"poling period at {temperature:.0f} C: {point.poling_period_um:.4f} um")
print(f"residual phase mismatch: {phase_mismatch(point):.3e} rad/m")

t_star = solve_degeneracy_temperature(pump, point.poling_period_um)
print(f"degeneracy temperature recovered from the period: {t_star:.3f} C")

print("\ntemperature tuning curve (signal/idler fork above degeneracy):")
print(f"{'T [C]':>8}  {'signal [nm]':>12}  {'idler [nm]':>12}")
for p in temperature_tuning_curve(pump, point.poling_period_um,
                                  np.linspace(100.0, 130.0, 7)):
    print(f"{p.temperature_c:8.1f}  {p.signal.nm:12.2f}  {p.idler.nm:12.2f}")
