"""Lattice wave equation after the same sudden release.

Three independent routes agree on the amplitude; the density then
oscillates at the period 2 pi / eps_rho with no monotone rise, unlike the
Schrodinger profile at the same site and momentum.
"""

from polydit.wave import (
    closed_form,
    no_dit_check,
    pv_solution,
    series_discrepancy,
    wave_oracle_value,
)

for mu, rho, tau in ((3, 0.5, 10.0), (-2, 1.1, 5.0), (7, 0.4, 15.0)):
    cf = closed_form(mu, rho, tau)
    print(f"({mu}, {rho}, {tau}): series {cf:.6f}  p.v. {pv_solution(mu, rho, tau):.6f}  "
          f"leapfrog {wave_oracle_value(mu, rho, tau):.6f}")

rep = no_dit_check(10, 0.5)
print(f"period {rep.period:.4f} (expected {rep.expected_period:.4f}), longest rise {rep.longest_rise:.2f}")
print(f"Schrodinger crossings at the same point: {rep.schrodinger}")

d = series_discrepancy([(3, 0.5, 10.0), (-2, 1.1, 5.0), (7, 0.4, 15.0), (0, 0.5, 3.0)])
print(f"printed series vs corrected: offset {d.offset:.4f}, residual {d.residual_max:.3f}, "
      f"constant offset: {d.is_constant_offset}")
