"""Diffraction in time of suddenly released beams on a polymer lattice.

Three dynamics are covered: the continuum Schrödinger shutter (Moshinsky
function), the lattice (polymer) Schrödinger shutter and the lattice wave
equation shutter.  All quantities are dimensionless unless a
:class:`~polydit.units.UnitMap` is used explicitly.
"""

from polydit.units import (
    HEAVISIDE_AT_ZERO,
    LatticeMomentum,
    UnitMap,
    heaviside,
    initial_wavefunction,
)
from polydit.specfun import (
    AsymptoticTerms,
    BesselRow,
    bessel_j_row,
    bessel_tail_order,
    fresnel,
    gauss_2f1_unit,
    gauss_theta_sum,
    incomplete_beta_unit,
    lerch_unit,
)
from polydit.shutter import (
    PolymerState,
    Profile,
    classical_profile,
    density,
    free_propagator,
    ode_oracle_evolve,
    phi,
    profile_space,
    profile_time,
    psi,
)
from polydit.moshinsky import (
    CORNU_XI_WIDTH,
    continuum_profile_space,
    continuum_profile_time,
    moshinsky,
    moshinsky_density,
    space_width,
    time_width,
    with_reflectivity,
    xi_of,
)
from polydit.transition import (
    TransitionReport,
    asymptotic_bessel,
    asymptotic_moshinsky,
    discrete_moshinsky,
    euler_maclaurin_phi,
    em_correction,
    residual_curve,
    residual_max,
)
from polydit.spiral import (
    CrossingReport,
    NoCrossingError,
    SpiralCurve,
    arc_length,
    cornu_circle_intersections,
    cornu_circle_width,
    cornu_curve,
    crossings,
    like_spiral,
)
from polydit.wave import (
    FourierInitialData,
    NoDitReport,
    StructuralSeriesError,
    WaveInitialData,
    WaveState,
    closed_form,
    dispersion,
    fourier_initial,
    no_dit_check,
    hypergeometric_series,
    pv_solution,
    series_discrepancy,
    wave_ode_oracle,
)

__version__ = "0.1.0"
