"""Dispersion-force toolkit: coupled-dipole and Lifshitz planar-media solvers.

The numerical core lives in the compiled extension ``caskit._core``.  Library
functions work in natural units (hbar = c = kB = 1); ``NaturalScale`` converts
to and from SI at the boundary.
"""

from ._core import (  # noqa: F401
    Axis,
    BulkSpectralDensity,
    DipoleSystem,
    ForceResult,
    FreeEnergyResult,
    GreenTrace,
    NaturalScale,
    OscillatorParams,
    PermittivityModel,
    PlanarStack,
    Polarization,
    QuadratureSpec,
    SpectralPoint,
    SurfaceForceJumps,
    ThermalState,
    absorption_rate_spectral_density,
    build_interaction_matrix,
    bulk_spectral_energy_density,
    energy_density_profile,
    eps_imag_axis,
    eps_real_axis,
    force_per_area,
    force_per_area_dilute,
    force_per_area_real_axis,
    free_energy_per_area,
    free_space_dyadic,
    fresnel,
    homogeneous_green_trace,
    kappa,
    kk_consistency_residual,
    local_dos,
    matsubara_frequencies,
    matsubara_si,
    noise_energy_spectral_density,
    pair_vdw_energy,
    pair_vdw_radial_force,
    pairwise_vdw_energy,
    planar_scattering_trace,
    polarizability,
    run_config,
    surface_force_jumps,
    vdw_energy,
    vdw_force,
)

__version__ = "0.1.0"
