"""Singular series and prime variance in short intervals of quadratic integer rings."""

from ._core import (
    BasisKind,
    Error,
    Field,
    PrefixGrid,
    QuadInt,
    TestFunction,
    build_grid,
    is_prime_element,
    load_grid,
    mobius_phi_partial_sum,
    montgomery_sum,
    prime_ideal_norms,
    prime_power_correction,
    residue_rk,
    singular_series,
    singular_series_rational,
    singular_sum_smoothed,
    variance_profile,
    z_baseline,
)

__all__ = [
    "BasisKind",
    "Error",
    "Field",
    "PrefixGrid",
    "QuadInt",
    "TestFunction",
    "build_grid",
    "is_prime_element",
    "load_grid",
    "mobius_phi_partial_sum",
    "montgomery_sum",
    "prime_ideal_norms",
    "prime_power_correction",
    "residue_rk",
    "singular_series",
    "singular_series_rational",
    "singular_sum_smoothed",
    "variance_profile",
    "z_baseline",
]
