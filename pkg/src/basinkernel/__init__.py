"""Basins of 0 for R_a(z) = a z^(2^(n+2)) - 2a z^(2^(n+1)), the product
kernel on them, and the exact basis vectors generated by S0 and S1."""

from .cuntz import BasisVector, Word, basis_vector, enumerate_canonical, good_form
from .dynamics import (
    BasinVerdict,
    FamilyMember,
    IterConfig,
    Status,
    basin_member_limit,
    basin_member_series,
    preimages,
)
from .kernel import KernelConfig, KernelValue, eval_kernel, omega_series
from .poly import APoly, BiPolyZ, CPoly, poly_add, poly_compose, poly_mul, specialize
from .render import GridSpec, render_basin

__all__ = [
    "APoly", "BasinVerdict", "BasisVector", "BiPolyZ", "CPoly", "FamilyMember", "GridSpec",
    "IterConfig", "KernelConfig", "KernelValue", "Status", "Word", "basin_member_limit",
    "basin_member_series", "basis_vector", "enumerate_canonical", "eval_kernel", "good_form",
    "omega_series", "poly_add", "poly_compose", "poly_mul", "preimages", "render_basin", "specialize",
]
