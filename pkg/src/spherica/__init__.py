"""Exact combinatorics of spherical root data, boundary degenerations,
unramified Plancherel factors, and a banded scattering model."""

__version__ = "0.1.0"

from .rootdata import (
    Cone,
    RootDatum,
    WeylElement,
    adjoint_model,
    gl_model,
    product,
    so_even_model,
    so_odd_model,
    sp_model,
    weight_model,
)
from .spherical import (
    LittleWeylGroup,
    NormalizedRoot,
    SphericalDataError,
    SphericalDatum,
    WavefrontReport,
)

__all__ = [
    "Cone",
    "LittleWeylGroup",
    "NormalizedRoot",
    "RootDatum",
    "SphericalDataError",
    "SphericalDatum",
    "WavefrontReport",
    "WeylElement",
    "adjoint_model",
    "gl_model",
    "product",
    "so_even_model",
    "so_odd_model",
    "sp_model",
    "weight_model",
    "__version__",
]
