"""Slice Fourier transform for Clifford-algebra-valued functions."""
from ._accel import HAVE_NUMBA, backend, set_threads
from .convolution import (
    ConvolutionReport,
    calibrate_kappa,
    generalized_translate,
    mustard_spatial,
    mustard_spectral,
    translate_convolve,
)
from .hermite import HermiteIndex, SlicePoint, hermite_field, hermite_function, norm_A
from .multivector import (
    Multivector,
    Params,
    clifford_conjugate,
    eta_sandwich,
    geometric_product,
    grade_project,
    scalar_part,
    sphere_sandwich_oracle,
)
from .slicefield import (
    GridSpec,
    SliceField,
    inner_product,
    norm,
    read_csv,
    read_json,
    rel_error,
    write_csv,
    write_json,
)
from .transform import forward, forward_fast, inverse, kernel_closed, mehler_series

__version__ = "0.1.0"
