"""Closed-form spectra of Witten-deformed Laplacians on cones and local models."""

from .cone_spectrum import (
    LinkPair,
    LinkSpectrum,
    assemble_cone_spectrum,
    cone_kernel_dims,
    theta_constants,
    type12_ladders,
    type345_ladders,
)
from .hermite import PParams, admissible_as, chi_eval, concentration, p_eigenvalue
from .model_complexes import (
    DomainClass,
    Ibc,
    Sign,
    classify_length_one,
    spectrum_length_one,
    spectrum_length_two,
)
from .morse import counting_function, morse_check, nu_point, weyl_fit
from .space_model import (
    ClosedManifold,
    CompactStratum,
    ConeStratum,
    CriticalPointModel,
    EuclideanFactor,
    LinkFactor,
    Product,
    VertexStratum,
    betti,
    euclidean_spectrum,
    local_model_kernel,
    tensor_spectrum,
)
from .spectra import AssembledSpectrum, EigLadder

__version__ = "0.1.0"
