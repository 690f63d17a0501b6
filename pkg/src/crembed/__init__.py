"""Maurer-Cartan coefficients in second-kind coordinates, their analytic
continuation, and the extended CR frames built from them."""

from .continuation import (bracket_form_residual, check_triangular_dependence,
                           flatness_residual, lambda_at)
from .cr_frame import (GroupCRStructure, build_extended_frame, check_not_purely_imaginary,
                       corollary_pipeline, select_transverse_basis, validate_cr_structure,
                       verify_commutation, verify_cr_condition)
from .exact_poly import exact_flatness_residual, exact_lambda, exact_omega
from .fd import FDSpec, GridSpec
from .lie_core import LieAlgebra, StructureConstants, adjoint_matrix, build_algebra, classify
from .mc_engine import omega_at, verify_maurer_cartan

__version__ = "0.1.0"
