"""Explicit cb-frame for the reduced C*-algebra of the free group on two generators."""

from .algebra import GroupAlgebraElement, MatrixLevelElement, element_from_json, element_to_json
from .basis import (
    AuerbachSystem,
    BlockMapSpec,
    CoefficientSequence,
    GenericFrame,
    auerbach,
    cb_basic_criterion,
    generic_frame_from_maps,
    q_apply,
    qt_identity_check,
    t_apply,
    triple_norm,
    unconditional_triple_norm,
)
from .frame import (
    F2Frame,
    FrameIndex,
    FrameTerm,
    apply_partial_sum,
    block_boundary,
    coefficient_sum,
    index_decompose,
    lebesgue_constant,
    partial_sum_weight,
    reconstruction_error,
    sm_cb_upper,
    term,
    terms,
)
from .free_group import CapacityError, Word, ball, inverse, multiply, rank, reduce, sphere, unrank
from .multipliers import RadialMultiplier, band, cb_defect_upper, phi, phi_tm, psi, psi_symbol, tail_sum_closed_form
from .norms import NormEstimate, norm_interval, norm_lower, norm_upper, matrix_level_norm

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
