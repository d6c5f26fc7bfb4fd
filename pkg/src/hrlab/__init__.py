"""Numerical laboratory for moment conditions, spectrality of semispectral
measures, Choquet boundaries of monomial function systems and weak versus
strong convergence of compressed normal operators."""
from .choquet import (
    AtomicMeasure,
    IsnytosParams,
    MonomialSpace,
    boundary_membership,
    isnytos_instance,
    verify_representing,
)
from .convergence_lab import (
    SequenceConfig,
    build_sequence,
    convergence_gaps,
    main2_experiment,
    povm_perturbation_search,
    scalar_counterexample_search,
)
from .exponents import (
    ExactPoint,
    ExponentSet,
    gcd_diffs,
    generates,
    hyperrigid_sufficient,
    sector_condition,
    sigma_condition,
)
from .inequalities import hansen_check, lieb_ruskai_check, main1_verify, projection_commutation_check
from .matrix_core import (
    NormalOperator,
    compression_moment,
    func_calc,
    polar_unitary,
    psd_gap,
    spectral_decompose,
)
from .povm import Povm, is_spectral, moment_operator, naimark_dilate, spectral_measure_of
from .tolerance import ToleranceConfig

__all__ = [
    "AtomicMeasure", "ExactPoint", "ExponentSet", "IsnytosParams", "MonomialSpace", "NormalOperator",
    "Povm", "SequenceConfig", "ToleranceConfig", "boundary_membership", "build_sequence",
    "compression_moment", "convergence_gaps", "func_calc", "gcd_diffs", "generates", "hansen_check",
    "hyperrigid_sufficient", "is_spectral", "isnytos_instance", "lieb_ruskai_check", "main1_verify",
    "main2_experiment", "moment_operator", "naimark_dilate", "polar_unitary", "povm_perturbation_search",
    "projection_commutation_check", "psd_gap", "scalar_counterexample_search", "sector_condition",
    "sigma_condition", "spectral_decompose", "spectral_measure_of", "verify_representing",
]
