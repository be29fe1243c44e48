"""Exact norm-attaining corrections for positive operators between Banach lattices.

The main entry points are :func:`correct_linfty_l1`, :func:`correct_c0_l1`
and :func:`verify_correction`; :func:`disjointify` is the disjoint-support
step they rely on, and :mod:`bpb.counterexample` covers the strictly convex
renorming of ``c_0``.
"""

from .arith import ArithmeticMode, get_mode, set_mode, use_mode
from .correct import (
    Correction,
    CorrectionCertificate,
    DomainPartition,
    VerificationReport,
    correct_c0_l1,
    correct_linfty_l1,
    eta_of_eps,
    partition_domain,
    verify_correction,
)
from .disjoint import LemmaWitness, disjointify
from .lattice import (
    LatticeVector,
    LinearOperator,
    MeasureSpace,
    PositiveOperator,
    apply,
    indicator,
    l1_norm,
    normalize_operator,
    ones,
    opnorm_exact,
    opnorm_positive,
    sup_norm,
)

__version__ = "0.1.0"
