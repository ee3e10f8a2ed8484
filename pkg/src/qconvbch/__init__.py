"""Convolutional BCH codes and the quantum convolutional codes built from them."""

from .convbch import ConvCode, SplitBCH, construct_conv_bch, split_bch_parity, verify_theorem1
from .galois import FieldSpec, make_field
from .matrix import Distance, MatrixFq
from .polymat import PolyMatrix, certify_reduced_basic, dual_free_distance, free_distance
from .quantumcc import StabilizerConv, qcbch_euclidean, qcbch_hermitian, quantum_free_distance_oracle

__all__ = [
    "ConvCode", "Distance", "FieldSpec", "MatrixFq", "PolyMatrix", "SplitBCH", "StabilizerConv",
    "certify_reduced_basic", "construct_conv_bch", "dual_free_distance", "free_distance", "make_field",
    "qcbch_euclidean", "qcbch_hermitian", "quantum_free_distance_oracle", "split_bch_parity", "verify_theorem1",
]
__version__ = "0.1.0"
