"""Symmetric tensor calculus and Killing-tensor verification toolkit."""

from .symtensor import (
    SymTensor,
    Decomposition,
    sym_product,
    sym_power,
    contract,
    inner,
    norm,
    mult_L,
    trace_Lambda,
    poly_eval,
    lambda2_act,
    tracefree_sym_product,
    standard_decomposition,
    tracefree_part,
    constant_a,
    change_basis,
)
from .cartan import (
    FrameTensor,
    cartan_decompose,
    conformal_weight,
    frame_inner,
    frame_norm,
    pi1,
    pi1_star,
    pi2,
    pi2_star,
    pi2_constant,
)

__version__ = "0.1.0"

__all__ = [
    "SymTensor", "Decomposition", "sym_product", "sym_power", "contract",
    "inner", "norm", "mult_L", "trace_Lambda", "poly_eval", "lambda2_act",
    "tracefree_sym_product", "standard_decomposition", "tracefree_part",
    "constant_a", "change_basis", "FrameTensor", "cartan_decompose",
    "conformal_weight", "frame_inner", "frame_norm", "pi1", "pi1_star",
    "pi2", "pi2_star", "pi2_constant",
]
