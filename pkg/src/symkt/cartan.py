"""Decomposition of T (x) Sym^p_0 into its three irreducible summands.

A :class:`FrameTensor` holds n slots of degree-p symmetric tensors, slot i
being the part paired with frame vector e_i (the shape of a covariant
derivative of a symmetric tensor field).  For trace-free slots it splits
orthogonally into a degree-(p+1) trace-free piece, a degree-(p-1) piece
and a remainder; the projections P1, P2, P3 and the conformal weight
operator B live here.
"""

from collections import namedtuple

import numpy as np

from .errors import DegenerateRankError, DegreeError, ShapeMismatchError, TraceError
from .symtensor import (
    DEFAULT_TRACE_TOL,
    SymTensor,
    contract,
    inner,
    lambda2_act,
    random_tracefree_tensor,
    trace_residual,
    tracefree_sym_product,
)

__all__ = [
    "FrameTensor",
    "CartanParts",
    "frame_inner",
    "frame_norm",
    "pi1",
    "pi1_star",
    "pi2",
    "pi2_star",
    "cartan_decompose",
    "conformal_weight",
    "pi2_constant",
    "supported_pair",
    "random_frame_tensor",
]


class FrameTensor:
    """n slots of SymTensor, all sharing (dim, degree)."""

    __slots__ = ("dim", "degree", "slots")

    def __init__(self, slots):
        slots = tuple(slots)
        if not slots:
            raise ShapeMismatchError("FrameTensor needs at least one slot")
        n, p = slots[0].dim, slots[0].degree
        if len(slots) != n:
            raise ShapeMismatchError("need exactly dim slots")
        for s in slots:
            if s.dim != n or s.degree != p:
                raise ShapeMismatchError("slots disagree in (dim, degree)")
        self.dim = n
        self.degree = p
        self.slots = slots

    @classmethod
    def zero(cls, dim, degree):
        return cls([SymTensor.zero(dim, degree) for _ in range(dim)])

    def __add__(self, other):
        return FrameTensor([a + b for a, b in zip(self.slots, other.slots)])

    def __sub__(self, other):
        return FrameTensor([a - b for a, b in zip(self.slots, other.slots)])

    def __neg__(self):
        return FrameTensor([-a for a in self.slots])

    def scale(self, c):
        return FrameTensor([s.scale(c) for s in self.slots])

    __mul__ = scale
    __rmul__ = scale

    def __repr__(self):
        return f"FrameTensor(dim={self.dim}, degree={self.degree})"


def frame_inner(A, B):
    """Slot-wise sum of scalar products (the induced metric on T (x) Sym^p)."""
    return sum(inner(a, b) for a, b in zip(A.slots, B.slots))


def frame_norm(A):
    from .dual import value_of

    return float(np.sqrt(max(value_of(frame_inner(A, A)), 0.0)))


def _check_supported(n, p):
    if p < 1:
        raise DegreeError("Cartan projections need degree >= 1")
    if n + 2 * p - 4 <= 0 or n + p - 3 <= 0:
        raise DegenerateRankError(
            f"(n,p)=({n},{p}) is degenerate for the second projection constant"
        )


def supported_pair(n, p):
    """Whether cartan_decompose accepts the pair (n, p)."""
    return p >= 1 and n + 2 * p - 4 > 0 and n + p - 3 > 0


def pi2_constant(n, p):
    """Value of pi2 pi2* on degree-(p-1) trace-free tensors."""
    _check_supported(n, p)
    return (n + 2 * p - 2) * (n + p - 3) / (n + 2 * p - 4)


def pi1(T):
    """Sum of trace-free products (e_i . slot_i)_0, degree p+1."""
    out = SymTensor.zero(T.dim, T.degree + 1)
    for i, s in enumerate(T.slots):
        out = out + tracefree_sym_product(SymTensor.basis_vector(T.dim, i), s)
    return out


def pi1_star(S):
    """Adjoint embedding: slot i = e_i -| S."""
    return FrameTensor(
        [contract(SymTensor.basis_vector(S.dim, i), S) for i in range(S.dim)]
    )


def pi2(T):
    """Sum of contractions e_i -| slot_i, degree p-1."""
    out = SymTensor.zero(T.dim, T.degree - 1)
    for i, s in enumerate(T.slots):
        out = out + contract(SymTensor.basis_vector(T.dim, i), s)
    return out


def pi2_star(S):
    """Adjoint embedding: slot i = (e_i . S)_0."""
    return FrameTensor(
        [
            tracefree_sym_product(SymTensor.basis_vector(S.dim, i), S)
            for i in range(S.dim)
        ]
    )


CartanParts = namedtuple("CartanParts", ["P1", "P2", "P3", "pi1", "pi2"])


def cartan_decompose(T, tol=DEFAULT_TRACE_TOL):
    """Orthogonal split T = P1 + P2 + P3 of a trace-free-slotted tensor.

    P1 = pi1* pi1 / (p+1); P2 = pi2* pi2 scaled by the reciprocal of
    ``pi2_constant``; P3 is the remainder.  Returns the three idempotent
    images together with the intermediate pi1/pi2 values.

    Raises
    ------
    DegenerateRankError
        For (n, p) pairs where the second constant is singular.
    TraceError
        If some slot is not trace-free within ``tol``.
    """
    n, p = T.dim, T.degree
    _check_supported(n, p)
    for s in T.slots:
        if trace_residual(s) > tol:
            raise TraceError("cartan_decompose needs trace-free slots")
    s1 = pi1(T)
    s2 = pi2(T)
    P1 = pi1_star(s1).scale(1.0 / (p + 1))
    P2 = pi2_star(s2).scale(1.0 / pi2_constant(n, p))
    P3 = T - P1 - P2
    return CartanParts(P1, P2, P3, s1, s2)


def conformal_weight(T, tol=DEFAULT_TRACE_TOL):
    """Conformal weight operator B: slot i of B(T) = sum_j (e_i ^ e_j)* T_j.

    Agrees with p*P1 - (n+p-2)*P2 - P3 on trace-free-slotted tensors.
    """
    n = T.dim
    _check_supported(n, T.degree)
    basis = [SymTensor.basis_vector(n, i) for i in range(n)]
    slots = []
    for i in range(n):
        acc = SymTensor.zero(n, T.degree)
        for j in range(n):
            if i == j:
                continue
            acc = acc + lambda2_act(basis[i], basis[j], T.slots[j])
        slots.append(acc)
    return FrameTensor(slots)


def random_frame_tensor(n, p, rng):
    """Random frame tensor with trace-free slots."""
    return FrameTensor([random_tracefree_tensor(n, p, rng) for _ in range(n)])
