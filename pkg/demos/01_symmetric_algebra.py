"""Tour of the symmetric tensor algebra.

Walks through products, contractions, the metric trace and its adjoint,
the standard decomposition, and the projections of T (x) Sym^p_0 --
printing each identity next to a numerical check.  Run as a script:

    python3 demos/01_symmetric_algebra.py
"""

import numpy as np

from symkt import (
    FrameTensor,
    SymTensor,
    cartan_decompose,
    conformal_weight,
    contract,
    frame_norm,
    inner,
    mult_L,
    norm,
    standard_decomposition,
    sym_product,
    trace_Lambda,
)
from symkt.cartan import random_frame_tensor
from symkt.symtensor import random_sym_tensor, sym_power

rng = np.random.default_rng(0)

print("== products and contractions ==")
n = 3
e1, e2 = SymTensor.basis_vector(n, 0), SymTensor.basis_vector(n, 1)
P = sym_product(e1, e2)
print("e1 . e2 has entries (0,1) =", P[0, 1], "and diagonal", P[0, 0])

u = SymTensor.from_vector([1.0, 1.0, 0.0])
lhs = contract(e1, sym_power(u, 3))
rhs = sym_power(u, 2).scale(3.0)  # contraction of a cube: 3 <e1, u> u^2
print("contraction of a symmetric cube, residual:", norm(lhs - rhs))

print()
print("== trace L/Lambda pair ==")
g = SymTensor.metric(n)
one = SymTensor.scalar(n, 1.0)
print("L(1) - 2g:", norm(mult_L(one) - g.scale(2.0)))
print("Lambda(g) =", trace_Lambda(g).comps[0], "(the dimension)")
K = random_sym_tensor(n, 3, rng)
comm = trace_Lambda(mult_L(K)) - mult_L(trace_Lambda(K))
print("[Lambda, L] - (2n + 4p) id residual:",
      norm(comm - K.scale(2.0 * n + 4.0 * 3)))

print()
print("== standard decomposition ==")
K = random_sym_tensor(n, 4, rng)
dec = standard_decomposition(K)
print("degrees of the trace-free parts:", [p.degree for p in dec.parts])
print("reconstruction residual:", norm(dec.reconstruct() - K))
print("part traces:", [norm(trace_Lambda(p)) if p.degree >= 2 else 0.0
                       for p in dec.parts])

print()
print("== splitting the derivative shape T (x) Sym^p_0 ==")
T = random_frame_tensor(4, 2, rng)
P1, P2, P3, _, _ = cartan_decompose(T)
print("partition residual:", frame_norm(P1 + P2 + P3 - T))
B = conformal_weight(T)
n, p = 4, 2
want = P1.scale(float(p)) - P2.scale(float(n + p - 2)) - P3
print("weight operator vs projection combination:", frame_norm(B - want))
