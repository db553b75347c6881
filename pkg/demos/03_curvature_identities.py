"""Curvature endomorphism q(R) and the second-order identities.

Shows the sphere eigenvalue of q(R) on trace-free tensors, the
two-tensor relation to the classical curvature action, the commutation
identity behind the Laplacian lower bound, and the sign of the q(R)
quadratic form on the hyperbolic ball.

    python3 demos/03_curvature_identities.py
"""

import numpy as np

from symkt.curvature import lichnerowicz_defect, qR_act, qrh_check, riemann
from symkt.fields import random_tangential_field
from symkt.manifolds import EmbeddedSphere, poincare_ball_chart
from symkt.symtensor import inner, norm, random_sym_tensor, random_tracefree_tensor

rng = np.random.default_rng(2)

print("== q(R) on the unit sphere ==")
for n in (2, 3, 4):
    sp = EmbeddedSphere(n)
    x = sp.sample_point(rng)
    rm = riemann(sp, x)
    print(f"S^{n}: R(e1,e2,e2,e1) = {rm.R4[0, 1, 1, 0]: .3f}, "
          f"scal = {rm.scal:.3f}")
    for p in (1, 2, 3):
        K = random_tracefree_tensor(n, p, rng)
        lam = p * (n + p - 2)
        res = norm(qR_act(sp, x, K, rm=rm) - K.scale(float(lam)))
        print(f"   degree {p}: q(R) eigenvalue {lam}, residual {res:.2e}")

print()
print("== degree-2 form of q(R) ==")
sp = EmbeddedSphere(3)
x = sp.sample_point(rng)
h = random_sym_tensor(3, 2, rng)
print("q(R) - (2 R_ring - Ric) residual:", qrh_check(sp, x, h))

print()
print("== commutation identity behind the Laplacian bound ==")
sp2 = EmbeddedSphere(2)
field = random_tangential_field(sp2, 2, rng)
x = sp2.sample_point(rng)
print("(delta d - d delta) - (nabla*nabla - q(R)) residual:",
      lichnerowicz_defect(field, x))

print()
print("== negative curvature makes the q(R) form non-positive ==")
hy = poincare_ball_chart(3)
x = hy.sample_point(rng)
rm = riemann(hy, x)
quad = [float(inner(qR_act(hy, x, K := random_tracefree_tensor(3, 2, rng),
                           rm=rm), K)) for _ in range(5)]
print("sectional curvature:", rm.sectional(0, 1))
print("quadratic form samples (all <= 0):", [f"{v:.3f}" for v in quad])
