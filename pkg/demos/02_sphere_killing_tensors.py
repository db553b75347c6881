"""Every constructor family on the round sphere, with its residuals.

Builds the catalog fields (curvature-induced tensors, products of
rotation fields, Killing-form squares, the circle-fibration example) and
prints the classifier's verdicts for each.

    python3 demos/02_sphere_killing_tensors.py
"""

import numpy as np

from symkt.classify import classify
from symkt.constructors import (
    build_constructor,
    curvature_project,
    curvature_to_killing,
    sphere_curvature_generator,
    weyl_part,
)
from symkt.manifolds import EmbeddedSphere
from symkt.symtensor import SymTensor, norm

rng = np.random.default_rng(1)

print("== constant curvature gives back the metric ==")
sp = EmbeddedSphere(3)
K = curvature_to_killing(sphere_curvature_generator(4), sp)
x = sp.sample_point(rng)
print("K(x) - g:", norm(K(x) - SymTensor.metric(3)))

print()
print("== a generic curvature tensor gives a Killing tensor with trace ==")
R = curvature_project(rng.standard_normal((4,) * 4))
field = curvature_to_killing(R, sp)
rep = classify(field, samples=25, tol=1e-9, seed=7)
print("verdicts:", {k: v for k, v in sorted(rep.verdicts.items()) if v})

print()
print("== its totally trace-free part gives a Stackel tensor ==")
field = curvature_to_killing(weyl_part(R), sp)
rep = classify(field, samples=25, tol=1e-9, seed=7)
print("verdicts:", {k: v for k, v in sorted(rep.verdicts.items()) if v})

print()
print("== the catalog at a glance ==")
for key in ("sym-product", "sym-product-hopf", "killing-form:q=1",
            "killing-form:q=2", "hopf-stackel", "sasakian-stackel",
            "product-ckt", "broken-hopf-stackel"):
    field, entry = build_constructor(key)
    rep = classify(field, samples=20, tol=1e-9, seed=7)
    flags = ",".join(k for k, v in sorted(rep.verdicts.items()) if v) or "-"
    print(f"{key:22s} on {field.base.key:26s}: {flags}")
