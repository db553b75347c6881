"""Classifying fields, and what survives a conformal change of metric.

The Killing property is metric-specific, but the conformal-Killing
property is shared by every conformally related metric.  This script
classifies a few fields, then rescales the metric by exp(2f) and shows
which verdicts move and which stay.

    python3 demos/05_classification_and_conformal_change.py
"""

from symkt.classify import classify, divfree_killing_parts
from symkt.constructors import build_constructor
from symkt.fields import TensorField, wrap_conformal_field
from symkt.manifolds import conformal_rescale
from symkt.symtensor import SymTensor, mult_L

print("== residual-based classification ==")
field, entry = build_constructor("special-flat")
rep = classify(field, samples=25, tol=1e-11, seed=0)
print(f"{field.name} on {field.base.key}:")
for k in ("killing", "conformal", "special_conformal", "tracefree"):
    print(f"  {k:18s} {'yes' if rep.verdicts[k] else 'no':3s} "
          f"(residual {rep.max_residuals[k]:.1e})")

print()
print("== the divergence-free decomposition test ==")
hopf, _ = build_constructor("hopf-stackel")


def L_comps(x):
    K = SymTensor(3, 2, hopf.comps_fn(x))
    return list(mult_L(K).comps)


Lf = TensorField(hopf.base, 4, L_comps, name="L(hopf-stackel)")
parts = divfree_killing_parts(Lf, samples=8, tol=1e-9, seed=0)
for i, info in parts.items():
    print(f"  part {i} (degree {info['degree']}): trace-free Killing = "
          f"{info['stackel']} (d {info['d']:.1e}, delta {info['delta']:.1e})")

print()
print("== conformal rescaling g -> exp(2f) g ==")
for key in ("hopf-stackel", "product-ckt"):
    field, _ = build_constructor(key)
    base_rep = classify(field, samples=20, tol=1e-9, seed=0)
    wrapped = conformal_rescale(field.base)
    wrep = classify(wrap_conformal_field(wrapped, field),
                    samples=20, tol=1e-9, seed=0)
    print(f"{key}:")
    for k in ("killing", "conformal"):
        print(f"  {k:10s} original {'yes' if base_rep.verdicts[k] else 'no':3s}"
              f"  rescaled {'yes' if wrep.verdicts[k] else 'no':3s}")
