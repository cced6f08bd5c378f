#!/usr/bin/env python3
"""Tour of the three quantum f-divergence families on qubit pairs.

Covers: agreement with the classical value on commuting states, the
dominance of the maximal (matsumoto) family, the KL specializations,
hockey-stick divergence at gamma = 1 as trace distance, and the Pinsker
lower bound next to the trace-norm reverse bound -- including a pair
showing that the reverse bound is a theorem only for the ht family.
"""

import numpy as np

import qcontract as qc

f_cat = qc.f_catalog()

print("=== commuting pair: everything collapses to the classical value ===")
u, _ = np.linalg.qr(np.array([[1.0, 1.0], [1.0, -1.0]]) + 0.3j * np.eye(2))
p, q = np.array([0.8, 0.2]), np.array([0.55, 0.45])
rho = qc.validate_density(u @ np.diag(p) @ u.conj().T)
sig = qc.validate_density(u @ np.diag(q) @ u.conj().T)
for fname in ("kl", "chi2", "hellinger"):
    spec = f_cat[fname]
    classical = float(np.sum(q * spec.f(p / q)))
    row = "  ".join(
        f"{fam}={qc.evaluate(spec.with_family(fam), rho, sig).value:.10f}"
        for fam in qc.FAMILIES
    )
    print(f"  f={fname:<10} classical={classical:.10f}  {row}")

print("\n=== non-commuting pair: matsumoto dominates, ht vs petz can go either way ===")
rho = qc.validate_density(np.array([[0.65, 0.15 + 0.1j], [0.15 - 0.1j, 0.35]]))
sig = qc.validate_density(np.array([[0.4, -0.05j], [0.05j, 0.6]]))
for fname in ("kl", "hellinger"):
    spec = f_cat[fname]
    vals = {fam: qc.evaluate(spec.with_family(fam), rho, sig).value
            for fam in qc.FAMILIES}
    print(f"  f={fname:<10} " + "  ".join(f"{k}={v:.8f}" for k, v in vals.items()))
print("  (for f=kl: ht and petz both equal Tr[rho(log rho - log sig)];")
print("   matsumoto equals Tr[rho log(rho^{1/2} sig^{-1} rho^{1/2})])")

print("\n=== hockey-stick divergence ===")
tv = qc.trace_distance(rho, sig)
print(f"  E_1(rho||sig) = {qc.hockey_stick(rho, sig, 1.0):.10f}"
      f"  == trace distance {tv:.10f}")
for gamma in (1.5, 2.0, 3.0):
    print(f"  E_{gamma}(rho||sig) = {qc.hockey_stick(rho, sig, gamma):.10f}")

print("\n=== Pinsker floor and the trace-norm reverse bound ===")
spec = f_cat["kl"]
floor = spec.pinsker_constant * (2 * tv) ** 2 / 4
bound, applicable = qc.reverse_pinsker_bound(spec, rho, sig)
print(f"  Pinsker floor (f=kl): {floor:.8f}")
print(f"  reverse bound: {bound:.8f}  applicable={applicable}")
for fam in qc.FAMILIES:
    v = qc.evaluate(spec.with_family(fam), rho, sig).value
    mark = "<= bound" if v <= bound + 1e-8 else "EXCEEDS bound"
    print(f"    D_{fam:<10} = {v:.8f}  {mark}")
print("  The matsumoto value exceeds the bound on this applicable pair:")
print("  the trace-norm reverse bound is a theorem for the ht family only;")
print("  petz and matsumoto violate it on most applicable pairs.")
