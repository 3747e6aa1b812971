"""
Three qubits: monogamy and the residual tangle
==============================================

Pairwise entanglement of three qubits is limited by how entangled each
qubit is with the other two. The leftover is the residual tangle, which
GHZ and W states sit at opposite ends of.
"""

# %%
import numpy as np

from complementarity import measures, relations, states

# %%
for name, psi in [("GHZ", states.ghz(3)), ("W", states.w(3)), ("product", states.named_state("basis:000"))]:
    r = measures.residual_tangle(psi)
    s2 = [q.s2bar for q in measures.qubit_properties(psi.density())]
    print(f"{name:8s} tau_123={r.tau_123:.4f} pairwise=({r.tau_12:.4f}, {r.tau_13:.4f}, {r.tau_23:.4f}) "
          f"S2={np.round(s2, 4)}")

# %%
# Note that the W state keeps some predictability on each qubit,
# S2 = 1/18, which is needed for the tripartite relation to close.
rep = {r.relation_id: r for r in relations.verify_pure(states.w(3))}["eq12"]
print("W: tau_123 + 2/3 (sum tau_ij + sum S2) =", rep.lhs)

# %%
# Monogamy slack and the tripartite relation over random states.
slacks, residuals = [], []
for i in range(500):
    psi = states.random_pure(3, seed=i)
    slacks.append(relations.verify_monogamy(psi).residual)
    residuals.append({r.relation_id: r for r in relations.verify_pure(psi)}["eq12"].residual)
print(f"smallest monogamy slack {min(slacks):.4f}, largest |eq12 residual| {max(map(abs, residuals)):.1e}")
