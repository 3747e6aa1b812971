"""
Single-particle information and pure states
===========================================

A qubit's coherence and predictability bound how much it can reveal about
itself. For pure states of several qubits, whatever a qubit does not carry
locally shows up as entanglement with the rest.
"""

# %%
import numpy as np

from complementarity import measures, relations, states

# %%
# One qubit: coherence nu, predictability p, and their mean square S2.
# A state on the equator is all coherence, a pole is all predictability.
plus = np.full((2, 2), 0.5)
up = np.diag([1.0, 0.0])
for name, rho in [("|+>", plus), ("|0>", up), ("I/2", np.eye(2) / 2)]:
    q = measures.single_qubit_properties(rho)
    print(f"{name:4s} nu={q.coherence:.3f} p={q.predictability:.3f} S2={q.s2bar:.3f} "
          f"M={measures.mixedness(rho):.3f}")

# %%
# The mixedness of a qubit and its S2 always add up to one half.
rho = states.random_mixed(1, 2, seed=4).matrix
q = measures.single_qubit_properties(rho)
print("M + S2 =", measures.mixedness(rho) + q.s2bar)

# %%
# Two qubits in a pure state: squared concurrence, coherence and
# predictability of either qubit sum to one.
psi = states.random_pure(2, seed=1)
for r in relations.verify_pure(psi):
    if r.relation_id.startswith("eq1"):
        print(r.relation_id, {k: round(v, 4) for k, v in r.terms.items()}, "sum =", round(r.lhs, 12))

# %%
# For n qubits the one-vs-rest tangles take up what the local terms leave.
for n in (2, 3, 4, 5):
    rep = {r.relation_id: r for r in relations.verify_pure(states.random_pure(n, seed=n))}["eq7"]
    print(f"n={n}: sum(tau + 2 S2) = {rep.lhs:.12f}")
