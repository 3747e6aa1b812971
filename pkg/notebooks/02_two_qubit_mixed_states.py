"""
Mixed two-qubit states: spin-flip symmetry and separable uncertainty
====================================================================

For a mixed state the spin-flip overlap Tr(rho rho~) no longer equals the
tangle. The difference, together with the mixedness, is the separable
uncertainty eta. This script tabulates the Werner and MEMS families.
"""

# %%
import warnings

import numpy as np

from complementarity import measures, relations, states

warnings.simplefilter("ignore", measures.NumericalNoiseWarning)

# %%
# Werner states are symmetric under the spin flip, so they carry no local
# information at all. eta and tau then split the unit budget between them.
print(" lambda      tau      eta   eta+tau")
for lam in states.werner_grid(0.1):
    rho = states.werner(lam)
    tau, eta = measures.tangle(rho), measures.separable_uncertainty(rho)
    print(f"{lam:7.2f} {tau:8.4f} {eta:8.4f} {eta + tau:9.6f}")

# %%
# The tangle switches on at lambda = 1/3, exactly where the partial
# transpose acquires a negative eigenvalue.
for lam in (0.30, 0.33, 0.34, 0.40):
    rho = states.werner(lam)
    print(f"lambda={lam:.2f} ppt_min={measures.ppt_min_eigenvalue(rho):+.4f} tau={measures.tangle(rho):.5f}")

# %%
# In the MEMS family all of the mixedness is separable uncertainty.
for x1, x2 in [(0.5, 0.5), (0.4, 0.3), (0.2, 0.2), (0.7, 0.1)]:
    rho = states.mems(x1, x2)
    print(f"x=({x1}, {x2}) M={measures.mixedness(rho):.4f} eta={measures.separable_uncertainty(rho):.4f}")

# %%
# Every two-qubit relation on a random full-rank state, with residuals.
rho = states.random_mixed(2, 4, seed=12)
for r in relations.verify_two_qubit(rho):
    print(f"{r.relation_id:5s} lhs={r.lhs:.6f} rhs={r.rhs:.6f} residual={r.residual:+.1e}")

# %%
# The canonical nine-parameter form: the spin-flip overlap plus mixedness
# written through population variances and covariances.
p = states.Form15Params((0.4, 0.1, 0.2, 0.3), a=0.02, e=0.1 + 0.05j, f=0.03)
rep = relations.verify_eq16(p)
print("variances", np.round(rep.variances, 4), "covariances", rep.covariances)
print(f"lhs={rep.lhs:.12f} rhs={rep.rhs:.12f} coherences={rep.coherences}")
