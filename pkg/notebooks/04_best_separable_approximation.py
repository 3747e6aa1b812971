"""
Best separable approximation
============================

Any two-qubit state splits into a separable part and a single entangled
pure state. The solver finds the split with the most separable weight and
checks how the spin-flip overlap and the concurrence distribute over it.
"""

# %%
import numpy as np

from complementarity import lewenstein_sanpera as ls
from complementarity import measures, states

# %%
# Werner states: the separable weight falls linearly once the state is
# entangled, and the entangled part is the Bell state itself.
for lam in (0.2, 0.4, 0.6, 0.8, 1.0):
    rho = states.werner(lam)
    lsd = ls.best_separable_approximation(rho)
    reps = {r.relation_id: r for r in ls.verify_ls(rho, lsd)}
    print(f"lambda_w={lam:.1f} separable weight={lsd.lam:.6f} "
          f"eq22 residual={reps['eq22'].residual:+.1e} eq23 residual={reps['eq23'].residual:+.1e}")

# %%
# The spin-flip expansion holds for any decomposition. The concurrence
# identity is exact for rank two but not in general: on higher-rank inputs
# the optimal entangled part can carry slightly more concurrence than rho.
for rank in (2, 3, 4):
    worst, k = 0.0, 0
    found = 0
    while found < 20:
        rho = states.random_mixed(2, rank, seed=(rank, k)).matrix
        k += 1
        if measures.is_ppt(rho):
            continue
        found += 1
        lsd = ls.best_separable_approximation(rho)
        worst = max(worst, abs({r.relation_id: r for r in ls.verify_ls(rho, lsd)}["eq23"].residual))
    print(f"rank {rank}: largest |C(rho) - (1 - lambda) C(psi_e)| over 20 entangled states = {worst:.1e}")

# %%
# Certificates: the separable part is positive and has positive partial transpose.
rho = states.random_mixed(2, 4, seed=(9, 0)).matrix
lsd = ls.best_separable_approximation(rho)
print(lsd.method, lsd.certificates, "reconstruction error",
      np.linalg.norm(rho - lsd.reconstruct()))
