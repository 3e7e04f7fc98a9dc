"""Exact subspace-design profile of a folded Reed-Solomon code, and of a random code.

Run: python demos/02_design_profile.py
"""

from code_forge import field_from_order, folded_rs, min_distance, random_linear_code, tau_profile

F16 = field_from_order(16)
code = folded_rs(F16, s=4, n=3, k=3)
cert = tau_profile(code, 2)
s, R = code.s, code.rate
print(f"folded RS over F_16: s={s}, n={code.n}, k={code.k}, rate {R}")
print(f"scanned {cert.subspaces_scanned} message subspaces")
for r in (1, 2):
    print(f"  tau({r}) = {cert.tau_hat[r]}   (reference s R / (s - r + 1) = {s * R / (s - r + 1)})")
    print(f"    attained by basis {cert.witness[r].basis.tolist()}")

F2 = field_from_order(2)
rnd = random_linear_code(F2, k=4, s=2, n=5, seed=11)
cert = tau_profile(rnd, 4)
dist = min_distance(rnd)
print(f"\nrandom binary code k=4, s=2, n=5: tau = {[str(cert.tau_hat[r]) for r in range(1, 5)]}")
print(f"relative distance {dist.delta}; 1 - tau(1) = {1 - cert.tau_hat[1]}")
