"""Local profiles, the potential function, quotients and strictification.

A message subspace A of a code induces a profile (V_i = functionals on A that
vanish on A & ker Enc_i).  Its potential at threshold alpha is negative
exactly when A beats alpha in the design ratio; strictification quotients
away the largest maximizer of the potential.

Run: python demos/03_profiles_and_potentials.py
"""

from fractions import Fraction

import numpy as np

from code_forge import (check_witness, field_from_order, potential, profile_from_witness, quotient_potential_identity,
                        random_linear_code, tau_profile)
from code_forge.design import design_ratio, maximal_maximizer, strictify_with_witness, strictness_counterexample
from code_forge.linalg import Subspace, random_subspace

F2 = field_from_order(2)
code = random_linear_code(F2, k=3, s=2, n=4, seed=5)
cert = tau_profile(code, 3)
A = cert.witness[3]
profile, witness = profile_from_witness(code, A)
print(f"A = {A.basis.tolist()}, ratio {design_ratio(code, A)}")
print("part dimensions:", [V.dim for V in profile.parts], "witness ok:", bool(check_witness(code, profile, witness)))

V = Subspace.full(F2, profile.dim_v)
for alpha in (Fraction(0), cert.tau_hat[3], Fraction(1)):
    print(f"  Phi(V) at alpha = {alpha}: {potential(V, profile, alpha).phi_value}")

alpha = Fraction(1, 8)
if potential(V, profile, alpha).phi_value < 0:
    W, value = maximal_maximizer(profile, alpha)
    out, w_out, _ = strictify_with_witness(profile, alpha, witness, code)
    print(f"\nstrictify at alpha = {alpha}: maximizer W of dim {W.dim} (Phi = {value}),"
          f" quotient profile on dim {out.dim_v}")
    print("  strict:", strictness_counterexample(out, alpha) is None,
          " witness ok:", bool(check_witness(code, out, w_out)))

rng = np.random.default_rng(0)
U, W = random_subspace(F2, profile.dim_v, rng), random_subspace(F2, profile.dim_v, rng)
rep = quotient_potential_identity(U, W, profile, alpha)
print(f"\nquotient identity on random U, W: lhs {rep.lhs} = rhs {rep.rhs}")
