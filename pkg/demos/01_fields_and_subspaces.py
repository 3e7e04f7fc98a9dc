"""Finite fields and subspace enumeration.

Run: python demos/01_fields_and_subspaces.py
"""

from code_forge import field_from_order
from code_forge.linalg import Subspace, enumerate_subspaces, gaussian_binomial, subspace_count

F8 = field_from_order(8)
print(f"F_8 modulus (constant term first): {list(F8.modulus)}, primitive element: {F8.primitive}")
x = 2  # the class of x
print("powers of x:", [F8.pow(x, e) for e in range(8)])
print("inverse of 5:", F8.inv(5), "check:", F8.mul(5, F8.inv(5)))

F3 = field_from_order(3)
print("\nsubspaces of F_3^3 by dimension:", [gaussian_binomial(3, d, 3) for d in range(4)])
print("nonzero subspaces of dim <= 2:", subspace_count(3, 2, 3))
first = list(enumerate_subspaces(3, 1, F3))[:4]
print("first lines in canonical order:", [S.basis.tolist() for S in first])

U = Subspace(F3, 3, [[1, 2, 0], [0, 1, 1]])
W = Subspace(F3, 3, [[1, 0, 0]])
print(f"\ndim U = {U.dim}, dim W = {W.dim}, dim(U & W) = {(U & W).dim}, dim(U + W) = {(U + W).dim}")
