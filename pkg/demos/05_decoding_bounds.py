"""List decoding, list recovery and curve decoding checked by brute force on a small code.

Run: python demos/05_decoding_bounds.py
"""

from fractions import Fraction

from code_forge import (AdditiveCode, DecodingQuery, curve_decoding_check, field_from_order, list_decoding_check,
                        list_recovery_check, tau_profile)

F2 = field_from_order(2)
code = AdditiveCode(F2, 3, 2, 4, [[[0, 1, 1], [1, 0, 0]], [[1, 1, 0], [0, 1, 0]],
                                  [[0, 1, 0], [0, 1, 1]], [[0, 0, 1], [1, 1, 1]]])
cert = tau_profile(code, 4)
print("tau =", {r: str(t) for r, t in cert.tau_hat.items()})

for r in (2, 3):
    rep = list_decoding_check(code, cert, r)
    print(f"list decoding r={r}: min sum of distances {rep.minimum} >= bound {rep.bound}: {rep.verdict}"
          f" (y = {rep.received}, codewords {rep.codewords})")

rep = list_recovery_check(code, cert, ell=2, epsilon=Fraction(1, 2))
print(f"list recovery ell=2: radius {rep.radius}, worst count {rep.worst_count} <= {rep.bound:.3f}: {rep.verdict}"
      f" over {rep.collections_scanned} list collections")

rep = curve_decoding_check(code, cert, DecodingQuery(ell=1, trials=100), r=4, epsilon=Fraction(1, 2), seed=0)
print(f"curve decoding: {rep.applicable} applicable planted trials, min slack {rep.min_slack}: {rep.verdict}")
