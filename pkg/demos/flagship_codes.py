"""Build the two unit-memory quantum convolutional codes and inspect them.

    python3 demos/flagship_codes.py
"""

from qconvbch import construct_conv_bch, qcbch_euclidean, qcbch_hermitian, quantum_free_distance_oracle
from qconvbch.convbch import verify_code
from qconvbch.polymat import symplectic_check

# Binary BCH parent of length 31, designed distance 7, cut after the first 3 exponents.
classical = construct_conv_bch(31, 2, 3)
print("classical generator:", classical.generator.rows, "x", classical.n, "memory", classical.memory)
for name, bound in classical.bounds.items():
    print(f"  {name:14s} {bound.value:3d}  ({bound.source})")

report = verify_code(classical)
for check in report.checks:
    print(f"  {check.name:32s} {check.status}")

S = qcbch_euclidean(31, 2, 3)
print("\nCSS code", S.parameters(), "kappa", S.kappa, "df >=", S.df_lower.value, "purity", S.purity_bound.value)
print("stabilizer commutes:", symplectic_check(S.X, S.Z))
d = quantum_free_distance_oracle(S)
print("free distance of the stabilizer quotient:", d)

# Over GF(4) the Hermitian inner product allows length 85.
H = qcbch_hermitian(85, 2, 2)
print("\nHermitian code", H.parameters(), "kappa", H.kappa, "df >=", H.df_lower.value)
print("stabilizer commutes:", symplectic_check(H.X, H.Z))
