"""Free distance from the state trellis, checked against plain path enumeration.

    python3 demos/trellis_vs_enumeration.py
"""

import itertools

import numpy as np

from qconvbch.galois import make_field
from qconvbch.polymat import PolyMatrix, certify_reduced_basic, encode, free_distance

GF2 = make_field(2, 1)

# The textbook rate-1/2 code with generators 1+D+D^2 and 1+D^2.
G = PolyMatrix.from_polys(GF2, [[[1, 1, 1], [1, 0, 1]]])
cert = certify_reduced_basic(G)
print("basic:", cert.basic, " reduced:", cert.reduced, " memory:", G.memory)
print("trellis free distance:", free_distance(G))

# Every input of length <= 8 with a nonzero first bit, encoded and weighed.
best = None
for length in range(1, 9):
    for tail in itertools.product((0, 1), repeat=length - 1):
        u = np.array((1, *tail))
        w = int(np.count_nonzero(encode(G, u).frames))
        best = w if best is None else min(best, w)
print("lightest encoded word by enumeration:", best)
