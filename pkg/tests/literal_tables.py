"""Frozen literal amplitude tables for the three-dimensional state families.

Transcribed by hand from the published construction, one entry per ket:
label tuple -> amplitude * sqrt(3). These are the reference values for the
amplitude-for-amplitude conformance tests.
"""

import numpy as np

W = np.exp(2j * np.pi / 3)

# (i, j) -> {(B digit, A digit): amplitude * sqrt(3)}
BELL_D3_LITERAL = {
    (0, 0): {(0, 0): 1, (1, 1): 1, (2, 2): 1},
    (1, 0): {(0, 0): 1, (1, 1): W, (2, 2): W**2},
    (2, 0): {(0, 0): 1, (1, 1): W**2, (2, 2): W},
    (0, 1): {(0, 1): 1, (1, 2): 1, (2, 0): 1},
    (1, 1): {(0, 1): 1, (1, 2): W, (2, 0): W**2},
    (2, 1): {(0, 1): 1, (1, 2): W**2, (2, 0): W},
    (0, 2): {(0, 2): 1, (1, 0): 1, (2, 1): 1},
    (1, 2): {(0, 2): 1, (1, 0): W, (2, 1): W**2},
    (2, 2): {(0, 2): 1, (1, 0): W**2, (2, 1): W},
}

# (B digit, A digit) -> amplitude * sqrt(3)
AUX_D3_LITERAL = {(0, 0): 1, (1, 1): 1, (2, 2): 1}

# (k, m) -> {(system digit, auxiliary digit): amplitude * sqrt(3)},
# auxiliary letters a, b, c written as digits 0, 1, 2
DECOMP_D3_LITERAL = {
    (0, 0): {(0, 0): 1, (1, 1): 1, (2, 2): 1},
    (1, 0): {(0, 0): 1, (1, 1): W, (2, 2): W**2},
    (2, 0): {(0, 0): 1, (1, 1): W**2, (2, 2): W},
    (0, 1): {(0, 2): 1, (1, 0): 1, (2, 1): 1},
    (1, 1): {(0, 2): 1, (1, 0): W, (2, 1): W**2},
    (2, 1): {(0, 2): 1, (1, 0): W**2, (2, 1): W},
    (0, 2): {(0, 1): 1, (1, 2): 1, (2, 0): 1},
    (1, 2): {(0, 1): 1, (1, 2): W, (2, 0): W**2},
    (2, 2): {(0, 1): 1, (1, 2): W**2, (2, 0): W},
}
