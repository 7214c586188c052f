"""
Entropies, Holevo information and state discrimination
=======================================================

How much can Eve learn from a qubit? This walk-through compares the Holevo
quantity with what a measurement actually achieves.
"""

import math

import numpy as np

from holevo_auth.adversary import QuantumSideInfo, guess_quantum
from holevo_auth.entropy import binary_entropy, fano_invert, min_entropy, shannon_entropy
from holevo_auth.quantum import KET0, KETPLUS, Ensemble, helstrom_success, holevo_information, pure

# Classical warm-up: Shannon entropy sits above min-entropy
p = np.array([0.7, 0.2, 0.1])
print(f"H(p) = {shannon_entropy(p):.4f}   Hmin(p) = {min_entropy(p):.4f}")

# Eve holds |0> or |+> with equal probability
rho0, rho_plus = pure(KET0), pure(KETPLUS)
chi = holevo_information(Ensemble([0.5, 0.5], [rho0, rho_plus]))
print(f"Holevo information of {{|0>, |+>}}: {chi:.5f} bits")

# The best measurement (Helstrom) guesses the bit with this probability
p_hel = helstrom_success(0.5, rho0, 0.5, rho_plus)
print(f"Helstrom success: {p_hel:.5f}")

# Fano: any strategy errs at least this often given chi bits of information
print(f"Fano error floor for m=2: {fano_invert(2, chi):.5f}  (actual error {1 - p_hel:.5f})")
print(f"binary entropy of the actual error: {binary_entropy(1 - p_hel):.5f} >= 1 - chi = {1 - chi:.5f}")

# The pretty-good measurement is close to, but never above, the optimum
angles = np.linspace(0, math.pi / 2, 7)
for a in angles:
    psi = pure([math.cos(a), math.sin(a)])
    pgm, exact = guess_quantum(QuantumSideInfo([0.5, 0.5], [0, 1], [rho0, psi]))
    print(f"angle {a:5.3f}: PGM {pgm:.4f}  Helstrom {exact:.4f}")
