"""Holevo-limited key agreement and two-universal authentication.

Desk-scale tools for the entropic quantities that bound an eavesdropper
(Holevo information, min-entropy, guessing probabilities), GF(2) hash
families, an exact optimal forger, a three-step key agreement simulator
and a harness that checks each analytic bound against measurement.
"""

from .adversary import (AffineKnowledge, ForgeryOutcome, QuantumSideInfo, false_acceptance_rate,
                        forgery_search, guess_quantum, linear_forgery, optimal_guess_classical)
from .entropy import (SecurityClass, binary_entropy, classify_security, cond_min_entropy, fano_invert,
                      guessing_probability, helstrom_floor, min_entropy, shannon_entropy, zero_entropy)
from .hashing import (ConcatenatedMAC, HashInstance, KeyedToeplitzMAC, collision_estimate, evaluate,
                      parse, sample_paritycheck, sample_toeplitz, serialize, tag_message)
from .protocol import ProtocolConfig, SecurityReport, Transcript, run_protocol
from .quantum import (Ensemble, KrausChannel, apply_channel, density_matrix, helstrom_success,
                      holevo_information, relative_entropy, trace_distance, von_neumann_entropy)
from .verdict import BoundCheck

__version__ = "0.1.0"
