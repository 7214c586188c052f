"""
Forging a tag
=============

Two ways to build a MAC from a two-universal family. Hashing key||message
through a public instance is affine in the message, so one genuine pair
gives every other tag away. Letting the key pick the instance leaves Eve
with a 2^-d chance.
"""

import numpy as np

from holevo_auth import gf2
from holevo_auth.adversary import forgery_search
from holevo_auth.hashing import ConcatenatedMAC, KeyedToeplitzMAC, sample_toeplitz

rng = np.random.default_rng(7)
key_bits = 8
prior = np.full((1 << key_bits, 1), 2.0 ** -key_bits)  # Eve knows nothing about the key
key = rng.integers(0, 2, key_bits, dtype=np.uint8)

# Public hash, tag = h(key || message)
h = sample_toeplitz(key_bits + 4, 3, rng)
concat = ConcatenatedMAC(h, key_bits)
msg = np.array([1, 0, 1, 1], np.uint8)
out = forgery_search(prior, h, (msg, concat.tag(key, msg)), e=0, true_key=key)
print(f"public-hash MAC: Eve picks M'={gf2.bits_to_int(out.message)}, "
      f"success {out.success_rate:.3f}, accepted: {out.accepted}")

# Keyed Toeplitz MAC with the same key length
for d in (1, 2, 3, 4):
    mac = KeyedToeplitzMAC.for_key_length(key_bits, d)
    m = rng.integers(0, 2, mac.message_bits, dtype=np.uint8)
    out = forgery_search(prior, mac, (m, mac.tag(key, m)), e=0, true_key=key)
    print(f"keyed MAC d={d}: success {out.success_rate:.4f} (2^-d = {2.0 ** -d:.4f})")

# If Eve already knows the key, nothing helps
mac = KeyedToeplitzMAC.for_key_length(key_bits, 3)
known = np.eye(1 << key_bits) / (1 << key_bits)
k_int = gf2.bits_to_int(key)
m = np.zeros(mac.message_bits, np.uint8)
out = forgery_search(known, mac, (m, mac.tag(key, m)), e=k_int, true_key=key)
print(f"known key: success {out.success_rate:.1f}, accepted: {out.accepted}")
