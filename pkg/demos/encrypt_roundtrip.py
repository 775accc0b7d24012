"""Encrypt a generated image, serialize the envelope, and decrypt it again."""

import numpy as np

from gfht import decrypt, encrypt_image, keys_for_image
from gfht.cipher import CipherEnvelope
from gfht.metrics import diff_stats
from gfht.testimages import make

img = make("natural", 256)
print("plaintext", img.shape, "first row of red:", img.red[0, :8])

# the salt comes from the image itself, so keys are fresh per image
keys = keys_for_image("tulip", img)
print("salt", keys.salt.hex(), "first row permutation entries", keys.v_key[:6])

env = encrypt_image(img, "tulip", rounds=3)
blob = env.to_bytes()
print("envelope bytes:", len(blob), "header:", blob[:18].hex())

restored = decrypt(CipherEnvelope.from_bytes(blob), "tulip")
print("round trip exact:", restored == img)

# the wrong passphrase decrypts to noise
garbage = decrypt(env, "tulips")
print("wrong passphrase NPCR vs plaintext: %.2f%%" % diff_stats(garbage, img).npcr_percent)
print("cipher red first row:", env.image.red[0, :8])
counts = np.bincount(env.image.red.ravel(), minlength=256)
print("cipher red byte counts: min %d, max %d (flat would be %d)" % (counts.min(), counts.max(), counts.sum() // 256))
