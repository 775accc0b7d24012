"""Single-pixel sensitivity: zero one value, encrypt both, compare."""

import numpy as np

from gfht.metrics import avalanche_campaign, avalanche_npcr
from gfht.testimages import KINDS, make

img = make("xray", 256)
one = avalanche_npcr(img, "passphrase", (100, 37, 2))
print("one trial: NPCR %.3f%%  UACI %.3f%%" % (one.npcr_percent, one.uaci_percent))
for name, (n, u) in zip("RGB", one.per_layer):
    print("   layer %s  NPCR %.3f  UACI %.3f" % (name, n, u))

rng = np.random.default_rng(0)
for kind in KINDS:
    trials = avalanche_campaign(make(kind, 256), "passphrase", 25, rng)
    npcr = np.array([t.npcr_percent for t in trials])
    uaci = np.array([t.uaci_percent for t in trials])
    print("%-8s NPCR mean %.3f (min %.3f)  UACI mean %.3f" % (kind, npcr.mean(), npcr.min(), uaci.mean()))

# the ideal UACI for independent uniform bytes, by exhaustive enumeration
x, y = np.meshgrid(np.arange(256), np.arange(256))
print("ideal UACI: %.4f%%" % (100 * np.abs(x - y).mean() / 255))
