"""Eigenvalues of standardized layers against the unit-disk law."""

import numpy as np

from gfht import encrypt_image
from gfht.rmt import calibrate_ks_threshold, rmt_stats
from gfht.testimages import make

N = 256  # 512 matches the acceptance run but takes a few seconds per layer

img = make("natural", N)
cipher = encrypt_image(img, "disk").image
threshold = calibrate_ks_threshold(N, trials=500)
print("KS threshold (99th percentile of ideal samples): %.4f" % threshold)

for src, im in (("plain", img), ("cipher", cipher)):
    for name, layer in zip(("red", "green", "blue"), im.layers):
        st, eigs = rmt_stats(layer)
        radial = "  ".join("r=%.1f: %.3f (ideal %.2f)" % (r, f, r * r) for r, f in st.radial.items())
        print("%-6s %-5s %s  ks %.4f" % (src, name, radial, st.ks_radial))

# angular balance of the cipher red spectrum
_, eigs = rmt_stats(cipher.red)
angles = np.angle(eigs.values)
print("eigenvalues in upper / lower half plane:", np.sum(angles > 0), np.sum(angles < 0))
