"""Welch and Wiener-Khinchin spectra of ciphertext streams."""

import numpy as np

from gfht import encrypt_image
from gfht.metrics import serialize_image
from gfht.spectral import coefficient_of_variation, periodogram, psd_2d, psd_flatness, psd_wiener_khinchin, welch_psd
from gfht.testimages import make

img = make("blocks", 1024)
cipher = encrypt_image(img, "spectrum").image
stream = serialize_image(cipher, "horizontal")[: 1 << 20]
noise = np.random.default_rng(0).integers(0, 256, stream.size, dtype=np.uint8)

for label, data in (("cipher", stream), ("noise", noise)):
    w = welch_psd(data, 1024, 0.5)
    mean_db, ripple = psd_flatness(w)
    print("%-6s mean %.3f dB  ripple %.3f dB  DC %.1f dB" % (label, mean_db, ripple, w.power_db[0]))

# the two spectrum paths agree on any input
x = stream[:2048].astype(float)
a, b = periodogram(x).power, psd_wiener_khinchin(x).power
print("max relative gap periodogram vs autocorrelation route: %.1e" % np.max(np.abs(a - b) / a))

for name, p, c in zip("RGB", img.layers, cipher.layers):
    print("layer %s  2-D spectrum CV  plain %.1f  cipher %.3f" % (name, coefficient_of_variation(psd_2d(p)), coefficient_of_variation(psd_2d(c))))
