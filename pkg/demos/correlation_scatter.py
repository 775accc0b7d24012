"""Adjacent-pixel correlation before and after encryption."""

import numpy as np

from gfht import blue_as_grayscale, encrypt_image
from gfht.metrics import DIRECTIONS, correlation_triple, scatter_pairs
from gfht.testimages import make

img = make("natural", 512)
cipher = encrypt_image(img, "scatter").image

print("layer  source   horizontal  vertical  diagonal")
for name, p, c in zip(("red", "green", "blue"), img.layers, cipher.layers):
    for src, layer in (("plain", p), ("cipher", c)):
        print("%-6s %-7s" % (name, src), "  ".join("%+.5f" % v for v in correlation_triple(layer).as_tuple()))

# the blue layer as a grayscale stand-in
gray = blue_as_grayscale(cipher)
pairs = scatter_pairs(gray, "diagonal")
print("diagonal pairs:", pairs.shape, "sample:", pairs[:3].tolist())

# a coarse 2-D histogram shows the scatter filling the square
hist, _, _ = np.histogram2d(pairs[:, 0], pairs[:, 1], bins=4, range=[[0, 256], [0, 256]])
print(hist.astype(int))
print("directions:", DIRECTIONS)
