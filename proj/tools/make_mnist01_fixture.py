#!/usr/bin/env python3
"""Build the MNIST 0-vs-1 IDX fixture used by the acceptance suite.

Source: the 5000-sample MNIST subset bundled with the mlxtend wheel
(mlxtend/data/data/mnist_5k.csv.gz: 784 pixel columns then the label).
Writes the first N zeros and first N ones, interleaved, as IDX files.
"""
import argparse
import gzip
import struct
import zipfile


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("wheel", help="path to an mlxtend-*.whl")
    ap.add_argument("--per-class", type=int, default=300)
    ap.add_argument("--out", default="tests/data/mnist01")
    args = ap.parse_args()

    raw = zipfile.ZipFile(args.wheel).read("mlxtend/data/data/mnist_5k.csv.gz")
    rows = gzip.decompress(raw).decode().splitlines()
    by_class = {0: [], 1: []}
    for line in rows:
        vals = [int(float(v)) for v in line.split(",")]
        label = vals[-1]
        if label in by_class and len(by_class[label]) < args.per_class:
            by_class[label].append(bytes(vals[:-1]))

    images, labels = [], []
    for a, b in zip(by_class[0], by_class[1]):
        images += [a, b]
        labels += [0, 1]

    with open(args.out + "-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for img in images:
            f.write(img)
    with open(args.out + "-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


if __name__ == "__main__":
    main()
