#!/usr/bin/env python3
"""Write small public benchmark sets as SVMlight train/test files.

Uses the datasets bundled with scikit-learn, so no download is needed.
Features are min-max scaled to [0, 1] on the training split.
"""

import argparse
from pathlib import Path

import numpy as np
from sklearn.datasets import dump_svmlight_file, load_breast_cancer, load_digits
from sklearn.model_selection import train_test_split


def binary_sets():
    bc = load_breast_cancer()
    # malignant (target 0) is the positive class
    yield "breast_cancer", bc.data, np.where(bc.target == 0, 1, -1)
    dg = load_digits()
    # digit 8 against the rest: about 10% positives
    yield "digits8", dg.data, np.where(dg.target == 8, 1, -1)
    # digits 0-4 against 5-9: balanced
    yield "digits_lo", dg.data, np.where(dg.target < 5, 1, -1)


def scale(train, test):
    lo = train.min(axis=0)
    span = train.max(axis=0) - lo
    span[span == 0] = 1.0
    return (train - lo) / span, (test - lo) / span


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for name, x, y in binary_sets():
        xtr, xte, ytr, yte = train_test_split(
            x, y, test_size=0.3, random_state=args.seed, stratify=y)
        xtr, xte = scale(xtr, xte)
        for split, xs, ys in (("train", xtr, ytr), ("test", xte, yte)):
            path = args.out / f"{name}.{split}.svml"
            dump_svmlight_file(xs, ys, str(path), zero_based=False)
            print(f"{path}: {xs.shape[0]} x {xs.shape[1]}, {int((ys > 0).sum())} positive")

    tiny = args.out / "tiny.svml"
    tiny.write_text(
        "+1 1:1 2:0.5\n"
        "+1 1:0.8 3:0.2\n"
        "-1 2:-0.4 3:1\n"
        "-1 1:-1 2:0.1\n"
        "-1 1:-0.3 3:-0.6\n"
        "+1 2:0.9 3:0.3\n")
    print(f"{tiny}: 6 x 3")


if __name__ == "__main__":
    main()
