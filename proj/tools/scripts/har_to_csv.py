#!/usr/bin/env python3
"""Flatten the UCI HAR release (X/y/subject text files) into one headered CSV.

usage: har_to_csv.py "UCI HAR Dataset" har.csv

Train and test partitions are concatenated; columns are feature_001 ..
feature_561, activity, subject.
"""
import csv
import os
import sys


def rows(root, part):
    base = os.path.join(root, part)
    with open(os.path.join(base, f"X_{part}.txt")) as fx, \
         open(os.path.join(base, f"y_{part}.txt")) as fy, \
         open(os.path.join(base, f"subject_{part}.txt")) as fs:
        for x, y, s in zip(fx, fy, fs):
            yield x.split() + [y.strip(), s.strip()]


def main(root, dst):
    header = [f"feature_{i:03d}" for i in range(1, 562)] + ["activity", "subject"]
    with open(dst, "w", newline="") as fout:
        writer = csv.writer(fout, lineterminator="\n")
        writer.writerow(header)
        for part in ("train", "test"):
            for row in rows(root, part):
                writer.writerow(row)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
