#!/usr/bin/env python3
"""Convert UCI Adult `adult.data` (no header, ", " separated) into a headered CSV."""
import csv
import sys

COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]


def main(src, dst):
    with open(src) as fin, open(dst, "w", newline="") as fout:
        writer = csv.writer(fout, lineterminator="\n")
        writer.writerow(COLUMNS)
        for line in fin:
            fields = [f.strip() for f in line.strip().split(",")]
            if len(fields) != len(COLUMNS):
                continue
            writer.writerow(fields)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit("usage: adult_to_csv.py adult.data adult.csv")
    main(sys.argv[1], sys.argv[2])
