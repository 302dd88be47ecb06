"""Rebuild data/*.csv from the KEEL repository copies shipped in the keel-ds wheel.

    pip download --no-deps -d /tmp/wheels keel-ds
    python scripts/build_datasets.py --wheel /tmp/wheels/keel_ds-0.2.5-py3-none-any.whl

Glass only ships as one-vs-rest binary files.  glass0/1/4/5/6 share row order
(classes 1, 2, 5, 6, 7 in the UCI numbering); rows positive in none of them are
class 3 (vehicle windows, float processed).
"""

import argparse
import csv
import zipfile
from collections import Counter
from pathlib import Path

BALANCED = "keel_ds/data/balanced/raw/"
IMBALANCED = "keel_ds/data/imbalanced/raw/"

SOURCES = {
    "vehicle": BALANCED + "vehicle.dat",
    "iris": BALANCED + "iris.dat",
    "wine": BALANCED + "wine.dat",
    "liver": BALANCED + "bupa.dat",
    "pima": BALANCED + "pima.dat",
    "breast_cancer": BALANCED + "wisconsin.dat",
    "ionosphere": BALANCED + "ionosphere.dat",
}
GLASS_PARTS = {"glass0": "1", "glass1": "2", "glass4": "5", "glass5": "6", "glass6": "7"}


def parse_dat(text):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([field.strip() for field in line.split(",")])
    return rows


def glass_rows(archive):
    parts = {
        name: parse_dat(archive.read(IMBALANCED + name + ".dat").decode())
        for name in GLASS_PARTS
    }
    base = parts["glass0"]
    out = []
    for i, row in enumerate(base):
        hits = [GLASS_PARTS[n] for n, rows in parts.items() if rows[i][-1] == "positive"]
        if any(rows[i][:-1] != row[:-1] for rows in parts.values()):
            raise ValueError(f"glass parts disagree at row {i}")
        if len(hits) > 1:
            raise ValueError(f"glass row {i} positive in several parts: {hits}")
        out.append(row[:-1] + [hits[0] if hits else "3"])
    return out


def write_csv(path, rows):
    n_features = len(rows[0]) - 1
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j + 1}" for j in range(n_features)] + ["class"])
        writer.writerows(rows)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--wheel", required=True, type=Path)
    parser.add_argument("--out", default=Path(__file__).resolve().parents[1] / "data", type=Path)
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(args.wheel) as archive:
        tables = {name: parse_dat(archive.read(member).decode()) for name, member in SOURCES.items()}
        tables["glass"] = glass_rows(archive)

    for name, rows in sorted(tables.items()):
        write_csv(args.out / f"{name}.csv", rows)
        counts = Counter(r[-1] for r in rows)
        print(f"{name:14s} rows={len(rows):4d} features={len(rows[0]) - 1:3d} classes={dict(counts)}")


if __name__ == "__main__":
    main()
