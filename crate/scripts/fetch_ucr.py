#!/usr/bin/env python3
"""Assemble UCR datasets from Python packages that bundle them.

The UCR archive site is not always reachable; several PyPI packages ship
subsets of it. This script downloads those wheels with pip and writes each
split as a label-first, tab-separated UCR file:

    <out>/<Name>/<Name>_TRAIN.tsv
    <out>/<Name>/<Name>_TEST.tsv

Usage: python3 scripts/fetch_ucr.py [--out data/ucr] [--wheels DIR]
"""

import argparse
import glob
import io
import os
import subprocess
import sys
import tempfile
import zipfile

# Names follow the 2018 archive. Sets absent from every known package
# (SyntheticControl, TwoPatterns, Lightning2, Lightning7, OliveOil,
# SwedishLeaf, Yoga) must be copied into <out> by hand.
UCR_DATASETS_WHEEL = ["FiftyWords", "Adiac", "CBF", "ECG200", "Fish", "FaceAll", "FaceFour"]
AEON_TS = ["GunPoint", "OSULeaf"]


def pip_download(spec, dest, wheel_dir=None):
    if wheel_dir:
        name, version = spec.split("==")
        found = glob.glob(os.path.join(wheel_dir, f"{name.replace('-', '_')}-{version}-*.whl"))
        if found:
            return zipfile.ZipFile(found[0])
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "-d", dest, spec],
        check=True,
    )
    (wheel,) = glob.glob(os.path.join(dest, "*.whl"))
    return zipfile.ZipFile(wheel)


def write_rows(path, rows):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        for label, values in rows:
            f.write("\t".join([label] + values) + "\n")


def parse_ts(text):
    rows = []
    in_data = False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower() == "@data":
            in_data = True
            continue
        if not in_data:
            continue
        series, label = line.rsplit(":", 1)
        rows.append((label, series.split(",")))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "ucr"))
    ap.add_argument("--wheels", help="directory of already-downloaded wheels to reuse")
    args = ap.parse_args()
    out = os.path.abspath(args.out)

    with tempfile.TemporaryDirectory() as tmp:
        z = pip_download("ucr-datasets==0.0.6", os.path.join(tmp, "a"), args.wheels)
        for name in UCR_DATASETS_WHEEL:
            for split in ("TRAIN", "TEST"):
                data = z.read(f"ucr_datasets/data/{name}_{split}.tsv")
                path = os.path.join(out, name, f"{name}_{split}.tsv")
                os.makedirs(os.path.dirname(path), exist_ok=True)
                with open(path, "wb") as f:
                    f.write(data)

        z = pip_download("aeon==1.3.0", os.path.join(tmp, "b"), args.wheels)
        for name in AEON_TS:
            for split in ("TRAIN", "TEST"):
                text = z.read(f"aeon/datasets/data/{name}/{name}_{split}.ts").decode()
                write_rows(os.path.join(out, name, f"{name}_{split}.tsv"), parse_ts(text))

        z = pip_download("tslearn==0.9.0", os.path.join(tmp, "c"), args.wheels)
        import numpy as np

        arrays = np.load(io.BytesIO(z.read("tslearn/.cached_datasets/Trace.npz")))
        for split, xs, ys in (("TRAIN", "X_train", "y_train"), ("TEST", "X_test", "y_test")):
            x = arrays[xs][:, :, 0]
            y = arrays[ys]
            rows = [(str(int(l)), [repr(float(v)) for v in row]) for l, row in zip(y, x)]
            write_rows(os.path.join(out, "Trace", f"Trace_{split}.tsv"), rows)

    for name in sorted(os.listdir(out)):
        print(name)


if __name__ == "__main__":
    main()
