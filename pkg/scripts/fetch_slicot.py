#!/usr/bin/env python3
"""Fetch the SLICOT model-reduction benchmarks and convert them to Matrix Market.

Downloads the zipped .mat archives from the SLICOT benchmark collection
(http://slicot.org/20-site/126-benchmark-examples-for-model-reduction),
extracts the E, A, B, C matrices and writes <name>.E.mtx / .A.mtx / .B.mtx
/ .C.mtx under the data directory (default: ./data). Benchmarks without an
E matrix get none written; the loader then uses the identity.

Usage: python3 scripts/fetch_slicot.py [--dest data] [name ...]
"""
import argparse
import io
import os
import sys
import urllib.request
import zipfile

import numpy as np
import scipy.io
import scipy.sparse as sp

BASE = "http://slicot.org/objects/software/shared/bench-data"

BENCHMARKS = {
    "MNA_4": f"{BASE}/mna_4.zip",
    "tline": f"{BASE}/tline.zip",
    "iss": f"{BASE}/iss.zip",
}


def convert(name, blob, dest):
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        mat_names = [n for n in zf.namelist() if n.lower().endswith(".mat")]
        if not mat_names:
            raise RuntimeError(f"{name}: no .mat file in archive")
        data = scipy.io.loadmat(io.BytesIO(zf.read(mat_names[0])))
    for key in ("A", "B", "C", "E"):
        if key not in data:
            if key == "E":
                continue
            raise RuntimeError(f"{name}: matrix {key!r} missing from .mat file")
        M = data[key]
        path = os.path.join(dest, f"{name}.{key}.mtx")
        scipy.io.mmwrite(path, sp.coo_matrix(M) if sp.issparse(M) else np.atleast_2d(M))
        print(f"wrote {path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", default=list(BENCHMARKS), help="benchmarks to fetch")
    parser.add_argument("--dest", default="data")
    args = parser.parse_args()
    os.makedirs(args.dest, exist_ok=True)
    failed = []
    for name in args.names or list(BENCHMARKS):
        url = BENCHMARKS.get(name)
        if url is None:
            print(f"unknown benchmark {name!r}; known: {', '.join(BENCHMARKS)}", file=sys.stderr)
            failed.append(name)
            continue
        try:
            print(f"fetching {url}")
            with urllib.request.urlopen(url, timeout=60) as resp:
                blob = resp.read()
            convert(name, blob, args.dest)
        except Exception as exc:  # noqa: BLE001 - report and continue
            print(f"failed to fetch {name}: {exc}", file=sys.stderr)
            failed.append(name)
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
