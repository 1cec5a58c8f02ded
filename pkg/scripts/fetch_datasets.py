#!/usr/bin/env python3
"""Download the benchmark graphs used by the acceptance suite.

Run from anywhere; files land in ./data by default:

    python3 scripts/fetch_datasets.py            # the three SNAP graphs + PPI
    python3 scripts/fetch_datasets.py --all      # also soc-Epinions1 (large)
    python3 scripts/fetch_datasets.py --data-dir /elsewhere

Sources:
  * ca-HepTh, ca-AstroPh, wiki-Vote, soc-Epinions1: SNAP
    (https://snap.stanford.edu/data/).
  * ppi: the protein-protein interaction graph in the edge split
    distribution of the asymmetric-projection link prediction datasets
    (http://sami.haija.org/graph/datasets.zip); the union of its train and
    test edges is the full graph.  Expected size: 3,852 nodes / 20,881
    edges.  If the download is unavailable, place any equivalent edge list
    at data/ppi.txt yourself.

The script prints parsed node/edge counts next to the expected values so
a bad download is obvious immediately.
"""

import argparse
import gzip
import io
import shutil
import sys
import urllib.request
import zipfile
from pathlib import Path

SNAP = {
    "ca-HepTh.txt": "https://snap.stanford.edu/data/ca-HepTh.txt.gz",
    "ca-AstroPh.txt": "https://snap.stanford.edu/data/ca-AstroPh.txt.gz",
    "wiki-Vote.txt": "https://snap.stanford.edu/data/wiki-Vote.txt.gz",
}
SNAP_OPTIONAL = {
    "soc-Epinions1.txt": "https://snap.stanford.edu/data/soc-Epinions1.txt.gz",
}
PPI_ZIP = "http://sami.haija.org/graph/datasets.zip"

# (nodes, edges, directed) of the largest weakly connected component
EXPECTED = {
    "ca-HepTh.txt": (8638, 24827, False),
    "ca-AstroPh.txt": (17903, 197031, False),
    "wiki-Vote.txt": (7066, 103663, True),
    "ppi.txt": (3852, 20881, False),
    "soc-Epinions1.txt": (75877, 508836, True),
}


def fetch(url: str) -> bytes:
    print(f"  downloading {url}")
    with urllib.request.urlopen(url, timeout=120) as resp:
        return resp.read()


def fetch_snap(data_dir: Path, name: str, url: str) -> None:
    target = data_dir / name
    if target.exists():
        print(f"{name}: already present")
        return
    raw = fetch(url)
    target.write_bytes(gzip.decompress(raw))
    print(f"{name}: wrote {target}")


def fetch_ppi(data_dir: Path) -> None:
    target = data_dir / "ppi.txt"
    if target.exists():
        print("ppi.txt: already present")
        return
    try:
        import numpy as np
        raw = fetch(PPI_ZIP)
        with zipfile.ZipFile(io.BytesIO(raw)) as zf:
            names = [n for n in zf.namelist() if "/ppi/" in n]
            train = [n for n in names if n.endswith("train.txt.npy")]
            test = [n for n in names if n.endswith("test.txt.npy")
                    and "neg" not in n]
            if not train or not test:
                raise RuntimeError(f"unexpected zip layout: {names[:10]}")
            edges = np.concatenate([
                np.load(io.BytesIO(zf.read(train[0]))),
                np.load(io.BytesIO(zf.read(test[0])))])
        with target.open("w") as fh:
            for a, b in edges:
                fh.write(f"{int(a)} {int(b)}\n")
        print(f"ppi.txt: wrote {target} ({len(edges)} edge listings)")
    except Exception as exc:
        print(f"ppi.txt: automatic fetch failed ({exc}).\n"
              "  Provide data/ppi.txt manually: an undirected edge list "
              "whose largest component has 3,852 nodes and 20,881 edges.")


def verify(data_dir: Path) -> None:
    try:
        import egosplit as eg
    except ImportError:
        print("egosplit not installed; skipping verification")
        return
    print("\nverifying largest connected components:")
    for name, (nodes, edges, directed) in EXPECTED.items():
        path = data_dir / name
        if not path.exists():
            continue
        g = eg.largest_connected_component(
            eg.load_edge_list(path, directed=directed))
        status = "ok" if (g.num_nodes, g.num_edges) == (nodes, edges) \
            else "MISMATCH"
        print(f"  {name}: {g.num_nodes} nodes / {g.num_edges} edges "
              f"(expected {nodes} / {edges}) {status}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data-dir", default="data")
    ap.add_argument("--all", action="store_true",
                    help="also fetch the large soc-Epinions1 graph")
    args = ap.parse_args()
    data_dir = Path(args.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    sources = dict(SNAP)
    if args.all:
        sources.update(SNAP_OPTIONAL)
    failures = 0
    for name, url in sources.items():
        try:
            fetch_snap(data_dir, name, url)
        except Exception as exc:
            print(f"{name}: download failed ({exc})")
            failures += 1
    fetch_ppi(data_dir)
    verify(data_dir)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
