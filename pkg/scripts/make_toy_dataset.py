#!/usr/bin/env python3
"""Regenerate the bundled toy dataset (data/toy) deterministically.

Twenty-odd small standard-motif cells with synthetic formation-energy
labels: enough variety (site counts 1..12, cubic/hexagonal/triclinic) for
every pipeline command to run offline in seconds.  Labels are a smooth
function of mean atomic number plus seeded noise; they are NOT physical.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

SEED = 202406
OUT = Path(__file__).resolve().parent.parent / "data" / "toy"


def cubic(a):
    return [[a, 0.0, 0.0], [0.0, a, 0.0], [0.0, 0.0, a]]


def hexagonal(a, c):
    return [[a, 0.0, 0.0], [-a / 2.0, a * math.sqrt(3.0) / 2.0, 0.0], [0.0, 0.0, c]]


def sc(element, a):
    return cubic(a), [(element, (0.0, 0.0, 0.0))]


def bcc(element, a):
    return cubic(a), [(element, (0.0, 0.0, 0.0)), (element, (0.5, 0.5, 0.5))]


def fcc(element, a):
    return cubic(a), [
        (element, (0.0, 0.0, 0.0)),
        (element, (0.0, 0.5, 0.5)),
        (element, (0.5, 0.0, 0.5)),
        (element, (0.5, 0.5, 0.0)),
    ]


def b2(elem_a, elem_b, a):
    return cubic(a), [(elem_a, (0.0, 0.0, 0.0)), (elem_b, (0.5, 0.5, 0.5))]


def rocksalt(elem_a, elem_b, a):
    lattice, sites = fcc(elem_a, a)
    for _, frac in list(sites):
        shifted = tuple((c + 0.5) % 1.0 for c in frac)
        sites.append((elem_b, shifted))
    return lattice, sites


def zincblende(elem_a, elem_b, a):
    lattice, sites = fcc(elem_a, a)
    for _, frac in list(sites):
        shifted = tuple((c + 0.25) % 1.0 for c in frac)
        sites.append((elem_b, shifted))
    return lattice, sites


def fluorite(elem_a, elem_b, a):
    lattice, sites = fcc(elem_a, a)
    for _, frac in list(sites):
        for shift in (0.25, 0.75):
            sites.append((elem_b, tuple((c + shift) % 1.0 for c in frac)))
    return lattice, sites


def perovskite(elem_a, elem_b, elem_x, a):
    return cubic(a), [
        (elem_a, (0.0, 0.0, 0.0)),
        (elem_b, (0.5, 0.5, 0.5)),
        (elem_x, (0.5, 0.5, 0.0)),
        (elem_x, (0.5, 0.0, 0.5)),
        (elem_x, (0.0, 0.5, 0.5)),
    ]


def l12(elem_a, elem_b, a):
    lattice, sites = fcc(elem_a, a)
    sites[0] = (elem_b, sites[0][1])
    return lattice, sites


def hcp(element, a, c):
    return hexagonal(a, c), [
        (element, (1.0 / 3.0, 2.0 / 3.0, 0.25)),
        (element, (2.0 / 3.0, 1.0 / 3.0, 0.75)),
    ]


STRUCTURES = [
    ("fe-bcc", *bcc("Fe", 2.87)),
    ("cr-bcc", *bcc("Cr", 2.88)),
    ("w-bcc", *bcc("W", 3.16)),
    ("ni-fcc", *fcc("Ni", 3.52)),
    ("cu-fcc", *fcc("Cu", 3.61)),
    ("al-fcc", *fcc("Al", 4.05)),
    ("nacl-rocksalt", *rocksalt("Na", "Cl", 5.64)),
    ("mgo-rocksalt", *rocksalt("Mg", "O", 4.21)),
    ("cscl-b2", *b2("Cs", "Cl", 4.11)),
    ("nial-b2", *b2("Ni", "Al", 2.88)),
    ("feal-b2", *b2("Fe", "Al", 2.91)),
    ("ndfe-b2", *b2("Nd", "Fe", 3.30)),
    ("smco-b2", *b2("Sm", "Co", 3.10)),
    ("lani-b2", *b2("La", "Ni", 3.40)),
    ("zns-zincblende", *zincblende("Zn", "S", 5.41)),
    ("si-diamond", *zincblende("Si", "Si", 5.43)),
    ("ceo2-fluorite", *fluorite("Ce", "O", 5.41)),
    ("srtio3-perovskite", *perovskite("Sr", "Ti", "O", 3.905)),
    ("batio3-perovskite", *perovskite("Ba", "Ti", "O", 4.01)),
    ("ni3al-l12", *l12("Ni", "Al", 3.57)),
    ("y-hcp", *hcp("Y", 3.65, 5.73)),
    ("fe-triclinic", [[3.0, 0.0, 0.0], [0.6, 2.9, 0.0], [0.3, 0.4, 3.1]], [("Fe", (0.0, 0.0, 0.0))]),
]

Z = {
    "H": 1, "O": 8, "Na": 11, "Mg": 12, "Al": 13, "Si": 14, "S": 16, "Cl": 17,
    "Ti": 22, "Cr": 24, "Fe": 26, "Co": 27, "Ni": 28, "Cu": 29, "Zn": 30,
    "Sr": 38, "Y": 39, "Cs": 55, "Ba": 56, "La": 57, "Ce": 58, "Nd": 60,
    "Sm": 62, "W": 74,
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    manifest_rows = []
    for struct_id, lattice, sites in STRUCTURES:
        mean_z = sum(Z[el] for el, _ in sites) / len(sites)
        energy = round(-2.2 + 0.012 * mean_z + 0.6 * float(rng.random()), 4)
        doc = {
            "id": struct_id,
            "lattice": lattice,
            "sites": [{"element": el, "frac": list(frac)} for el, frac in sites],
            "formation_energy": energy,
        }
        path = OUT / f"{struct_id}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        manifest_rows.append([struct_id, f"{struct_id}.json", f"{energy}"])
    with open(OUT / "manifest.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "path", "formation_energy"])
        writer.writerows(manifest_rows)
    print(f"wrote {len(manifest_rows)} structures to {OUT}")


if __name__ == "__main__":
    main()
