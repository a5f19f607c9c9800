# Copyright 2026 The scope-dti Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes a small synthetic sources directory for trying the CLI end to end.

Proteins get random sequences and CA-trace PDB files; compounds are simple
chains and rings; labels come from one assay-style source (IC50 in nM) and
one pre-labelled source.
"""

import argparse
import math
import pathlib
import random

ALPHABET = "ACDEFGHIKLMNPQRSTVWY"
THREE = {
    "A": "ALA", "C": "CYS", "D": "ASP", "E": "GLU", "F": "PHE", "G": "GLY", "H": "HIS", "I": "ILE",
    "K": "LYS", "L": "LEU", "M": "MET", "N": "ASN", "P": "PRO", "Q": "GLN", "R": "ARG", "S": "SER",
    "T": "THR", "V": "VAL", "W": "TRP", "Y": "TYR",
}
FAMILIES = ["Kinase", "GPCR", "IonChannel", "Other"]


def ca_trace(seq, rng):
    lines = []
    for i, aa in enumerate(seq):
        t = 0.55 * i
        x, y, z = 2.3 * math.cos(t) * 4, 2.3 * math.sin(t) * 4, 1.5 * i
        x, y, z = (v + rng.uniform(-0.5, 0.5) for v in (x, y, z))
        lines.append(
            f"ATOM  {i + 1:5d}  CA  {THREE[aa]} A{i + 1:4d}    {x:8.3f}{y:8.3f}{z:8.3f}  1.00  0.00           C"
        )
    return "\n".join(lines + ["END", ""])


def compound_smiles():
    out = []
    for head in ["c1ccccc1", "c1ccncc1", "C1CCNCC1", "OC(=O)", "NC(=O)"]:
        for n in range(2, 8):
            for tail in ["O", "N", "OC", "Cl"]:
                out.append(head + "C" * n + tail)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", type=pathlib.Path)
    ap.add_argument("--proteins", type=int, default=10)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = args.out
    (out / "structures").mkdir(parents=True, exist_ok=True)

    proteins = []
    for p in range(args.proteins):
        pid = f"P{p:03d}"
        seq = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(30, 60)))
        (out / "structures" / f"{pid}.pdb").write_text(ca_trace(seq, rng))
        proteins.append((pid, seq, FAMILIES[p % len(FAMILIES)], f"structures/{pid}.pdb"))
    with open(out / "proteins.tsv", "w") as f:
        f.write("protein_id\tsequence\tfamily\tstructure_path\n")
        for row in proteins:
            f.write("\t".join(row) + "\n")

    smiles = compound_smiles()
    with open(out / "compounds.tsv", "w") as f:
        f.write("compound_id\tsmiles\tconformer_path\n")
        for i, s in enumerate(smiles):
            f.write(f"C{i:04d}\t{s}\t\n")

    # Activity depends on the compound's ring head and the protein family.
    with open(out / "assays.schema.ini", "w") as f:
        f.write("[source]\nprotein = target\ncompound = ligand\nmeasurement_type = IC50\n"
                "measurement_value = value\nmeasurement_units = nM\n")
    with open(out / "assays.tsv", "w") as f, open(out / "curated.tsv", "w") as g:
        f.write("target\tligand\tvalue\n")
        g.write("uniprot\tcid\ty\n")
        for p, (pid, _, fam, _) in enumerate(proteins):
            for i, s in enumerate(smiles):
                if rng.random() > 0.6:
                    continue
                active = (("n" in s or "N" in s) == (p % 2 == 0)) != (rng.random() < 0.1)
                if rng.random() < 0.7:
                    value = rng.uniform(1, 800) if active else rng.uniform(20000, 90000)
                    f.write(f"{pid}\tC{i:04d}\t{value:.1f}\n")
                else:
                    g.write(f"{pid}\tC{i:04d}\t{int(active)}\n")
    with open(out / "curated.schema.ini", "w") as f:
        f.write("[source]\nprotein = uniprot\ncompound = cid\nlabel = y\n")


if __name__ == "__main__":
    main()
