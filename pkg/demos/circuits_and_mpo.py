"""Finite-depth circuits for the decorating maps and dense cross-checks.

Run with ``python demos/circuits_and_mpo.py``.
"""

import numpy as np

from cliffchain import TABLEAUX, model, transform
from cliffchain.classifier import circuit_depth_witness, u4_decorating_split
from cliffchain.numeric import dense_staircase, mpo_contract, spectrum_check, ybe_residual

for name in ("U1", "U2", "U3", "U4"):
    c = circuit_depth_witness(name)
    print(f"{name}: depth {c.depth}")
    for layer in c.describe():
        print(f"    {layer['gate']:10s} offset {layer['offset']} stride {layer['stride']}")

split = u4_decorating_split()
print(f"\nU4 as V2 V1, literal: {split.literal_match}; with re-chosen outer bases: {split.adjusted_match}")

U = TABLEAUX["U1"]
err = np.max(np.abs(mpo_contract(U, 8) - dense_staircase(U, 8)))
print(f"\nMPO vs staircase product at L=8: {err:.1e}")
rep = spectrum_check(model("xxz"), transform("U1"), 8, {"Delta": 0.5})
print(f"XXZ -> H1 spectrum residual at L=8: {rep.spectral:.1e}")
print(f"Yang-Baxter residual: {ybe_residual(0.31, 0.17, 0.23):.1e}")
