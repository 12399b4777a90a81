"""Walk through the two-site census and the five-site enumeration.

Run with ``python demos/census_tour.py``.
"""

from cliffchain import census_c2, classify, enumerate_5site, realize_staircase, TABLEAUX
from cliffchain.chain import Staircase
from cliffchain.pauli import pauli

census = census_c2(n_reps=1)
print(f"{census.total} two-site Cliffords, {len(census.disagreements)} route disagreements")
for tag, count in sorted(census.counts.items()):
    rep = census.representatives[tag][0]
    S = Staircase(rep, tag)
    print(f"  {tag:4s} {count:5d}   e.g. X -> {S.image(pauli('X'))}")

print("\nNamed tableaux:")
for name in ("identity", "swap", "cluster", "KW", "NL2", "NL3", "NL4"):
    print(f"  {name:8s} {classify(TABLEAUX[name]).tag}")

pairs = enumerate_5site()
print(f"\n{len(pairs)} translation-invariant image pairs inside five sites")
for p in pairs[:5]:
    r = realize_staircase(p)
    print(f"  {p.family}: X -> {p.imgX}, Z -> {p.imgZ}  realized by a {r.U.k}-site staircase")
