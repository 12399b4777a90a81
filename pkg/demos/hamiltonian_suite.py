"""Map the XXZ chain through the decorating staircases and a few string maps.

Run with ``python demos/hamiltonian_suite.py``.
"""

from cliffchain import model, transform
from cliffchain.hamiltonian import NonLocalTerm, graphs_match
from cliffchain.hamiltonian import transform as map_model

xxz = model("xxz")
print(f"start: {xxz}")
for name, target in [("U1", "h1"), ("U2", "h2"), ("U3", "h3"), ("U4", "h4"), ("U4*U2", "h0")]:
    H = map_model(xxz, transform(name))
    print(f"{name:6s} -> {H}   matches {target}: {H == model(target)}")

H = map_model(model("xxz-h"), transform("KW"))
print(f"\nKW on XXZ in a field: {H}")
print(f"equals hpp up to anchors: {H == model('hpp')}")
print(f"term-by-term frustration graph preserved on 0..7: {graphs_match(model('xxz-h'), H, 0, 7)}")

try:
    map_model(xxz, transform("NL2"))
except NonLocalTerm as exc:
    print(f"\nNL2 on XXZ: {exc}")
