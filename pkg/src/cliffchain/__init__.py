"""Translation-invariant Clifford transformations of spin-1/2 chains."""

from .pauli import PauliString, pauli, parse
from .clifford import CliffordTableau, compose, enumerate_tableaux, inverse, validate
from .chain import Composite, OnSite, Staircase, Transform
from .catalog import TABLEAUX, transform
from .classifier import TIClass, census_c2, classify, enumerate_5site, realize_staircase
from .hamiltonian import NonLocalTerm, TIHamiltonian, model

__all__ = [
    "PauliString",
    "pauli",
    "parse",
    "CliffordTableau",
    "compose",
    "enumerate_tableaux",
    "inverse",
    "validate",
    "Composite",
    "OnSite",
    "Staircase",
    "Transform",
    "TABLEAUX",
    "transform",
    "TIClass",
    "census_c2",
    "classify",
    "enumerate_5site",
    "realize_staircase",
    "NonLocalTerm",
    "TIHamiltonian",
    "model",
]
