"""Command-line entry point: ``cliffchain <subcommand> ...``."""

from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
from pathlib import Path

from . import catalog, classifier, hamiltonian
from .chain import Transform
from .clifford import CliffordTableau, TableauError, validate
from .hamiltonian import ModelError, NonLocalTerm, TIHamiltonian
from .pauli import PauliParseError

GOLDEN_CENSUS = Path(__file__).parent / "data" / "census_c2.json"
TOL = 1e-10


class CLIError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("CLIFFCHAIN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise CLIError(f"CLIFFCHAIN_THREADS must be an integer, got {raw!r}") from None


def _unknown(kind: str, name: str, known) -> CLIError:
    close = difflib.get_close_matches(name, sorted(known), n=3, cutoff=0.4)
    hint = f"; did you mean {', '.join(close)}?" if close else f"; known: {', '.join(sorted(known))}"
    return CLIError(f"unknown {kind} {name!r}{hint}")


def _read_json(path: Path):
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise CLIError(f"{path}: {exc.strerror}") from None


def load_tableau(spec: str) -> CliffordTableau:
    """A tableau JSON file or a registered name."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        try:
            return CliffordTableau.from_json(_read_json(path))
        except (TableauError, PauliParseError) as exc:
            raise CLIError(f"{path}: {exc}") from None
    if spec not in catalog.TABLEAUX:
        raise _unknown("tableau", spec, catalog.TABLEAUX)
    return catalog.TABLEAUX[spec]


def load_transform(spec: str) -> Transform:
    """Registered name, composition chain ``A*B`` (B first), ``inv(A)``, or tableau file."""
    parts = catalog._split_top(spec)
    if len(parts) == 1 and Path(spec).suffix == ".json":
        from .chain import OnSite, Staircase

        t = load_tableau(spec)
        return OnSite(t, Path(spec).stem) if t.k == 1 else Staircase(t, Path(spec).stem)
    for part in parts:
        inner = part
        for prefix in ("inv(", "inverse("):
            if inner.startswith(prefix) and inner.endswith(")"):
                inner = inner[len(prefix) : -1]
        if "*" not in inner and inner not in catalog.TABLEAUX and Path(inner).suffix != ".json":
            raise _unknown("transform", inner, catalog.TABLEAUX)
    try:
        return catalog.transform(spec)
    except classifier.UnsupportedTransform as exc:
        raise CLIError(str(exc)) from None


def load_model(spec: str) -> TIHamiltonian:
    path = Path(spec)
    if path.suffix in (".json", ".toml"):
        try:
            return hamiltonian.load(path)
        except ModelError as exc:
            raise CLIError(str(exc)) from None
        except OSError as exc:
            raise CLIError(f"{path}: {exc.strerror}") from None
    if spec not in hamiltonian.MODELS:
        raise _unknown("model", spec, hamiltonian.MODELS)
    return hamiltonian.model(spec)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_census(args) -> int:
    records: list | None = [] if args.records else None
    census = classifier.census_c2(records=records, threads=_threads())
    data = census.to_json()
    if records is not None:
        Path(args.records).write_text(classifier.census_lines(records))
    if args.format == "json":
        text = json.dumps(data, indent=2, sort_keys=True)
    else:
        rows = [f"{tag:<5} {n:>6}" for tag, n in sorted(census.counts.items())]
        rows.append(f"{'total':<5} {census.total:>6}")
        rows.append(f"route disagreements: {len(census.disagreements)}")
        text = "\n".join(rows)
    _emit(text, args.out)
    status = 0
    if census.disagreements:
        print(f"error: {len(census.disagreements)} tableaux classified differently by the two routes", file=sys.stderr)
        status = 1
    if args.golden:
        golden = _read_json(Path(args.golden))
        want = {"total": golden.get("total"), "counts": golden.get("counts")}
        have = {"total": data["total"], "counts": data["counts"]}
        if want != have:
            print(f"error: census drifted from {args.golden}: expected {want}, got {have}", file=sys.stderr)
            status = 1
    return status


def cmd_enumerate5(args) -> int:
    pairs = classifier.enumerate_5site(include_shifted=args.shifted)
    findings = classifier.survivor_findings(pairs)
    rows = []
    for p in pairs:
        row = {"X": str(p.imgX), "Z": str(p.imgZ), "family": p.family, "shift": p.shift}
        if args.realize:
            r = classifier.realize_staircase(p)
            row["realization"] = {"template": r.template, "k": r.U.k, "U": r.U.to_json()}
        rows.append(row)
    counts: dict[str, int] = {}
    for p in pairs:
        counts[p.family] = counts.get(p.family, 0) + 1
    if args.format == "json":
        text = "\n".join(json.dumps(r, sort_keys=True) for r in rows)
    else:
        text = "\n".join(f"{r['family']:<3} shift={r['shift']:+d}  X -> {r['X']:<16} Z -> {r['Z']}" for r in rows)
        text += "\n" + "  ".join(f"{k}:{v}" for k, v in sorted(counts.items())) + f"  total:{len(pairs)}"
    _emit(text, args.out)
    if findings:
        print(f"error: {len(findings)} survivors outside L1-L6", file=sys.stderr)
        return 1
    return 0


def cmd_classify(args) -> int:
    t = load_tableau(args.tableau)
    bad = validate(t)
    if bad is not None:
        raise CLIError(f"{args.tableau}: not a Clifford tableau: {bad}")
    if t.k != 2:
        raise CLIError(f"{args.tableau}: classification covers two-site tableaux, got k={t.k}")
    cls = classifier.classify(t)
    if args.format == "json":
        text = json.dumps(cls.to_json(), sort_keys=True)
    else:
        params = ", ".join(f"{k}={v}" for k, v in cls.params.items())
        imgs = "\n".join(f"  {k} -> {v}" for k, v in cls.images.items())
        text = f"{cls.tag}  {params}\n{imgs}"
    _emit(text, args.out)
    return 0


def _with_field(H: TIHamiltonian, h: float | None) -> TIHamiltonian:
    if h is None or "h" in H.symbols:
        return H
    # a bare model gets the uniform field -h Z
    extra = TIHamiltonian.from_pairs([("-h", "Z@0")])
    return TIHamiltonian(H.terms + extra.terms, H.name)


def cmd_transform(args) -> int:
    H = _with_field(load_model(args.model), args.h)
    T = load_transform(args.by)
    try:
        out = hamiltonian.transform(H, T, name=f"{args.by}({H.name})")
    except NonLocalTerm as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    params = {k: v for k, v in (("Delta", args.delta), ("h", args.h)) if v is not None}
    if params:
        out = out.substitute(**params)
    _emit(out.dumps() if args.format == "json" else str(out), args.out)
    return 0


def cmd_graph(args) -> int:
    H = _with_field(load_model(args.model), args.h)
    L = args.L or 8
    g = hamiltonian.frustration_graph(H, 0, L - 1)
    nodes = sorted(g.nodes)
    if args.format == "json":
        data = {
            "model": H.name,
            "L": L,
            "nodes": [g.nodes[n]["op"] for n in nodes],
            "edges": sorted(sorted((nodes.index(a), nodes.index(b))) for a, b in g.edges),
        }
        text = json.dumps(data, sort_keys=True)
    else:
        text = f"{H.name}: {g.number_of_nodes()} terms, {g.number_of_edges()} anticommuting pairs, terms anchored at 0..{L - 1}"
    _emit(text, args.out)
    return 0


def _verify_checks(L: int | None, params: dict) -> dict:
    from . import numeric

    def images():
        L8 = L or 8
        worst = 0.0
        for name in ("identity", "swap", "cluster", "KW", "U1", "Ustar", "NL2", "NL3", "NL4"):
            T = catalog.transform(name)
            for letter in "XYZ":
                from .pauli import pauli

                worst = max(worst, numeric.image_residual(T, pauli(letter, L8 // 2), L8))
        return L8, worst

    def mpo():
        L6 = L or 6
        worst = 0.0
        for name in ("identity", "cluster", "KW", "NL2", "U1", "Ustar"):
            t = catalog.TABLEAUX[name]
            worst = max(worst, float(abs(numeric.mpo_contract(t, L6) - numeric.dense_staircase(t, L6)).max()))
        return L6, worst

    def spectrum():
        L8 = L or 8
        rep = numeric.spectrum_check(hamiltonian.xxz(), catalog.transform("U1"), L8, {"Delta": params.get("Delta", 0.5)})
        return L8, max(rep.spectral, rep.operator)

    def ybe():
        triples = [(0.31, 0.17, 0.23), (0.52, -0.41, 0.37), (1.13, 0.29, 0.61)]
        return None, max(numeric.ybe_residual(*t) for t in triples)

    def transfer():
        L6 = L or 6
        eta = 0.37
        U = numeric.periodic_decorating_circuit(L6)
        r0 = numeric.transfer_matrix_commutation(eta, L6, 0.21, 0.58)
        r1 = numeric.transfer_matrix_commutation(eta, L6, 0.21, 0.58, conjugate_by=U)
        return L6, max(r0, r1)

    def ustar():
        L6 = L or 6
        t = catalog.TABLEAUX["Ustar"]
        return L6, float(abs(numeric.reordered_commuting_layers(t, L6) - numeric.dense_staircase(t, L6)).max())

    return {"images": images, "mpo": mpo, "spectrum": spectrum, "ybe": ybe, "transfer": transfer, "ustar": ustar}


def cmd_verify(args) -> int:
    params = {"Delta": args.delta if args.delta is not None else 0.5}
    checks = _verify_checks(args.L, params)
    names = args.check or list(checks)
    for n in names:
        if n not in checks:
            raise _unknown("check", n, checks)
    status = 0
    lines = []
    for n in names:
        L, residual = checks[n]()
        ok = residual < TOL
        status |= 0 if ok else 1
        lines.append({"check": n, "L": L, "params": params if n == "spectrum" else {}, "residual": residual, "pass": ok})
    if args.format == "json":
        text = "\n".join(json.dumps(r, sort_keys=True) for r in lines)
    else:
        text = "\n".join(
            f"{'PASS' if r['pass'] else 'FAIL'}  {r['check']:<9} L={r['L']}  residual={r['residual']:.2e}" for r in lines
        )
    _emit(text, args.out)
    return status


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--out", help="write the report to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="cliffchain", description="Clifford staircase transforms of spin chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common], help="classify every two-site Clifford")
    p.add_argument("--golden", help="frozen census JSON; exit 1 when the counts differ")
    p.add_argument("--records", help="write one JSON line per tableau to this file")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("enumerate5", parents=[common], help="enumerate five-site locality-preserving images")
    p.add_argument("--shifted", action="store_true", help="keep translated copies of L1 and L3")
    p.add_argument("--realize", action="store_true", help="attach a staircase realization to each image")
    p.set_defaults(func=cmd_enumerate5)

    p = sub.add_parser("classify", parents=[common], help="classify a two-site tableau")
    p.add_argument("tableau", help="tableau JSON file or registered name")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("transform", parents=[common], help="map a translation-invariant model")
    p.add_argument("model", help="model name or JSON/TOML file")
    p.add_argument("--by", required=True, help="transform: name, A*B (B first), inv(A), or tableau file")
    p.add_argument("--delta", type=float)
    p.add_argument("--h", type=float)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", parents=[common], help="run the dense numeric checks")
    p.add_argument("--check", action="append", help="check name (repeatable)")
    p.add_argument("-L", type=int)
    p.add_argument("--delta", type=float)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("graph", parents=[common], help="frustration graph of a model on an open chain")
    p.add_argument("model")
    p.add_argument("-L", type=int)
    p.add_argument("--h", type=float)
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
        sys.stdout.flush()
        return code
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
