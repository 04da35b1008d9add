"""Command-line front end.

Exit codes: 0 success (or perverse / valid), 1 rejected with evidence,
2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .arrangement import ArrangementError, FacePoset, flats, load_arrangement, tits_product
from .cousin import compact_cohomology, compact_cohomology_via_column, perversity_report
from .diagram import DiagramError, MatrixDiagram, dualize, extract_single_indexed, load_diagram, validate
from .dirac import validate_dirac, to_dirac
from .fan import build_orientation
from .linalg import ChainComplexError, FieldSpec, ShapeError
from .strata import ProductIndex, s1_classes, stratum_keys

EXIT_OK, EXIT_REJECTED, EXIT_MALFORMED = 0, 1, 2

log = logging.getLogger("pervmat")


@dataclass(frozen=True)
class RunConfig:
    command: str
    arrangement: Path
    diagram: Path | None
    field: FieldSpec | None
    format: str
    jobs: int
    max_faces: int
    covariant_dsecond_keys: bool = False
    fail_fast: bool = False

    def __post_init__(self):
        if self.max_faces <= 0:
            raise ValueError("face budget must be positive")
        if self.jobs <= 0:
            raise ValueError("--jobs must be positive")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field, default=None, help="Q or Fp:p (default: the diagram file's field, else Q)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--jobs", type=_positive, default=1, help="worker threads")
    common.add_argument("--max-faces", type=_positive, default=100_000, help="face budget")

    ap = argparse.ArgumentParser(prog="pervmat", description="Exact checks for matrix diagrams on real hyperplane arrangements.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("faces", "list faces with dimension, witness and containing hyperplanes"),
        ("poset", "faces, cover relations with orientation signs, and flats"),
        ("tits", "full Tits product table"),
        ("strata", "stratum key of every product cell and S(1) classes"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("arrangement", type=Path)
    for name, help_ in (
        ("validate", "check the matrix-diagram axioms"),
        ("dualize", "print the dual diagram"),
        ("to-dirac", "convert a diagram on the line to Dirac data"),
        ("check", "full pipeline; exit 0 iff perverse"),
        ("hc", "compactly supported cohomology"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("arrangement", type=Path)
        p.add_argument("diagram", type=Path)
        p.add_argument(
            "--covariant-dsecond-keys",
            action="store_true",
            help="read dsecond keys as 'A1->A2|B' (smaller face first)",
        )
        if name == "check":
            p.add_argument("--fail-fast", action="store_true", help="stop at the first failing stage")
    return ap


# ---------------------------------------------------------------- rendering


def _frac(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _line_order(poset: FacePoset):
    return sorted(poset.faces, key=lambda f: f.witness[0])


def ascii_grid(d: MatrixDiagram) -> str | None:
    """Dimension grid for diagrams on a line: real faces left to right,
    imaginary faces top (+) to bottom (-)."""
    idx = d.index
    if idx.ambient_dim != 1:
        return None
    cols = _line_order(idx.real)
    rows = list(reversed(_line_order(idx.imag)))
    w = max(4, max(len(f.signs) for f in cols) + 1)
    lw = max(len(f.signs) for f in rows) + 2
    lines = [" " * lw + "".join(f.signs.rjust(w) for f in cols) + "   <- real part"]
    for a in rows:
        lines.append(f"i{a.signs}".ljust(lw) + "".join(str(d.dim(a, b)).rjust(w) for b in cols))
    lines.append("(entries: dim E[imag, real])")
    return "\n".join(lines)


def _emit(obj, fmt: str, text_lines: list[str], out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


# ---------------------------------------------------------------- commands


def _index(cfg: RunConfig) -> ProductIndex:
    arr = load_arrangement(cfg.arrangement)
    return ProductIndex.of(arr, cfg.max_faces)


def _diagram(cfg: RunConfig, index: ProductIndex) -> MatrixDiagram:
    return load_diagram(index, cfg.diagram, cfg.field, cfg.covariant_dsecond_keys)


def cmd_faces(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    rows = [
        {"face": f.signs, "dim": f.dim, "witness": [_frac(x) for x in f.witness], "hyperplanes": sorted(f.zero_set)}
        for f in idx.real.faces
    ]
    text = [f"{len(rows)} faces"] + [
        f"{r['face']:>{max(4, idx.arrangement.size)}}  dim {r['dim']}  witness ({', '.join(r['witness'])})  H^C {r['hyperplanes']}"
        for r in rows
    ]
    _emit({"count": len(rows), "faces": rows}, cfg.format, text, out)
    return EXIT_OK


def cmd_poset(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    poset = idx.real
    orient = build_orientation(poset)
    covers = [{"lower": a.signs, "upper": b.signs, "psi": orient.psi(a, b)} for a, b in poset.covers]
    covers.sort(key=lambda c: (c["lower"], c["upper"]))
    fl = [{"hyperplanes": sorted(f.hyperplanes), "codim": f.codim} for f in flats(poset)]
    obj = {
        "faces": [{"face": f.signs, "dim": f.dim} for f in poset.faces],
        "covers": covers,
        "flats": fl,
        "essential": idx.arrangement.is_essential,
    }
    text = [f"{len(poset)} faces, {len(covers)} covers, {len(fl)} flats"]
    text += [f"  {c['lower']} < {c['upper']}  psi {c['psi']:+d}" for c in covers]
    text += [f"  flat {f['hyperplanes']} codim {f['codim']}" for f in fl]
    _emit(obj, cfg.format, text, out)
    return EXIT_OK


def cmd_tits(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    poset = idx.real
    faces = sorted(poset.faces, key=lambda f: f.signs)
    table = {b.signs: {a.signs: tits_product(poset, b, a).signs for a in faces} for b in faces}
    w = max(3, max(len(f.signs) for f in faces) + 1)
    text = ["B o A".ljust(w + 2) + "".join(a.signs.rjust(w) for a in faces)]
    text += [b.signs.ljust(w + 2) + "".join(table[b.signs][a.signs].rjust(w) for a in faces) for b in faces]
    _emit({"table": table}, cfg.format, text, out)
    return EXIT_OK


def cmd_strata(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    cells = sorted(idx.cells(), key=lambda c: c.label())
    keys = [{"cell": c.label(), "key": sorted(idx.key(c.imag, c.real).key), "codim": idx.key(c.imag, c.real).codim} for c in cells]
    distinct = [{"key": sorted(k.key), "codim": k.codim} for k in stratum_keys(idx)]
    obj = {"cells": keys, "keys": distinct}
    text = [f"{len(distinct)} stratum keys: " + ", ".join(k.label() for k in stratum_keys(idx))]
    text += [f"  {k['cell']}  key {k['key']}  codim {k['codim']}" for k in keys]
    if idx.is_central:
        s1 = {}
        for c in sorted(idx.real.faces, key=lambda f: f.signs):
            s1[c.signs] = [sorted(f.signs for f in part) for part in s1_classes(idx, c)]
            s1[c.signs].sort()
        obj["s1_classes"] = s1
        text.append("S(1) classes by imaginary face:")
        text += [f"  {c}: " + " | ".join("{" + ",".join(p) + "}" for p in parts) for c, parts in s1.items()]
    _emit(obj, cfg.format, text, out)
    return EXIT_OK


def _validation_text(rep) -> list[str]:
    lines = [f"valid: {'yes' if rep.ok else 'no'}"]
    for s in rep.squares:
        lines.append(f"  square fails ({s['kind']}): imag {s['imag']} real {s['real']}")
    for f in rep.m3_prime:
        lines.append(f"  M3' fails at dprime {f['map']} (rank {f['rank']} of shape {f['shape']}; {'tits ' + str(f['tits']) if 'tits' in f else 'key ' + f['key']})")
    for f in rep.m3_second:
        lines.append(f"  M3'' fails at dsecond {f['map']} (rank {f['rank']} of shape {f['shape']}; {'tits ' + str(f['tits']) if 'tits' in f else 'key ' + f['key']})")
    for f in rep.criterion_mismatches:
        lines.append(f"  internal: Tits and stratum-key criteria disagree at {f}")
    return lines


def cmd_validate(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    d = _diagram(cfg, idx)
    rep = validate(d, cfg.jobs)
    text = _validation_text(rep)
    grid = ascii_grid(d)
    if grid:
        text = [grid, ""] + text
    _emit(rep.to_json(), cfg.format, text, out)
    return EXIT_OK if rep.ok else EXIT_REJECTED


def cmd_dualize(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    d = _diagram(cfg, idx)
    dual = dualize(d)
    obj = dual.to_json()
    text = [json.dumps(obj, indent=2, sort_keys=True)]
    grid = ascii_grid(dual)
    if grid:
        text = [grid, ""] + text
    _emit(obj, cfg.format, text, out)
    return EXIT_OK


def cmd_to_dirac(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    d = _diagram(cfg, idx)
    rep = validate(d, cfg.jobs)
    if not rep.ok:
        _emit({"valid": False, "validation": rep.to_json()}, cfg.format, _validation_text(rep), out)
        return EXIT_REJECTED
    dd = to_dirac(d)
    conds = validate_dirac(dd)
    obj = {"valid": True, "dirac": dd.to_json(), "conditions": conds, "dirac_ok": all(conds.values())}
    em, e0, ep = dd.dims
    text = [f"E_- = k^{em}, E_0 = k^{e0}, E_+ = k^{ep}"]
    for name in ("delta_minus", "delta_plus", "gamma_minus", "gamma_plus"):
        text.append(f"  {name} = {getattr(dd, name).to_json()}")
    text += [f"  {c}: {'ok' if v else 'FAILS'}" for c, v in conds.items()]
    _emit(obj, cfg.format, text, out)
    return EXIT_OK if obj["dirac_ok"] else EXIT_REJECTED


def run_check(d: MatrixDiagram, jobs: int = 1, fail_fast: bool = False) -> tuple[int, dict]:
    """The decision pipeline: validate, build the Cousin complex, check
    constructibility and both perversity conditions."""
    rep = validate(d, jobs)
    if fail_fast and not rep.ok:
        return EXIT_REJECTED, {"perverse": False, "valid": False, "validation": rep.to_json(), "stopped_after": "validate"}
    pr = perversity_report(d, jobs, validation=rep)
    obj = pr.to_json()
    if d.is_central and d.index.real.zero_face is not None:
        obj["single_indexed"] = extract_single_indexed(d).to_json()
    return (EXIT_OK if pr.perverse else EXIT_REJECTED), obj


def _check_text(obj: dict, d: MatrixDiagram) -> list[str]:
    grid = ascii_grid(d)
    lines = [grid, ""] if grid else []
    lines.append(f"perverse: {'yes' if obj['perverse'] else 'no'}")
    lines += _validation_text(_ValidationView(obj["validation"]))
    if "constructibility" not in obj:
        lines.append(f"(stopped after {obj['stopped_after']})")
        return lines
    c = obj["constructibility"]
    lines.append(f"constructible: {'yes' if c['constructible'] else 'no'}")
    for f in c["square_defects"]:
        lines.append(f"  stalk complex at {f['cell']} has d^2 != 0 in degree {f['degree']}")
    for f in c["chain_map_defects"]:
        lines.append(f"  {f['direction']} map {f['from']} -> {f['to']} is not a chain map (degree {f['degree']})")
    for f in c["failures"]:
        lines.append(f"  {f['direction']} map {f['from']} -> {f['to']} (key {f['key']}) not a quasi-isomorphism in degrees {f['degrees']}")

    def verdict(v):
        return "undetermined" if v is None else ("yes" if v else "no")

    lines.append(f"(P-): {verdict(obj['p_minus'])}")
    for p, entries in obj["supports"].items():
        lines.append(f"  H^{p} on " + ", ".join(f"{e['cell']} (codim {e['codim']})" for e in entries))
    for v in obj["p_minus_violations"]:
        lines.append(f"  violation: H^{v['degree']} at {v['cell']} with codim {v['codim']}")
    lines.append(f"(P+): {verdict(obj['p_plus'])} via {obj['dual_route']}")
    for v in obj["p_plus_violations"]:
        lines.append(f"  violation: dual H^{v['degree']} at {v['cell']} with codim {v['codim']}")
    return lines


class _ValidationView:
    def __init__(self, j: dict):
        self.ok = j["valid"]
        self.squares = j["square_failures"]
        self.m3_prime = j["m3_prime_failures"]
        self.m3_second = j["m3_second_failures"]
        self.criterion_mismatches = j["criterion_mismatches"]


def cmd_check(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    d = _diagram(cfg, idx)
    code, obj = run_check(d, cfg.jobs, cfg.fail_fast)
    obj["exit_code"] = code
    _emit(obj, cfg.format, _check_text(obj, d), out)
    return code


def cmd_hc(cfg: RunConfig, out) -> int:
    idx = _index(cfg)
    d = _diagram(cfg, idx)
    rep = validate(d, cfg.jobs)
    if not rep.ok:
        _emit({"valid": False, "validation": rep.to_json()}, cfg.format, _validation_text(rep), out)
        return EXIT_REJECTED
    h = compact_cohomology(d)
    oracle = compact_cohomology_via_column(d)
    obj = {"compact_cohomology": {str(k): v for k, v in sorted(h.items())}, "column_route_agrees": h == oracle}
    text = ["H_c: " + (", ".join(f"degree {k}: {v}" for k, v in sorted(h.items())) or "0")]
    text.append(f"column route agrees: {'yes' if h == oracle else 'NO'}")
    _emit(obj, cfg.format, text, out)
    return EXIT_OK if h == oracle else EXIT_REJECTED


COMMANDS = {
    "faces": cmd_faces,
    "poset": cmd_poset,
    "tits": cmd_tits,
    "strata": cmd_strata,
    "validate": cmd_validate,
    "dualize": cmd_dualize,
    "to-dirac": cmd_to_dirac,
    "check": cmd_check,
    "hc": cmd_hc,
}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=err)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    cfg = RunConfig(
        command=args.command,
        arrangement=args.arrangement,
        diagram=getattr(args, "diagram", None),
        field=args.field,
        format=args.format,
        jobs=args.jobs,
        max_faces=args.max_faces,
        covariant_dsecond_keys=getattr(args, "covariant_dsecond_keys", False),
        fail_fast=getattr(args, "fail_fast", False),
    )
    try:
        return COMMANDS[cfg.command](cfg, out)
    except DiagramError as e:
        err.write("malformed diagram:\n" + "".join(f"  {p}\n" for p in e.problems))
        return EXIT_MALFORMED
    except (ArrangementError, ShapeError, ValueError, OSError) as e:
        err.write(f"error: {e}\n")
        return EXIT_MALFORMED
    except ChainComplexError as e:
        err.write(f"error: {e}\n")
        return EXIT_REJECTED


if __name__ == "__main__":
    raise SystemExit(main())
