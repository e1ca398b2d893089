"""Batch experiment runner.

Each run reads a JSON config (validated against ``data/config.schema.json``),
executes one command and writes ``<command>.json`` plus a plain-text table
into the output directory.  The exit status is 0 exactly when every check
passed; otherwise the first failing check is echoed on stderr.

    qwmono braid-check --type A2 --weight 1,0
    qwmono --config experiment.json --out reports/
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .cartan import GCM, PureBraidWord, PureLetter, RootDatum
from .conventions import NORMAL_ORDER_SIGN, SQUARE_EXPONENT

SCHEMA_VERSION = "qwmono-report/1"
COMMANDS = ("check-relations", "braid-check", "square-factorization", "pure-factorization",
            "flatness", "monodromy", "compare", "nested-sets", "shapovalov")

DEFAULTS = {"tol": 1e-10, "threshold": 1e-6, "seed": 0, "out": "."}


def load_schema():
    return json.loads(resources.files(__package__).joinpath("data/config.schema.json").read_text())


def validate_config(cfg):
    jsonschema.validate(cfg, load_schema())
    if "type" not in cfg and "gcm" not in cfg and cfg["command"] != "nested-sets":
        raise jsonschema.ValidationError("either 'type' or 'gcm' is required")
    return cfg


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _root_datum(cfg):
    if "gcm" in cfg:
        return RootDatum(GCM(cfg["gcm"]), height_cutoff=(cfg.get("module") or {}).get("cutoff"))
    return RootDatum(cfg["type"])


def _module(cfg, rd):
    from .cato import irreducible
    spec = cfg.get("module") or {}
    top = spec.get("highest_weight")
    if top is None:
        top = [1] + [0] * (rd.n - 1)
    if len(top) != rd.n:
        raise ValueError("highest weight has %d entries, rank is %d" % (len(top), rd.n))
    return irreducible(rd, tuple(Fraction(x) for x in top), spec.get("cutoff"))


def _hbars(cfg):
    out = []
    for h in cfg.get("hbar", [0.2]):
        out.append(complex(h[0], h[1]) if isinstance(h, list) else complex(h))
    return out


def _hbar_text(h):
    return repr(h.real) if h.imag == 0 else "%r%s%rj" % (h.real, "+" if h.imag >= 0 else "-", abs(h.imag))


def _loops(cfg, rd):
    from .qweyl import positive_root_letters
    if "loops" not in cfg:
        return [PureBraidWord((letter,)) for letter in positive_root_letters(rd)]
    return [PureBraidWord(tuple(PureLetter(tuple(j - 1 for j in l.get("w", [])), l["i"] - 1, l.get("e", 1))
                                for l in word)) for word in cfg["loops"]]


def _loop_text(p):
    parts = []
    for l in p.letters:
        w = "".join("s%d" % (j + 1) for j in l.w) or "e"
        parts.append("(%s,%d,%+d)" % (w, l.i + 1, l.e))
    return "".join(parts)


def _cx(z):
    return [float(z.real), float(z.imag)]


class Report:
    def __init__(self, command, cfg):
        self.command, self.cfg = command, cfg
        self.checks, self.results = [], {}

    def check(self, name, ok, detail=""):
        self.checks.append({"name": name, "passed": bool(ok), "detail": str(detail)})
        return ok

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def first_failure(self):
        return next((c for c in self.checks if not c["passed"]), None)

    def to_json(self):
        # the output directory is left out so that reports do not depend on where they are written
        cfg = {k: v for k, v in self.cfg.items() if k != "out"}
        return {"schema_version": SCHEMA_VERSION, "command": self.command, "config": cfg,
                "passed": self.passed, "checks": self.checks, "results": self.results,
                "counterexample": self.first_failure()}

    def table(self):
        width = max([len(c["name"]) for c in self.checks] + [5])
        lines = ["%s  (%s)" % (self.command, "PASS" if self.passed else "FAIL"), ""]
        for c in self.checks:
            lines.append("%-*s  %s  %s" % (width, c["name"], "ok  " if c["passed"] else "FAIL", c["detail"]))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check_relations(cfg, rep):
    from .qalgebra import defining_relations, dip, equality_via_verma, scalar
    rd = _root_datum(cfg)
    for name, rel in defining_relations(rd):
        # a relation needs at least its own raising depth
        height = max(cfg.get("height", 4), dip(rel))
        rep.check(name, equality_via_verma(rd, rel, scalar(0), height), "height %d" % height)


def cmd_braid_check(cfg, rep):
    from .qweyl import braid_relation_check
    rd = _root_datum(cfg)
    L = _module(cfg, rd)
    rep.results["dim"] = L.dim
    for i in range(rd.n):
        for j in range(i + 1, rd.n):
            m = rd.braid_order(i, j)
            if m is None:
                rep.check("S%d,S%d" % (i + 1, j + 1), True, "m = infinity, no relation")
                continue
            rep.check("S%d,S%d" % (i + 1, j + 1), braid_relation_check(L, i, j), "m = %d, exact" % m)


def cmd_square_factorization(cfg, rep):
    from .qweyl import square_factorization
    rd = _root_datum(cfg)
    L = _module(cfg, rd)
    fits = {}
    for i in range(rd.n):
        try:
            f = square_factorization(L, i)
        except ArithmeticError as exc:
            rep.check("node %d" % (i + 1), False, exc)
            continue
        fits[i + 1] = None if f.exponent is None else str(f.exponent)
        rep.check("node %d" % (i + 1), f.matches_frozen, "fitted c = %s, frozen c = %s" % (f.exponent, SQUARE_EXPONENT))
    rep.results["fitted"] = fits
    rep.results["frozen"] = str(SQUARE_EXPONENT)


def cmd_pure_factorization(cfg, rep):
    from .qweyl import letter_factorization_check, pure_braid_action
    rd = _root_datum(cfg)
    L = _module(cfg, rd)
    rep.results["normal_order_sign"] = NORMAL_ORDER_SIGN
    rep.results["loops"] = []
    for p in _loops(cfg, rd):
        act = pure_braid_action(L, p)
        name = _loop_text(p)
        rep.check(name + " weight zero", act.weight_zero.preserves_weights())
        if len(p) == 1:
            rep.check(name + " = S_w q^(c k) S_w^-1", letter_factorization_check(L, p.letters[0]), "exact")
        rep.results["loops"].append(act.to_json())


def cmd_flatness(cfg, rep):
    from .casimir import build_classical, flatness_check
    rd = _root_datum(cfg)
    A = build_classical(rd, [_module(cfg, rd)])
    out = flatness_check(A, A.modules[0])
    rep.results["pairing"] = {" ".join(map(str, k)): str(v) for k, v in sorted(A.pairing.items())}
    for plane, alpha, worst in out.residuals:
        rep.check("plane %s root %s" % (list(plane), list(alpha)), worst == 0, "max |[K, sum K]| = %s" % worst)


def _connection(cfg, rd, L, hbar):
    from .transport import CasimirConnection
    return CasimirConnection.build(rd, L, hbar)


def cmd_monodromy(cfg, rep):
    from .transport import TransportStats, pure_monodromy
    rd = _root_datum(cfg)
    L = _module(cfg, rd)
    rep.results["monodromy"] = []
    for h in _hbars(cfg):
        conn = _connection(cfg, rd, L, h)
        for p in _loops(cfg, rd):
            stats = TransportStats()
            M = pure_monodromy(conn, p, cfg["tol"], stats=stats)
            blocks = []
            for b in conn.module.module.keys:
                sl = conn.module.slices[b]
                ev = sorted(np.linalg.eigvals(M[sl, sl]), key=lambda z: (round(z.real, 12), round(z.imag, 12)))
                blocks.append({"weight": [str(x) for x in L.weight(b)], "eigenvalues": [_cx(z) for z in ev]})
            mask = np.ones_like(M, dtype=bool)
            for sl in conn.blocks:
                mask[sl, sl] = False
            rep.check("%s hbar=%s weight zero" % (_loop_text(p), _hbar_text(h)), not np.any(M[mask]))
            rep.results["monodromy"].append({"loop": _loop_text(p), "hbar": _cx(h), "blocks": blocks,
                                             "steps": stats.to_json()})


def cmd_compare(cfg, rep):
    from .qweyl import pure_braid_action
    from .transport import compare_spectra, pure_monodromy
    rd = _root_datum(cfg)
    L = _module(cfg, rd)
    rep.results["compare"] = []
    for h in _hbars(cfg):
        conn = _connection(cfg, rd, L, h)
        for p in _loops(cfg, rd):
            M = pure_monodromy(conn, p, cfg["tol"])
            out = compare_spectra(M, pure_braid_action(L, p).normal, h)
            rep.check("%s hbar=%s" % (_loop_text(p), _hbar_text(h)), out.max_mismatch <= cfg["threshold"],
                      "max mismatch %.3e" % out.max_mismatch)
            rep.results["compare"].append(dict(out.to_json(), loop=_loop_text(p), hbar=_cx(h)))


def cmd_nested_sets(cfg, rep):
    from math import comb

    from .nested import (format_bracketing, from_bracketing, maximal_nested_sets, parse_bracketing,
                         to_bracketing, type_a_diagram)
    tag = cfg.get("type", "A3")
    if "gcm" in cfg:
        diagram = GCM(cfg["gcm"]).diagram()
    else:
        diagram = RootDatum(tag).gcm.diagram()
    mns = maximal_nested_sets(diagram)
    rep.results["count"] = len(mns)
    n = len(diagram)
    if "gcm" not in cfg and tag.startswith("A") and "x" not in tag:
        catalan = comb(2 * n, n) // (n + 1)
        rep.check("count = Catalan(%d)" % n, len(mns) == catalan, "%d maximal nested sets" % len(mns))
        diag = type_a_diagram(n)
        brackets = []
        for fam in maximal_nested_sets(diag):
            text = format_bracketing(to_bracketing(diag, fam))
            brackets.append(text)
            rep.check("round trip %s" % text, from_bracketing(parse_bracketing(text)) == fam)
        rep.results["bracketings"] = sorted(brackets)
    else:
        rep.check("enumerated", True, "%d maximal nested sets" % len(mns))


def cmd_shapovalov(cfg, rep):
    from .cato import check_dual_basis, shapovalov_dual, symbolic_verma
    rd = _root_datum(cfg)
    height = cfg.get("height", 3)
    M = symbolic_verma(rd, height)
    rep.results["determinants"] = {}
    for beta in M.keys:
        if sum(beta) == 0 or sum(beta) > height:
            continue
        name = "beta=%s" % ",".join(map(str, beta))
        _, det = shapovalov_dual(M, beta)
        rep.results["determinants"][name] = str(det)
        rep.check(name + " dual basis", check_dual_basis(M, beta), "dim %d" % M.dim_of(beta))


HANDLERS = {
    "check-relations": cmd_check_relations,
    "braid-check": cmd_braid_check,
    "square-factorization": cmd_square_factorization,
    "pure-factorization": cmd_pure_factorization,
    "flatness": cmd_flatness,
    "monodromy": cmd_monodromy,
    "compare": cmd_compare,
    "nested-sets": cmd_nested_sets,
    "shapovalov": cmd_shapovalov,
}


def run(cfg):
    """Validate ``cfg``, run its command and return the :class:`Report`."""
    cfg = validate_config(dict(cfg))
    full = dict(DEFAULTS, **cfg)
    rep = Report(cfg["command"], cfg)
    HANDLERS[cfg["command"]](full, rep)
    if not rep.checks:
        rep.check("ran", True)
    return rep


def write_report(rep, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / (rep.command + ".json")).write_text(json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n")
    (out / (rep.command + ".txt")).write_text(rep.table())


def build_parser():
    ap = argparse.ArgumentParser(prog="qwmono", description="Quantum Weyl group and Casimir monodromy experiments.")
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="command (overrides the config)")
    ap.add_argument("--config", help="JSON experiment config")
    ap.add_argument("--out", help="directory for the JSON report and the table")
    ap.add_argument("--tol", type=float, help="integration tolerance")
    ap.add_argument("--hbar", action="append", help="hbar value, e.g. 0.2 or 0.3+0.2j (repeatable)")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--type", help="Cartan type tag such as A2, B2, G2, A1xA1")
    ap.add_argument("--weight", help="highest weight as comma separated Dynkin labels")
    ap.add_argument("--height", type=int, help="height bound for check-relations and shapovalov")
    return ap


def config_from_args(args):
    cfg = {}
    if args.config:
        cfg = json.loads(Path(args.config).read_text())
    if args.command:
        cfg["command"] = args.command
    if args.out is not None:
        cfg["out"] = args.out
    if args.tol is not None:
        cfg["tol"] = args.tol
    if args.hbar:
        vals = []
        for h in args.hbar:
            z = complex(h.replace(" ", ""))
            vals.append(z.real if z.imag == 0 else [z.real, z.imag])
        cfg["hbar"] = vals
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.type:
        cfg["type"] = args.type
    if args.weight:
        cfg.setdefault("module", {})["highest_weight"] = [int(x) for x in args.weight.split(",")]
    if args.height is not None:
        cfg["height"] = args.height
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    if "command" not in cfg:
        print("qwmono: no command given (positional or in --config)", file=sys.stderr)
        return 2
    try:
        rep = run(cfg)
    except jsonschema.ValidationError as exc:
        print("qwmono: invalid config: %s" % exc.message, file=sys.stderr)
        return 2
    write_report(rep, cfg.get("out", "."))
    sys.stdout.write(rep.table())
    if not rep.passed:
        print("first failure: %s" % json.dumps(rep.first_failure()), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
