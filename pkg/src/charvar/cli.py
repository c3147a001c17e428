"""Batch front end: run session files and golden-file fixture directories."""

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import dsl
from .char_variety import (DEFAULT_SLACK, char_variety, format_ideal, holonomicity_report,
                           level_relabel, purity_report)
from .filt import GoodFilteredModule, good_resolution, is_strict
from .groebner import Ideal, ideal_dim, monomial_components
from .modgb import GroebnerTimeout, component
from .rings import ContextError, ParseError, cotangent_ring
from .symp import (ConormalSpec, CotangentChart, IndeterminateIsotropy, conormal_ideal,
                   geometry_report, isotropy_test, log_containment_check)
from .weyl import WeylAlgebra, WeylPresentation, direct_sum, log_induce, transpose_side, weyl_ext

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_TIMEOUT = 0, 1, 2, 3


@dataclass
class CliConfig:
    prime: int = None
    dim: int = None
    order: str = "weighted"
    slack: int = DEFAULT_SLACK


class SessionError(Exception):
    """Semantic error tied to a session line (unbound name, bad operator, ...)."""

    def __init__(self, kind, msg, line=None, col=None):
        super().__init__(msg)
        self.kind, self.msg, self.line, self.col = kind, msg, line, col

    def as_json(self):
        return {"kind": self.kind, "message": self.msg, "line": self.line, "col": self.col}


class AssertionFailed(Exception):
    pass


@dataclass
class State:
    ring: WeylAlgebra
    decl: dsl.RingDecl
    config: CliConfig
    modules: dict

    @property
    def chart(self):
        return CotangentChart(self.decl.d, self.decl.r, self.decl.p)


# ---------------------------------------------------------------------------
# module construction

def _parse_op(D, text, line, raw):
    try:
        return D.parse(text)
    except ParseError as exc:
        at = raw.find(text.split()[0]) if text.split() else -1
        col = at + exc.col if at >= 0 and exc.col else exc.col
        raise SessionError("parse", f"malformed operator {text!r}: {exc.msg}", line, col) from None


def build_module(decl, state, line, raw=""):
    D = state.ring
    if decl.kind == "cokernel":
        rank = len(decl.rows[0]) if decl.rows else len(decl.shifts or (0,))
        shifts = decl.shifts if decl.shifts is not None else (0,) * rank
        if len(shifts) != rank:
            raise SessionError("arity", "shifts must have one entry per generator", line)
        rows = [[_parse_op(D, x, line, raw) for x in row] for row in decl.rows]
        return WeylPresentation(D, shifts, rows)
    if decl.kind == "directsum":
        P = state.modules[decl.parts[0]]
        for name in decl.parts[1:]:
            P = direct_sum(P, state.modules[name])
        return P
    d, r = state.decl.d, state.decl.r
    mats = dict(decl.mats)
    for key in mats:
        i = int(key[1:])
        if not 1 <= i <= d or (key[0] == "A") != (i <= r):
            raise SessionError("arity", f"{key}: use A<i> for log directions 1..{r} and B<i> for {r + 1}..{d}", line)
    n = len(next(iter(mats.values()))) if mats else 1
    def get(key):
        M = mats.get(key)
        if M is None:
            return [["0"] * n for _ in range(n)]
        if len(M) != n or any(len(row) != n for row in M):
            raise SessionError("arity", f"{key} must be {n}x{n}", line)
        for row in M:
            for x in row:
                _parse_op(D, x, line, raw)
        return [list(row) for row in M]
    A = [get(f"A{i}") for i in range(1, r + 1)]
    B = [get(f"B{i}") for i in range(r + 1, d + 1)]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return log_induce(d, r, A, B, n=n, ring=D)
    except ValueError as exc:
        raise SessionError("arity", str(exc), line) from None


# ---------------------------------------------------------------------------
# JSON helpers

def _rows(P):
    return [[str(f) for f in P.row(v)] for v in P.vectors()]


def _vector(ring, v, rank):
    return [ring.format_terms(component(v, j)) for j in range(rank)]


def _strict_json(rep, ring, rank):
    out = dict(rep)
    w = out["witness"]
    if w is not None:
        out["witness"] = {"vector": _vector(ring, w["vector"], rank), "degree": w["degree"],
                          "image_filtration_degree": w["image_filtration_degree"]}
    return out


def _poly_ideal(state, items, line):
    R = cotangent_ring(state.decl.d, state.decl.p)
    gens = []
    for x in items:
        try:
            gens.append(R.parse(x))
        except ParseError as exc:
            raise SessionError("parse", f"malformed polynomial {x!r}: {exc.msg}", line, exc.col) from None
    return Ideal(gens, R)


def _certified_codim(M, slack):
    rep = purity_report(M, slack=slack)
    return rep, (rep["codim"] if rep["verdict"].startswith("pure") else None)


# ---------------------------------------------------------------------------
# verbs

def run(cmd, state, line=None):
    """Evaluate one command; returns a JSON-ready value."""
    M = None
    if cmd.target is not None and cmd.verb != "fixtures":
        if cmd.target not in state.modules:
            raise SessionError("name", f"unbound module {cmd.target!r}", line)
        M = state.modules[cmd.target]
    v = cmd.verb
    if v == "fixtures":
        rep = run_fixtures(cmd.target, state.config if state else None)
        if rep["failed"]:
            raise AssertionFailed(json.dumps(rep))
        return rep
    slack = state.config.slack
    if v == "gr":
        G = M.gr()
        return {"shifts": list(G.shifts), "relations": _rows(G)}
    if v == "car":
        return char_variety(M).as_json()
    if v == "holonomic":
        h = holonomicity_report(char_variety(M))
        return {"dim": h["dim"], "d": h["d"], "holonomic": h["holonomic"]}
    if v == "purity":
        rep = purity_report(M, name=cmd.target, slack=slack)
        if rep["verdict"] == "inconsistent":
            raise AssertionFailed(json.dumps(rep))
        return rep
    if v == "ext":
        if cmd.number < 0:
            raise SessionError("arity", "ext degree must be >= 0", line)
        E = weyl_ext(M, cmd.number)
        L = transpose_side(E)
        zero = E.rank == 0 or L.is_zero()
        return {"s": cmd.number, "side": E.side, "zero": zero, "shifts": list(E.shifts),
                "relations": _rows(E), "char_ideal": None if zero else char_variety(L).char_ideal()}
    if v in ("strict", "resolve"):
        F = GoodFilteredModule.from_presentation(M, slack)
        n = cmd.number if cmd.number is not None else state.decl.d + 1
        if n < 0:
            raise SessionError("arity", "resolution length must be >= 0", line)
        R = good_resolution(F, n)
        if v == "strict":
            reps = [is_strict(u) for u in [R.cover] + R.differentials]
            ranks = [F.rank] + R.ranks
            return {"cover": _strict_json(reps[0], F.ring, ranks[0]),
                    "differentials": [_strict_json(r, F.ring, ranks[k + 1]) for k, r in enumerate(reps[1:])]}
        return {"ranks": R.ranks, "shifts": [list(s) for s in R.shifts], "complete": R.complete,
                "compositions_vanish": R.resolution.compositions_vanish(),
                "strict": R.strict_report(), "symbol_complex_exact": R.symbol_complex_exact()}
    if v == "conormal":
        S = dsl._int_list(dict(cmd.params)["S"], line, 1)
        if not set(S) <= set(range(1, state.decl.d + 1)):
            raise SessionError("arity", f"S must be a subset of 1..{state.decl.d}", line)
        chart = state.chart
        return geometry_report(conormal_ideal(chart, ConormalSpec(S)), chart)
    if v == "isotropy":
        if M is not None:
            C = char_variety(M)
            I, comps = C.ideal, C.components
        else:
            I = _poly_ideal(state, cmd.items, line)
            comps = monomial_components(I) if I.is_monomial() and not I.is_zero() else None
        dim = ideal_dim(I)
        res = isotropy_test(I, state.chart, comps) if dim >= 0 else {"verdict": "isotropic"}
        out = {"variety": format_ideal(I), "dim": dim, "verdict": res["verdict"]}
        if "components" in res:
            out["components"] = [{"component": c["component"], "verdict": c["verdict"]} for c in res["components"]]
        return out
    if v == "lagrangian":
        cert = None
        if M is not None:
            I = char_variety(M).ideal
            cert = _certified_codim(M, slack)[1]
        else:
            I = _poly_ideal(state, cmd.items, line)
        try:
            rep = geometry_report(I, state.chart, cert)
        except IndeterminateIsotropy as exc:
            raise AssertionFailed(str(exc)) from None
        return {k: rep[k] for k in ("variety", "dim", "pure", "isotropic", "lagrangian")}
    if v == "containment":
        chart = state.chart
        cont = log_containment_check(M, chart)
        pur, cert = _certified_codim(M, slack)
        rep = geometry_report(char_variety(M).ideal, chart, cert, cont)
        rep["purity_verdict"] = pur["verdict"]
        rep["implication_holds"] = not (rep["containment"] and cert == chart.d) or rep["lagrangian"] is True
        if not rep["implication_holds"]:
            raise AssertionFailed(json.dumps(rep))
        return rep
    if v == "relabel":
        try:
            m = int(dict(cmd.params)["m"])
        except ValueError:
            raise SessionError("arity", "m must be an integer", line) from None
        try:
            I = level_relabel(list(cmd.items), m, state.decl.d, state.decl.p)
        except ParseError as exc:
            raise SessionError("parse", f"malformed polynomial: {exc.msg}", line, exc.col) from None
        return {"ideal": format_ideal(I)}
    raise SessionError("verb", f"unknown verb {v!r}", line)


def _ring_from(session, config):
    decl = session.ring
    if decl is None:
        if config.prime is None or config.dim is None:
            return None
        decl = dsl.RingDecl(config.prime, config.dim, ())
    return decl


def evaluate(text, config=None):
    """Run a session; returns (results, exit status)."""
    config = config or CliConfig()
    results = []
    try:
        session = dsl.parse_session(text)
    except ParseError as exc:
        return [{"cmd": None, "error": {"kind": "parse", "message": exc.msg, "line": exc.line, "col": exc.col}}], EXIT_PARSE
    raw = text.splitlines()
    decl = _ring_from(session, config)
    state = None
    if decl is not None:
        state = State(WeylAlgebra(decl.d, decl.p, order=config.order), decl, config, {})
    # bind every module first so that malformed operators abort before any output
    try:
        for st, line in zip(session.statements, session.lines[1 if session.ring else 0:]):
            needs_ring = not (isinstance(st, dsl.Command) and st.verb == "fixtures")
            if state is None and needs_ring:
                raise SessionError("state", "no ring declared (use a ring line or --prime/--dim)", line)
            if isinstance(st, dsl.ModuleDecl):
                state.modules[st.name] = build_module(st, state, line, raw[line - 1])
            elif st.target is not None and st.verb != "fixtures" and st.target not in state.modules:
                raise SessionError("name", f"unbound module {st.target!r}", line)
    except SessionError as exc:
        return [{"cmd": None, "error": exc.as_json()}], EXIT_PARSE
    status = EXIT_OK
    for st, line in zip(session.statements, session.lines[1 if session.ring else 0:]):
        if isinstance(st, dsl.ModuleDecl):
            continue
        text_cmd = dsl.format_statement(st)
        try:
            results.append({"cmd": text_cmd, "result": run(st, state, line)})
        except GroebnerTimeout as exc:
            results.append({"cmd": text_cmd, "error": {"kind": "timeout", "message": str(exc), "line": line, "col": None}})
            return results, EXIT_TIMEOUT
        except SessionError as exc:
            results.append({"cmd": text_cmd, "error": exc.as_json()})
            return results, EXIT_PARSE
        except AssertionFailed as exc:
            results.append({"cmd": text_cmd, "error": {"kind": "assertion", "message": str(exc), "line": line, "col": None}})
            status = EXIT_FAIL
        except (ValueError, RuntimeError, ContextError) as exc:
            results.append({"cmd": text_cmd, "error": {"kind": "runtime", "message": str(exc), "line": line, "col": None}})
            status = EXIT_FAIL
    return results, status


def dump(results):
    return json.dumps(results, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# fixtures

def run_fixtures(path, config=None):
    """Run every *.session in a directory against its *.expected.json sibling."""
    root = Path(path)
    if not root.is_dir():
        raise ValueError(f"fixture directory {path!r} does not exist")
    sessions = sorted(root.glob("*.session"))
    report = {"total": len(sessions), "passed": 0, "failed": []}
    for s in sessions:
        expected = s.with_suffix(".expected.json")
        if not expected.exists():
            report["failed"].append({"fixture": s.stem, "reason": "missing expectation file"})
            continue
        results, _ = evaluate(s.read_text(encoding="utf-8"), config)
        if dump(results) == expected.read_text(encoding="utf-8"):
            report["passed"] += 1
        else:
            report["failed"].append({"fixture": s.stem, "reason": "output differs from expectation"})
    return report


def _fixtures_main(path, config, out):
    try:
        rep = run_fixtures(path, config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if rep["total"] == 0:
        print(f"warning: no fixtures found in {path}", file=sys.stderr)
    failed = {f["fixture"]: f["reason"] for f in rep["failed"]}
    for s in sorted(Path(path).glob("*.session")):
        print(f"{'FAIL' if s.stem in failed else 'ok  '} {s.stem}" + (f": {failed[s.stem]}" if s.stem in failed else ""), file=out)
    print(f"{rep['passed']}/{rep['total']} fixtures passed", file=out)
    return EXIT_FAIL if rep["failed"] else EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="charvar", description="Characteristic varieties of D-modules in characteristic p.")
    ap.add_argument("sessions", nargs="*", help="session files ('-' for stdin)")
    ap.add_argument("--prime", type=int, help="prime used when a session has no ring line")
    ap.add_argument("--dim", type=int, help="dimension used when a session has no ring line")
    ap.add_argument("--order", choices=("degrevlex", "weighted"), default="weighted",
                    help="monomial tie-break order on operators")
    ap.add_argument("--slack", type=int, default=DEFAULT_SLACK, help="effective-bound slack")
    ap.add_argument("--fixtures", metavar="PATH", help="run a fixture directory")
    ap.add_argument("--json", action="store_true", help="emit the JSON array instead of one line per command")
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    config = CliConfig(args.prime, args.dim, args.order, args.slack)
    if args.prime is not None:
        from .rings import is_prime
        if not is_prime(args.prime):
            print(f"error: --prime {args.prime} is not a prime", file=sys.stderr)
            return EXIT_PARSE
    if args.fixtures:
        return _fixtures_main(args.fixtures, config, out)
    if not args.sessions:
        print("error: give a session file or --fixtures PATH", file=sys.stderr)
        return EXIT_PARSE
    status = EXIT_OK
    for name in args.sessions:
        text = sys.stdin.read() if name == "-" else Path(name).read_text(encoding="utf-8")
        results, st = evaluate(text, config)
        if args.json:
            out.write(dump(results))
        else:
            for r in results:
                if "error" in r:
                    e = r["error"]
                    where = f"{name}:{e['line']}:{e['col']}" if e.get("line") else name
                    print(f"{where}: {e['kind']} error: {e['message']}", file=sys.stderr)
                else:
                    print(f"{r['cmd']}\n  {json.dumps(r['result'], ensure_ascii=False)}", file=out)
        status = max(status, st)
        if st in (EXIT_PARSE, EXIT_TIMEOUT):
            break
    return status


if __name__ == "__main__":
    sys.exit(main())
