"""Command-line driver: execute session files, emit text and JSON results.

Exit codes: 0 all queries ok; 1 parse errors (diagnostics on stderr);
2 computation errors (recorded per query, run continues); 3 resource-limit
breach (run aborts, partial results are still written).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .dsl import MapDecl, ModuleDecl, QueryDecl, RingDecl, parse
from .errors import (
    IllDefinedMap,
    NotRbm,
    ParseFailure,
    ResourceLimitExceeded,
    StablehomError,
)
from .fmod import (
    FreeMap,
    ModMap,
    Presentation,
    betti_table,
    ext,
    presentation_from_matrix,
    resolution_chain,
)
from .poly import format_poly, parse_poly
from .ring import make_ring
from .stable import (
    check_stable_iso_certificate,
    ext_dual_vanishes,
    is_perfect_exact,
    is_rbm,
    j2_and_psi,
    pseudo_kernel_cokernel,
    rbm_report,
    theta,
    torsionless,
    torsionless_both,
)

MIN_WINDOW = (-2, 1)


def _matrix_strings(ctx, fmap: FreeMap):
    return [[format_poly(p, ctx.vars, ctx.order) for p in row] for row in fmap.rows]


def module_payload(P: Presentation, length: int = 1) -> dict:
    ctx = P.ctx
    from .fmod import minimize

    m = minimize(P).presentation
    return {
        "gens": list(m.gens.twists),
        "betti": [list(t) for t in betti_table(m, length)],
        "presentation": _matrix_strings(ctx, m.pres),
    }


class SessionRunner:
    def __init__(self, ast, field_override=None, max_degree=None, window=None, verify=False):
        self.ast = ast
        self.field_override = field_override
        self.max_degree = max_degree
        lo, hi = window if window else MIN_WINDOW
        self.window = (min(lo, MIN_WINDOW[0]), max(hi, MIN_WINDOW[1]))
        self.verify = verify
        self.rings: dict = {}
        self.modules: dict = {}
        self.maps: dict = {}
        self.results: list = []
        self.aborted = False

    def run(self) -> list:
        for decl in self.ast.decls:
            if self.aborted:
                break
            try:
                self.one(decl)
            except ResourceLimitExceeded as e:
                self.results.append(
                    {
                        "query": self.echo(decl),
                        "status": "error",
                        "code": "ResourceLimit",
                        "detail": {"message": str(e), "degree": e.degree},
                    }
                )
                self.aborted = True
            except NotRbm as e:
                self.results.append(
                    {
                        "query": self.echo(decl),
                        "status": "error",
                        "code": "NotRbm",
                        "detail": {
                            "message": str(e),
                            "obstruction_betti": [list(t) for t in (e.obstruction_betti or [])],
                        },
                    }
                )
            except StablehomError as e:
                self.results.append(
                    {
                        "query": self.echo(decl),
                        "status": "error",
                        "code": getattr(e, "code", "Error"),
                        "detail": {"message": str(e)},
                    }
                )
        return self.results

    def echo(self, decl) -> str:
        if isinstance(decl, QueryDecl):
            return decl.echo()
        if isinstance(decl, RingDecl):
            return f"ring {decl.name}"
        if isinstance(decl, ModuleDecl):
            return f"module {decl.name}"
        if isinstance(decl, MapDecl):
            return f"map {decl.name}"
        return "?"

    def one(self, decl) -> None:
        if isinstance(decl, RingDecl):
            spec = self.field_override or decl.field_spec
            ctx = make_ring(
                spec,
                decl.vars,
                list(decl.ideal),
                order_kind=decl.order_kind,
                gorenstein_fractions=decl.gorenstein,
                max_degree=self.max_degree,
            )
            self.rings[decl.name] = ctx
            self.current = ctx
            return
        if isinstance(decl, ModuleDecl):
            ctx = self.rings[decl.ring]
            cols = []
            for rel in decl.rels:
                cols.append([ctx.reduce(parse_poly(t, ctx.vars, ctx.field)) for t in rel])
            P = presentation_from_matrix(ctx, decl.gen_degrees, cols)
            self.modules[decl.name] = P
            return
        if isinstance(decl, MapDecl):
            ctx = self.rings[decl.ring]
            A = self.modules[decl.source]
            B = self.modules[decl.target]
            rows = [[ctx.zero()] * A.rank0 for _ in range(B.rank0)]
            for j, col in enumerate(decl.cols):
                for i, t in enumerate(col):
                    rows[i][j] = ctx.reduce(parse_poly(t, ctx.vars, ctx.field))
            mat = FreeMap(A.gens, B.gens, rows)
            try:
                self.maps[decl.name] = ModMap(A, B, mat, validate=True)
            except IllDefinedMap as e:
                self.results.append(
                    {
                        "query": self.echo(decl),
                        "status": "error",
                        "code": "IllDefinedMap",
                        "detail": {"message": str(e), "relation_index": e.relation_index},
                    }
                )
            return
        self.query(decl)

    def query(self, q: QueryDecl) -> None:
        op = q.op
        pay: dict = {}
        if op == "resolve":
            P = self.modules[q.args[0]]
            n = q.args[1]
            chain = resolution_chain(P, max(1, n))
            pay = {
                "length": n,
                "betti": [list(t) for t in betti_table(P, n)],
                "differentials": [
                    _matrix_strings(P.ctx, chain.diff(k)) for k in range(1, n + 1)
                ],
            }
        elif op == "transpose":
            from .fmod import transpose

            pay = {"module": module_payload(transpose(self.modules[q.args[0]]))}
        elif op == "syzygy":
            from .fmod import syzygy

            pay = {"module": module_payload(syzygy(self.modules[q.args[0]], q.args[1]))}
        elif op == "ext":
            E = ext(self.modules[q.args[0]], q.args[1]).presentation
            pay = {"index": q.args[1], "module": module_payload(E), "zero": E.rank0 == 0}
        elif op == "torsionless":
            M = self.modules[q.args[0]]
            if self.verify:
                via_ext, via_embed = torsionless_both(M)
                pay = {"value": via_ext, "double_check": via_embed, "agree": via_ext == via_embed}
            else:
                pay = {"value": torsionless(M)}
        elif op == "j2":
            J2, _psi = j2_and_psi(self.modules[q.args[0]])
            pay = {"module": module_payload(J2)}
        elif op == "psi":
            M = self.modules[q.args[0]]
            J2, psi = j2_and_psi(M)
            r = is_rbm(psi, self.window)
            pay = {
                "direction": "J2(M) -> M",
                "j2": module_payload(J2),
                "matrix": _matrix_strings(M.ctx, psi.mat),
                "is_rbm": r.value,
            }
        elif op in ("pseudoker", "pseudocoker"):
            f = self.maps[q.args[0]]
            pkr = pseudo_kernel_cokernel(f, self.window)
            if op == "pseudoker":
                pay = {
                    "module": module_payload(pkr.pseudo_ker),
                    "map_to_source": _matrix_strings(f.ctx, pkr.n_f.mat),
                    "factors_through_projective": pkr.ker_certificate,
                }
            else:
                pay = {
                    "module": module_payload(pkr.pseudo_coker),
                    "map_from_target": _matrix_strings(f.ctx, pkr.c_f.mat),
                    "factors_through_projective": pkr.coker_certificate,
                }
        elif op == "is_rbm":
            f = self.maps[q.args[0]]
            r = is_rbm(f, self.window, attach_theta=True)
            pay = {"value": r.value}
            if r.value and r.theta is not None:
                pay["theta"] = self._theta_payload(r.theta)
            if not r.value:
                pay["obstruction_betti"] = [list(t) for t in betti_table(r.obstruction, 1)]
        elif op == "theta":
            f = self.maps[q.args[0]]
            th = theta(f, self.window)
            pay = self._theta_payload(th)
        elif op == "perfect":
            inj = self.maps[q.args[0]]
            surj = self.maps[q.args[1]]
            value = is_perfect_exact(inj, surj)
            pay = {"value": value}
            if self.verify:
                pay["recheck"] = is_perfect_exact(inj, surj)
        elif op == "report":
            f = self.maps[q.args[0]]
            rep = rbm_report(f, self.window)
            pay = dict(rep.booleans())
            pay["gorenstein_fractions"] = rep.gorenstein_fractions
            pay["consistent"] = rep.consistent
            if rep.theta is not None:
                pay["theta"] = self._theta_payload(rep.theta)
            if rep.obstruction is not None:
                pay["obstruction_betti"] = [list(t) for t in betti_table(rep.obstruction, 1)]
        elif op == "ext_dual_vanishes":
            pay = {"value": ext_dual_vanishes(self.modules[q.args[0]])}
        elif op == "stable_iso":
            a = self.maps[q.args[0]]
            b = self.maps[q.args[1]]
            pay = {"value": check_stable_iso_certificate(a, b)}
        else:
            raise StablehomError(f"unhandled query {op}")
        self.results.append({"query": q.echo(), "status": "ok", "payload": pay})

    def _theta_payload(self, th) -> dict:
        ctx = th.inj.ctx
        return {
            "perfect": th.perfect_certificate,
            "middle_gens": list(th.middle.gens.twists),
            "inj": _matrix_strings(ctx, th.inj.mat),
            "surj": _matrix_strings(ctx, th.surj.mat),
            "coker": module_payload(th.coker),
        }


def results_to_json(results) -> str:
    doc = {"format": "stablehom-results", "version": 1, "tool": __version__, "results": results}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def _parse_window(text: str):
    lo, _, hi = text.partition("..")
    return (int(lo), int(hi))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="stablehom", description="stable module category calculator")
    sub = ap.add_subparsers(dest="cmd", required=True)
    runp = sub.add_parser("run", help="execute session files")
    runp.add_argument("files", nargs="+")
    runp.add_argument("--json", dest="json_path", default=None)
    runp.add_argument("--field", default=None, help="override: qq or gf:P")
    runp.add_argument("--max-degree", type=int, default=None)
    runp.add_argument("--window", default=None, help="LO..HI standard resolution window")
    runp.add_argument("--verify", action="store_true")
    runp.add_argument("--report-dir", default=None)
    args = ap.parse_args(argv)

    window = _parse_window(args.window) if args.window else None
    all_results = []
    exit_code = 0
    for path in args.files:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            print(f"{path}: {e}", file=sys.stderr)
            return 1
        try:
            ast = parse(text)
        except ParseFailure as e:
            for d in e.diagnostics:
                print(f"{path}:{d.render()}", file=sys.stderr)
            return 1
        runner = SessionRunner(
            ast,
            field_override=args.field,
            max_degree=args.max_degree,
            window=window,
            verify=args.verify,
        )
        results = runner.run()
        all_results.extend(results)
        for r in results:
            if r["status"] == "ok":
                brief = _brief(r["payload"])
                print(f"ok    {r['query']}{brief}")
            else:
                print(f"error {r['query']} [{r['code']}] {r['detail'].get('message', '')}")
                exit_code = max(exit_code, 3 if r["code"] == "ResourceLimit" else 2)
        if runner.aborted:
            exit_code = 3
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            fh.write(results_to_json(all_results))
    if args.report_dir:
        from .report import write_report

        write_report(args.report_dir, all_results)
    return exit_code


def _brief(pay: dict) -> str:
    if "value" in pay:
        return f" -> {str(pay['value']).lower()}"
    if "is_rbm" in pay:
        return f" -> is_rbm: {str(pay['is_rbm']).lower()}"
    if "rbm" in pay:
        keys = ("rbm", "ker_torsionless", "pseudo_ker_torsionless", "h_minus1_vanishes", "syzygy_match")
        return " -> " + ", ".join(f"{k}={str(pay[k]).lower()}" for k in keys)
    if "zero" in pay:
        return f" -> zero: {str(pay['zero']).lower()}"
    return ""


if __name__ == "__main__":
    sys.exit(main())
