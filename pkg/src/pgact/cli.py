"""Command line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for unreadable input or an unmet precondition.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import fixtures as fx
from .action import standing_hypotheses, verify_partial_action
from .errors import InstanceError, PgactError, PreconditionError
from .galois import (
    enumeration_condition_all, enumeration_condition, find_galois, invariants, invariants_iso, isotropy_invariants,
    galois_characterization, trace, trace_report, transfer_to_global, transfer_to_partial, verify_galois,
)
from .globalize import build_globalization, can_globalize, equivalence, verify_globalization
from .groupoid import verify_groupoid
from .instance import (
    Instance, algebra_file, dump_yaml, element_data, instance_data, load_instance, load_modules,
    subspace_data, supplied_globalization,
)
from .linalg import Field
from .random_instances import random_instance
from .report import VerificationReport
from .skewring import SkewRing, corners, morita_context_global

REPORT_FORMAT = "pgact-report/1"
OK, FAIL, BAD_INPUT = 0, 1, 2


@dataclass
class Outcome:
    code: int
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    reports: list[VerificationReport] = field(default_factory=list)
    artifact: str | None = None  # text written by --out

    def say(self, text: str):
        self.lines.append(text)


def _from_report(rep: VerificationReport, out: Outcome, verbose=False) -> bool:
    out.reports.append(rep)
    out.say(rep.summary(verbose))
    return rep.ok


def _read(args) -> Instance:
    if args.instance == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.instance, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InstanceError(f"cannot read {args.instance}: {exc.strerror}") from None
    override = Field.parse(args.field) if args.field else None
    return load_instance(text, override)


def _require_hypotheses(A):
    rep = standing_hypotheses(A)
    if not rep.ok:
        bad = rep.first_failure()
        raise PreconditionError(bad.detail or bad.name, bad.name, bad.witness)


def _hypothesis_tag(hyp: VerificationReport) -> str:
    if hyp.ok:
        return ""
    direct = hyp.by_name("direct_sum")
    return "hypotheses violated: R ≠ ⊕D_e" if direct and not direct[0].ok else "hypotheses violated"


def _enumeration(args, inst):
    """Declared enumeration, or with ``--enumerate-xsets all`` the first one passing the condition."""
    G = inst.groupoid
    if args.enumerate_xsets == "all":
        for en, ok, _ in enumeration_condition_all(G):
            if ok:
                return en
        raise PreconditionError("no enumeration of the sets X_e satisfies the transfer condition",
                                "enumeration condition")
    return inst.enumeration


# -- commands ---------------------------------------------------------------------

def cmd_check_groupoid(args, inst, out: Outcome):
    G = inst.groupoid
    d = G.to_dict()
    rep = verify_groupoid(d["elements"], {(g, h): gh for g, h, gh in d["compose"]}, d["inverse"])
    ok = _from_report(rep, out)
    out.say(f"|G| = {len(G)}, identities: {', '.join(G.identities)}")
    out.data.update(order=len(G), identities=list(G.identities))
    return OK if ok else FAIL


def cmd_check_action(args, inst, out: Outcome):
    A = inst.action
    ok = _from_report(verify_partial_action(A), out)
    hyp = standing_hypotheses(A)
    out.say(f"standing hypotheses: {'hold' if hyp.ok else 'fail'}")
    for c in hyp.failures:
        out.say(f"  {c.name}: {c.detail}")
    out.data["standing_hypotheses"] = hyp.ok
    return OK if ok else FAIL


def cmd_globalize(args, inst, out: Outcome):
    A = inst.action
    rep = can_globalize(A)
    if not rep.ok:
        _from_report(rep, out)
        return FAIL
    Gl = build_globalization(A, _enumeration(args, inst))
    ok = _from_report(verify_globalization(Gl), out)
    dims = Gl.dims()
    out.say(f"dim T = {Gl.T.dim}")
    for g in A.groupoid:
        out.say(f"  dim E_{g} = {Gl.E(g).dim}")
    for e in A.groupoid.identities:
        out.say(f"  phi_{e}: " + ", ".join(f"{A.algebra.fmt(v)} -> {Gl.T.fmt(Gl.phi[e](v))}"
                                          for v in A.D(e).rows))
    out.data.update(dims=dims, enumeration=Gl.enumeration)
    out.artifact = dump_yaml(instance_data(A, inst.galois_system, Gl, inst.module_specs, inst.enumeration))
    return OK if ok else FAIL


def cmd_skew_ring(args, inst, out: Outcome):
    ring = SkewRing(inst.action, check=False)
    ok = _from_report(ring.verify(), out)
    out.say(f"dim = {ring.dim}; basis: {', '.join(ring.algebra.labels)}")
    out.data.update(dim=ring.dim, labels=list(ring.algebra.labels))
    out.artifact = dump_yaml(algebra_file(ring.algebra))
    return OK if ok else FAIL


def cmd_corners(args, inst, out: Outcome):
    A = inst.action
    Gl = build_globalization(A, _enumeration(args, inst))
    cor = corners(Gl)
    ok = _from_report(cor.report, out)
    ctx = morita_context_global(Gl, cor)
    out.say(f"Morita context: tau onto = {ctx.tau_surjective}, tau' onto = {ctx.tau_prime_surjective}, "
            f"strict = {ctx.strict}")
    out.data.update(cor.report.data, strict=ctx.strict)
    return OK if ok and ctx.strict else FAIL


def cmd_invariants(args, inst, out: Outcome):
    A = inst.action
    R = A.algebra
    hyp = standing_hypotheses(A)
    Ra = invariants(A)
    tag = f" ({_hypothesis_tag(hyp)})" if not hyp.ok else ""
    out.say(f"R^alpha: dim {Ra.dim}, basis {{{', '.join(R.fmt(v) for v in Ra.rows)}}}{tag}")
    iso_inv = isotropy_invariants(A)
    rel = "=" if iso_inv == Ra else "strictly inside"
    out.say(f"R^alpha {rel} the sum of isotropy invariants (dim {iso_inv.dim})")
    out.data.update(basis=subspace_data(R, Ra), dim=Ra.dim, isotropy_dim=iso_inv.dim, hypotheses=hyp.ok)
    ok = Ra <= iso_inv
    if hyp.ok:
        Gl = build_globalization(A, _enumeration(args, inst))
        iso = invariants_iso(Gl)
        ok = _from_report(iso.report, out) and ok
        out.say(f"T^beta: dim {iso.report.data['dim_T_beta']}")
    return OK if ok else FAIL


def cmd_trace(args, inst, out: Outcome):
    A = inst.action
    R = A.algebra
    x = R.element(args.element)
    hyp = standing_hypotheses(A)
    t = trace(A, x)
    Ra = invariants(A)
    out.say(R.fmt(t) + (f" ({_hypothesis_tag(hyp)})" if not hyp.ok else ""))
    out.say(f"{'in' if t in Ra else '∉'} R^α")
    rep = trace_report(A)
    out.reports.append(rep)
    out.data.update(trace=element_data(R, t), in_invariants=t in Ra, hypotheses=hyp.ok)
    # with the hypotheses violated the trace identities are expected to fail
    return OK if (rep.ok or not hyp.ok) else FAIL


def cmd_galois(args, inst, out: Outcome):
    A = inst.action
    R = A.algebra
    _require_hypotheses(A)
    if args.mode == "verify":
        if inst.galois_system is None:
            raise InstanceError("the instance has no galois_system section", "galois_system")
        return OK if _from_report(verify_galois(A, inst.galois_system), out, verbose=True) else FAIL
    system = find_galois(A)
    if system is None:
        out.say("no Galois coordinate system exists")
        out.data["system"] = None
        return FAIL
    out.say("Galois coordinate system:")
    for x, y in system:
        out.say(f"  ({R.fmt(x)}, {R.fmt(y)})")
    out.data["system"] = [[element_data(R, x), element_data(R, y)] for x, y in system]
    out.artifact = dump_yaml(instance_data(A, system, None, inst.module_specs, inst.enumeration))
    return OK


def cmd_transfer(args, inst, out: Outcome):
    A = inst.action
    _require_hypotheses(A)
    system = inst.galois_system
    if system is None:
        system = find_galois(A)
        if system is None:
            out.say("no Galois coordinate system to transfer")
            return FAIL
    if not _from_report(verify_galois(A, system), out):
        return FAIL
    en = _enumeration(args, inst)
    ok_enum, wit = enumeration_condition(A.groupoid, en)
    if not ok_enum:
        raise PreconditionError(f"transfer condition fails for l={wit[0]}, j={wit[1]}",
                                "enumeration condition", wit)
    Gl = build_globalization(A, en)
    glob = transfer_to_global(Gl, system)
    ok = _from_report(verify_galois(Gl.beta, glob), out)
    T = Gl.T
    out.say(f"global system on T ({len(glob)} pairs):")
    for a, b in glob:
        out.say(f"  ({T.fmt(a)}, {T.fmt(b)})")
    back = transfer_to_partial(Gl, glob)
    ok = _from_report(verify_galois(A, back), out) and ok
    out.data.update(global_system=[[element_data(T, a), element_data(T, b)] for a, b in glob])
    return OK if ok else FAIL


def cmd_characterize(args, inst, out: Outcome):
    A = inst.action
    ring = SkewRing(A)
    mods = load_modules(inst, ring)
    res = galois_characterization(A, mods, inst.galois_system)
    names = {"i": "Galois coordinate system", "ii": "j iso and R f.g. projective",
             "iii": "mu bijective", "iv": "rho bijective", "v": "RtR = skew ring",
             "vi": "tau' onto", "viii": "t(R) = R^alpha", "x": "context strict"}
    for k, v in res.conditions.items():
        out.say(f"({k}) {names[k]}: {v}")
    out.say(f"consistent: {res.consistent}")
    out.say("sufficient hypotheses: " + ", ".join(f"{k}={v}" for k, v in res.sufficient.items()))
    out.reports.append(res.report)
    out.data.update(res.to_dict())
    return OK if res.report.ok else FAIL


def cmd_equivalence(args, inst, out: Outcome):
    other = supplied_globalization(inst)
    if other is None:
        raise InstanceError("the instance has no globalization section", "globalization")
    given = verify_globalization(other)
    if not given.ok:
        _from_report(given, out)
        return FAIL
    own = build_globalization(inst.action, _enumeration(args, inst))
    there = equivalence(other, own)
    back = equivalence(own, other)
    _from_report(there.report, out)
    _from_report(back.report, out)
    out.say(f"equivalent: {there.ok and back.ok}")
    out.data["equivalent"] = there.ok and back.ok
    return OK if there.ok and back.ok else FAIL


COMMANDS = {
    "check-groupoid": cmd_check_groupoid,
    "check-action": cmd_check_action,
    "globalize": cmd_globalize,
    "skew-ring": cmd_skew_ring,
    "corners": cmd_corners,
    "invariants": cmd_invariants,
    "trace": cmd_trace,
    "galois": cmd_galois,
    "transfer": cmd_transfer,
    "characterize": cmd_characterize,
    "equivalence": cmd_equivalence,
}


# names kept for compatibility with the documented command set
ALIASES = {"characterize": ["theorem53"]}


def parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="override the scalar field: rational or fp:<p>")
    common.add_argument("--out", help="write the constructed object to this path")
    common.add_argument("--format", choices=["text", "machine"], default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for random instances")
    common.add_argument("--enumerate-xsets", choices=["all", "declared"], default="declared",
                        help="which enumerations of the sets X_e to use")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="pgact", description="Partial groupoid actions on finite algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], aliases=ALIASES.get(name, []))
        if name == "trace":
            sp.add_argument("element", help='an element such as "e2 + 2*e3"')
        if name == "galois":
            sp.add_argument("mode", choices=["verify", "find"])
        sp.add_argument("instance", nargs="?", default="-", help="instance file, or - for stdin")
    fp = sub.add_parser("fixtures", parents=[common], help="print a built-in instance")
    fp.add_argument("name", help=f"one of: {', '.join(fx.FIXTURES)}, or 'list'")
    rp = sub.add_parser("random", parents=[common], help="print a random instance")
    rp.add_argument("--max-dim", type=int, default=8)
    return p


def _emit(args, out: Outcome, stream):
    if args.format == "machine":
        doc = {
            "format": REPORT_FORMAT,
            "command": args.command,
            "exit_code": out.code,
            "ok": out.code == OK,
            "messages": out.lines,
            "data": out.data,
            "reports": [r.to_dict() for r in out.reports],
        }
        stream.write(json.dumps(doc, indent=2, default=str, ensure_ascii=False) + "\n")
    else:
        for line in out.lines:
            stream.write(line + "\n")
        if args.verbose:
            for r in out.reports:
                stream.write(r.summary(True) + "\n")


def _fixture_text(args) -> tuple[int, str]:
    if args.name == "list":
        return OK, "\n".join(fx.FIXTURES) + "\n"
    field_ = Field.parse(args.field) if args.field else None
    A = fx.fixture(args.name, field_)
    system = fx.fx_d_galois_system(field_) if args.name == "FX-D" else None
    return OK, dump_yaml(instance_data(A, system, name=args.name))


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = parser().parse_args(argv)
    args.command = next((k for k, v in ALIASES.items() if args.command in v), args.command)
    out = Outcome(OK)
    try:
        if args.command in ("fixtures", "random"):
            if args.command == "fixtures":
                code, text = _fixture_text(args)
            else:
                field_ = Field.parse(args.field) if args.field else None
                ri = random_instance(args.seed, field_, max_dim=args.max_dim)
                code, text = OK, dump_yaml(instance_data(ri.action, name=f"random-{args.seed}"))
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                stdout.write(text)
            return code
        inst = _read(args)
        out.code = COMMANDS[args.command](args, inst, out)
    except KeyError as exc:
        out.code = BAD_INPUT
        out.say(f"error: {exc.args[0]}")
    except InstanceError as exc:
        out.code = BAD_INPUT
        out.say(f"input error: {exc}")
        out.data["error"] = {"field": exc.field, "line": exc.line, "message": str(exc)}
    except PreconditionError as exc:
        out.code = BAD_INPUT
        out.say(f"precondition violated ({exc.hypothesis}): {exc}")
        out.data["error"] = {"hypothesis": exc.hypothesis, "witness": exc.witness, "message": str(exc)}
    except PgactError as exc:
        out.code = BAD_INPUT
        out.say(f"error: {exc}")
        out.data["error"] = {"message": str(exc)}
    if args.out and out.artifact is not None and out.code != BAD_INPUT:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out.artifact)
    _emit(args, out, stdout)
    return out.code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
