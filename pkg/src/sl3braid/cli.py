"""Command line front end.

Exit codes: 0 pass, 1 property violation, 2 usage or parse error, 3 internal
fault in the foam machinery.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from sympy import SympifyError

from .braid import (
    BraidWord,
    MalformedBraid,
    MarkovMove,
    MoveNotApplicable,
    apply_move,
    format_braid,
    is_knot,
    mirror,
    parse_braid,
    random_transverse_sequence,
    self_linking,
)
from .coeff import NotARoot, UnsupportedRing, from_roots, potential, rationals, ring_from_tag, root_multiplicity
from .complex import (
    NotAKnot,
    RootsNotDistinct,
    build_complex,
    graded_euler_characteristic,
    homology_over_FU,
    homology_over_field,
)
from .foamval import IrreducibleConfiguration, SingularGram
from .web import closure_diagram, resolve

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    braid: Optional[BraidWord] = None
    ring: str = "q"
    potential: Optional[tuple] = None
    roots: Optional[tuple] = None
    root: Optional[str] = None
    root_index: Optional[int] = None
    mirror: bool = False
    json: bool = False
    seed: int = 0
    moves: int = 20
    count: int = 10
    dump_webs: bool = False
    inject_negative: bool = False

    def validate(self) -> "RunConfig":
        if self.command in ("homology", "beta", "psi", "check-invariance") and self.braid is None:
            raise UsageError("--braid is required")
        if self.potential is not None and self.roots is not None:
            raise UsageError("give either --potential or --roots")
        if self.root is not None and self.root_index is not None:
            raise UsageError("give either --root or --root-index")
        if self.root_index is not None:
            if self.roots is None:
                raise UsageError("--root-index needs --roots")
            if not 0 <= self.root_index < 3:
                raise UsageError("--root-index must be 0, 1 or 2")
        if self.moves < 0 or self.count < 0:
            raise UsageError("--moves and --count must be non-negative")
        ring_from_tag(self.ring)
        return self


def _triple(text: str, name: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3 or not all(parts):
        raise UsageError(f"{name} needs three comma-separated values")
    return tuple(parts)


def _config(ns: argparse.Namespace) -> RunConfig:
    braid = parse_braid(ns.braid) if getattr(ns, "braid", None) is not None else None
    return RunConfig(
        command=ns.command,
        braid=braid,
        ring=getattr(ns, "ring", "q"),
        potential=_triple(ns.potential, "--potential") if getattr(ns, "potential", None) else None,
        roots=_triple(ns.roots, "--roots") if getattr(ns, "roots", None) else None,
        root=getattr(ns, "root", None),
        root_index=getattr(ns, "root_index", None),
        mirror=getattr(ns, "mirror", False),
        json=getattr(ns, "json", False),
        seed=getattr(ns, "seed", 0),
        moves=getattr(ns, "moves", 20),
        count=getattr(ns, "count", 10),
        dump_webs=getattr(ns, "dump_webs", False),
        inject_negative=getattr(ns, "inject_negative", False),
    ).validate()


def _omega(cfg: RunConfig, ring=None):
    ring = ring or ring_from_tag(cfg.ring)
    if cfg.roots is not None:
        roots = [ring(r) for r in cfg.roots]
        return from_roots(ring, roots)
    a2, a1, a0 = cfg.potential or ("0", "0", "0")
    return potential(ring, a2, a1, a0)


def _fmt(omega, value) -> str:
    return str(omega.ring.dom.to_sympy(value))


def _emit(cfg: RunConfig, payload: dict, human: Sequence[str], out) -> None:
    if cfg.json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for line in human:
            out.write(line + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_homology(cfg: RunConfig, out=sys.stdout) -> int:
    B = mirror(cfg.braid) if cfg.mirror else cfg.braid
    omega = _omega(cfg)
    D = closure_diagram(B)
    C = build_complex(D, omega)
    H = homology_over_field(C) if omega.ring.is_field else homology_over_FU(C)
    payload = {
        "braid": format_braid(cfg.braid),
        "mirror": cfg.mirror,
        "ring": omega.ring.tag,
        "potential": [_fmt(omega, a) for a in omega.coeffs],
        "entries": H.to_json(),
        "total_rank": H.total_rank(),
    }
    human = [f"{payload['braid']} over {omega.ring.tag}, potential {payload['potential']}"]
    for e in H.entries:
        q = "-" if e.q is None else e.q
        tors = "".join(f" + (U^{k})^{m}" for k, m in e.torsion)
        human.append(f"  h={e.h:>3} q={q:>4}  rank {e.rank}{tors}")
    human.append(f"  total rank {H.total_rank()}")
    if cfg.dump_webs:
        webs = {}
        from itertools import product

        for bits in product((0, 1), repeat=len(D.crossings)):
            webs["".join(map(str, bits))] = resolve(D, bits).web.dump()
        payload["webs"] = webs
        human.extend(f"  [{k}] {v}" for k, v in webs.items())
    _emit(cfg, payload, human, out)
    return EXIT_OK


def _beta_report(B: BraidWord, omega, x1, cfg: RunConfig) -> dict:
    from .transverse import beta_chain, bennequin_check, c_invariant, class_vanishes, u_potential, verify_cycle

    beta = beta_chain(B, omega, x1)
    report = {
        "braid": format_braid(cfg.braid),
        "sl": self_linking(cfg.braid),
        "root": _fmt(omega, x1),
        "multiplicity": root_multiplicity(omega, x1),
        "is_cycle": verify_cycle(beta),
        "degree": beta.degree,
        "class_vanishes": class_vanishes(B, omega, x1) if omega.ring.is_field else None,
        "c": None,
        "inequalities": [],
    }
    if cfg.roots is not None and cfg.ring in ("q", "qu") and len(set(omega.roots)) == 3:
        uomega = u_potential(cfg.roots)
        i = list(omega.roots).index(x1)
        c = c_invariant(B, uomega, i)
        report["c"] = "inf" if c == float("inf") else c
        if is_knot(B) and not cfg.mirror:
            report["inequalities"] = [q.to_json() for q in bennequin_check(B, uomega, i).inequalities]
    return report


def cmd_beta(cfg: RunConfig, out=sys.stdout) -> int:
    from .transverse import independent_root_classes

    B = mirror(cfg.braid) if cfg.mirror else cfg.braid
    ring = ring_from_tag(cfg.ring)
    # the chains themselves live over a field; Q[U] is only used for c
    omega = _omega(cfg, rationals() if ring.tag == "qu" else ring)
    if cfg.root is not None:
        roots = [omega.ring(cfg.root)]
    elif cfg.root_index is not None:
        roots = [omega.roots[cfg.root_index]]
    elif omega.roots is not None:
        roots = list(dict.fromkeys(omega.roots))
    else:
        roots = [omega.ring(0)]
    classes = [_beta_report(B, omega, r, cfg) for r in roots]
    payload: dict = dict(classes[0]) if len(classes) == 1 else {
        "braid": format_braid(cfg.braid),
        "sl": self_linking(cfg.braid),
        "classes": classes,
    }
    if omega.roots is not None and len(set(omega.roots)) == 3 and omega.ring.is_field:
        payload["independent_rank"] = independent_root_classes(B, omega)
    human = []
    for c in classes:
        human.append(
            f"{c['braid']} root {c['root']} (multiplicity {c['multiplicity']}): "
            f"cycle={c['is_cycle']} degree={c['degree']} vanishes={c['class_vanishes']} c={c['c']}"
        )
        for q in c["inequalities"]:
            human.append(f"  {q['name']}: {q['lhs']} <= {q['rhs']}  {'pass' if q['pass'] else 'FAIL'}")
    if "independent_rank" in payload:
        human.append(f"  rank of the root classes: {payload['independent_rank']}")
    _emit(cfg, payload, human, out)
    bad = any(not c["is_cycle"] or c["degree"] != -2 * c["sl"] for c in classes)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_psi(cfg: RunConfig, out=sys.stdout) -> int:
    from .khsl2 import psi_class

    B = mirror(cfg.braid) if cfg.mirror else cfg.braid
    ring = ring_from_tag(cfg.ring)
    if not ring.is_field:
        raise UsageError("psi needs a field")
    psi = psi_class(B, ring)
    payload = {"braid": format_braid(cfg.braid), "psi_vanishes": psi.vanishes}
    _emit(cfg, payload, [f"{payload['braid']}: psi {'vanishes' if psi.vanishes else 'is nonzero'}"], out)
    return EXIT_OK if psi.is_cycle else EXIT_VIOLATION


def _invariants(B: BraidWord) -> dict:
    from .transverse import c_invariant, class_vanishes, u_potential

    Q = rationals()
    C = build_complex(closure_diagram(B), from_roots(Q, (0, 0, 0)))
    euler = graded_euler_characteristic(C)
    return {
        "sl": self_linking(B),
        "euler": {str(k): v for k, v in sorted(euler.coeffs.items())},
        "vanishes_simple": class_vanishes(B, from_roots(Q, (0, 1, -1)), 0),
        "vanishes_double": class_vanishes(B, from_roots(Q, (1, 1, 0)), 1),
        "vanishes_triple": class_vanishes(B, from_roots(Q, (0, 0, 0)), 0),
        "c": c_invariant(B, u_potential((0, 1, -1)), 0),
    }


def _move_text(m: MarkovMove) -> str:
    if m.kind == "conjugate":
        return f"conjugate({m.generator})"
    if m.kind == "relation":
        return f"relation@{m.position}"
    if m.kind == "stabilize" and m.generator < 0:
        return "stabilize(-)"
    return m.kind


def _apply_any(B: BraidWord, m: MarkovMove) -> BraidWord:
    if m.kind == "stabilize" and m.generator < 0:
        return BraidWord(B.strands + 1, B.letters + (-B.strands,))
    return apply_move(B, m)


def check_invariance(
    B: BraidWord,
    seed: int,
    count: int,
    moves: int,
    inject_negative: bool = False,
    max_strands: int = 3,
    max_letters: int = 4,
) -> dict:
    """Run ``count`` seeded transverse sequences and compare invariants at their ends.

    Intermediate braids stay within ``max_strands`` strands and ``max_letters``
    letters so that every complex stays small.
    """
    from .transverse import move_equivariance_check

    base = _invariants(B)
    runs = []
    for k in range(count):
        seq = random_transverse_sequence(B, moves, seed * 1000003 + k, max_strands, max_letters)
        if inject_negative and k == 0:
            seq = seq + [MarkovMove("stabilize", generator=-1)]
        cur = B
        transverse = True
        for m in seq:
            nxt = _apply_any(cur, m)
            if self_linking(nxt) != self_linking(cur):
                transverse = False
            cur = nxt
        inv = _invariants(cur)
        stable = inv == base
        equivariant = None
        if transverse:
            equivariant = move_equivariance_check(B, seq, from_roots(rationals(), (0, 1, -1)), 0)
        runs.append(
            {
                "moves": [_move_text(m) for m in seq],
                "final": format_braid(cur),
                "transverse": transverse,
                "stable": stable,
                "beta_equivariant": equivariant,
            }
        )
    ok = all(r["transverse"] and r["stable"] and r["beta_equivariant"] for r in runs)
    flagged = [i for i, r in enumerate(runs) if not r["transverse"]]
    return {
        "braid": format_braid(B),
        "seed": seed,
        "count": count,
        "invariants": {k: (v if v != float("inf") else "inf") for k, v in base.items()},
        "runs": runs,
        "non_transverse": flagged,
        "pass": ok,
    }


def cmd_check_invariance(cfg: RunConfig, out=sys.stdout) -> int:
    report = check_invariance(cfg.braid, cfg.seed, cfg.count, cfg.moves, cfg.inject_negative)
    human = [f"{report['braid']}: {cfg.count} sequences of {cfg.moves} moves, seed {cfg.seed}"]
    for i, r in enumerate(report["runs"]):
        status = "ok" if r["transverse"] and r["stable"] and r["beta_equivariant"] else "FAIL"
        note = "" if r["transverse"] else " (non-transverse: sl changed)"
        human.append(f"  [{i}] {status} -> {r['final']}{note}")
    human.append("pass" if report["pass"] else "fail")
    _emit(cfg, report, human, out)
    return EXIT_OK if report["pass"] else EXIT_VIOLATION


def selftest(quick_corpus: bool = True) -> list:
    """Symbolic identities, local relation tables and a small property suite."""
    from itertools import product

    from .braid import corpus
    from .coeff import generic_potential, sphere_value, theta_value
    from .complex import bracket_euler_characteristic, verify_d_squared
    from .foamval import ClosedPreFoam, Region, evaluate_closed, theta_foam
    from .transverse import beta_chain, dbetavanish_identity, techlemma_identity, verify_cycle

    results = []
    w = generic_potential()
    Q = rationals()
    x3 = from_roots(Q, (0, 0, 0))
    table = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    ok = all(
        evaluate_closed(theta_foam(d), x3) == table.get(d, 0)
        and evaluate_closed(theta_foam(d, True), x3) == -table.get(d, 0)
        and evaluate_closed(theta_foam(d), w) == theta_value(*d, w)
        for d in product(range(3), repeat=3)
    )
    results.append(("theta table", ok))
    sphere = [evaluate_closed(ClosedPreFoam((Region(0, d, ()),), ()), w) for d in range(3)]
    results.append(("sphere table", sphere == [0, 0, -1] and sphere == [sphere_value(w, d) for d in range(3)]))
    results.append(("P(A)P(B) vanishes on the theta web", not dbetavanish_identity()))
    results.append(("first-move identity", techlemma_identity().is_zero()))
    words = corpus(3, 2) if quick_corpus else corpus()
    d2 = eul = cyc = True
    F5 = ring_from_tag("f5")
    for B in words:
        D = closure_diagram(B)
        C = build_complex(D)
        d2 = d2 and verify_d_squared(C)
        eul = eul and graded_euler_characteristic(build_complex(D, x3)) == bracket_euler_characteristic(D)
        om = from_roots(F5, (0, 1, 4))
        cyc = cyc and all(
            verify_cycle(b) and b.degree == -2 * self_linking(B)
            for b in (beta_chain(B, om, r) for r in om.roots)
        )
    results.append(("d^2 = 0 on the small corpus", d2))
    results.append(("Euler characteristic equals the bracket sum", eul))
    results.append(("beta chains are cycles of degree -2 sl", cyc))
    return results


def cmd_selftest(cfg: RunConfig, out=sys.stdout) -> int:
    t = time.time()
    results = selftest()
    payload = {"results": [{"name": n, "pass": ok} for n, ok in results], "seconds": round(time.time() - t, 1)}
    human = [f"{'pass' if ok else 'FAIL'}  {n}" for n, ok in results]
    human.append(f"{sum(ok for _, ok in results)}/{len(results)} passed in {payload['seconds']}s")
    if cfg.json:
        payload.pop("seconds")
    _emit(cfg, payload, human, out)
    return EXIT_OK if all(ok for _, ok in results) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sl3braid", description="sl3 homology of braid closures and beta invariants")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, potential=True):
        sp.add_argument("--braid", help='braid word, e.g. "b=2; 1,1,1"')
        sp.add_argument("--ring", default="q", help="q, f2, f3, f5, f7, f11, f13 or qu")
        if potential:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--potential", help="a2,a1,a0 for x^3 + a2 x^2 + a1 x + a0")
            g.add_argument("--roots", help="r1,r2,r3")
        sp.add_argument("--mirror", action="store_true")
        sp.add_argument("--json", action="store_true")

    h = sub.add_parser("homology", help="homology of the closure")
    common(h)
    h.add_argument("--dump-webs", action="store_true")
    b = sub.add_parser("beta", help="beta chains, vanishing and c")
    common(b)
    g = b.add_mutually_exclusive_group()
    g.add_argument("--root")
    g.add_argument("--root-index", type=int)
    s = sub.add_parser("psi", help="Plamenevskaya class vanishing")
    common(s, potential=False)
    c = sub.add_parser("check-invariance", help="random transverse move sequences")
    common(c, potential=False)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--moves", type=int, default=20)
    c.add_argument("--count", type=int, default=10)
    c.add_argument("--inject-negative", action="store_true", help="append a negative stabilization to the first run")
    t = sub.add_parser("selftest", help="identities and a small property suite")
    t.add_argument("--json", action="store_true")
    return p


_COMMANDS = {
    "homology": cmd_homology,
    "beta": cmd_beta,
    "psi": cmd_psi,
    "check-invariance": cmd_check_invariance,
    "selftest": cmd_selftest,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = _config(ns)
        return _COMMANDS[cfg.command](cfg, out)
    except (MalformedBraid, UsageError, UnsupportedRing, NotARoot, MoveNotApplicable, NotAKnot, RootsNotDistinct) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except (SympifyError, ValueError, TypeError) as e:  # unparsable ring elements
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except (IrreducibleConfiguration, SingularGram) as e:
        sys.stderr.write(f"internal fault: {e}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
