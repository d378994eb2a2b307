"""Acceptance suite: one test per criterion, each printing a pass/fail line."""
import io
import random
import sys
import time
from contextlib import contextmanager
from itertools import product


from sl3braid.braid import (
    apply_moves,
    corpus,
    is_knot,
    mirror,
    parse_braid,
    random_transverse_sequence,
)
from sl3braid.cli import main
from sl3braid.coeff import (
    from_roots,
    generic_potential,
    prime_field,
    rationals,
    sphere_value,
    split_root,
    theta_value,
)
from sl3braid.complex import (
    bracket_euler_characteristic,
    build_complex,
    graded_euler_characteristic,
    homology_over_field,
    j_invariants,
    verify_d_squared,
)
from sl3braid.foamval import (
    ClosedPreFoam,
    Region,
    cached_web_basis,
    close_up,
    compose,
    evaluate_closed,
    reverse,
    theta_foam,
)
from sl3braid.khsl2 import psi_vanishes
from sl3braid.linalg import valuation
from sl3braid.transverse import (
    beta_chain,
    bennequin_check,
    c_invariant,
    class_vanishes,
    dbetavanish_identity,
    independent_root_classes,
    shifted_triple_root_verdicts,
    techlemma_identity,
    u_potential,
    verify_cycle,
)
from sl3braid.web import closure_diagram, kuperberg_bracket, resolve

Q = rationals()
F2 = prime_field(2)
F5 = prime_field(5)
CORPUS = corpus()
SAMPLES = [parse_braid(t) for t in ("b=2; 1,1", "b=2; 1,1,1", "b=2; -1", "b=3; 1,-2")]


@contextmanager
def criterion(number: int, title: str, budget: float, capsys):
    start = time.time()
    state = {"ok": False, "detail": ""}
    try:
        yield state
        elapsed = time.time() - start
        state["ok"] = state["ok"] and elapsed < budget
        state["detail"] = f"{state['detail']} ({elapsed:.1f}s of {budget:.0f}s)".strip()
    finally:
        with capsys.disabled():
            mark = "PASS" if state["ok"] else "FAIL"
            sys.stdout.write(f"\n[{mark}] criterion {number:>2}: {title} {state['detail']}\n")
    assert state["ok"], state["detail"]


def test_criterion_01_local_relation_tables(capsys):
    with criterion(1, "sphere and theta tables from the evaluator", 1, capsys) as st:
        w = generic_potential()
        x3 = from_roots(Q, (0, 0, 0))
        sphere = [evaluate_closed(ClosedPreFoam((Region(0, d, ()),), ()), w) for d in range(3)]
        table = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
        bad = []
        for d in product(range(3), repeat=3):
            if evaluate_closed(theta_foam(d), x3) != table.get(d, 0):
                bad.append(d)
            if evaluate_closed(theta_foam(d, reverse_orientation=True), x3) != -table.get(d, 0):
                bad.append(("reversed",) + d)
            if evaluate_closed(theta_foam(d), w) != theta_value(*d, w):
                bad.append(("generic",) + d)
        st["ok"] = sphere == [0, 0, -1] and sphere == [sphere_value(w, d) for d in range(3)] and not bad
        st["detail"] = f"sphere={sphere} mismatches={bad[:3]}"


def test_criterion_02_p_times_p_vanishes_on_theta(capsys):
    with criterion(2, "P(A)P(B) = 0 on the theta web over the split ring", 1, capsys) as st:
        residue = dbetavanish_identity()
        st["ok"] = residue == {}
        st["detail"] = f"residue={residue}"


def test_criterion_03_first_move_identity(capsys):
    with criterion(3, "five-term identity in A (x) A", 1, capsys) as st:
        residue = techlemma_identity()
        st["ok"] = residue.is_zero()
        st["detail"] = f"residue={residue.terms}"


def test_criterion_04_d_squared(capsys):
    with criterion(4, "d^2 = 0 over the corpus for all rings and potentials", 120, capsys) as st:
        potentials = []
        for R in (Q, F2, F5):
            potentials += [from_roots(R, r) for r in ((0, 0, 0), (0, 1, -1), (1, 1, 0))]
        potentials.append(u_potential((0, 1, -1)))
        bad = []
        for B in CORPUS:
            D = closure_diagram(B)
            if not verify_d_squared(build_complex(D)):
                bad.append((str(B), "generic"))
            for w in potentials:
                if not verify_d_squared(build_complex(D, w)):
                    bad.append((str(B), w.ring.tag, w.coeffs))
        st["ok"] = not bad
        st["detail"] = f"{len(CORPUS)} braids x {len(potentials)} potentials, failures={bad[:3]}"


def test_criterion_05_euler_oracle(capsys):
    with criterion(5, "Euler characteristic equals the bracket sum and is Markov invariant", 120, capsys) as st:
        x3 = from_roots(Q, (0, 0, 0))
        bad = []
        for B in CORPUS:
            D = closure_diagram(B)
            if graded_euler_characteristic(build_complex(D, x3)) != bracket_euler_characteristic(D):
                bad.append(str(B))
        moved = []
        for B in SAMPLES:
            ref = graded_euler_characteristic(build_complex(closure_diagram(B), x3))
            for k in range(50):
                seq = random_transverse_sequence(B, 12, seed=1000 + k, max_strands=3, max_letters=4)
                B2 = apply_moves(B, seq)
                if graded_euler_characteristic(build_complex(closure_diagram(B2), x3)) != ref:
                    moved.append((str(B), k))
        st["ok"] = not bad and not moved
        st["detail"] = f"bracket mismatches={bad[:3]} unstable sequences={moved[:3]}"


def _admissible():
    out = []
    for R in (Q, F5):
        for roots in ((0, 1, -1), (1, 1, 0), (0, 0, 0)):
            w = from_roots(R, roots)
            out += [(w, r) for r in dict.fromkeys(w.roots)]
    return out


def test_criterion_06_beta_cycle_and_degree(capsys):
    with criterion(6, "beta is a cycle of degree -2 sl", 60, capsys) as st:
        bad = []
        pairs = _admissible()
        for B in CORPUS:
            for w, r in pairs:
                beta = beta_chain(B, w, r)
                if not verify_cycle(beta) or beta.degree != -2 * (len([k for k in B.letters if k > 0]) - len([k for k in B.letters if k < 0]) - B.strands):
                    bad.append((str(B), w.ring.tag, str(r)))
        st["ok"] = not bad
        st["detail"] = f"{len(CORPUS)} braids x {len(pairs)} (potential, root) pairs, failures={bad[:3]}"


def test_criterion_07_simple_roots(capsys):
    with criterion(7, "simple-root classes are nonzero and independent", 120, capsys) as st:
        bad = []
        for R in (Q, F5):
            w = from_roots(R, (0, 1, -1))
            for B in CORPUS:
                if any(class_vanishes(B, w, r) for r in w.roots):
                    bad.append((str(B), R.tag, "vanishes"))
                if independent_root_classes(B, w) != 3:
                    bad.append((str(B), R.tag, "dependent"))
                if is_knot(B):
                    H = homology_over_field(build_complex(closure_diagram(B), w))
                    if H.rank_at(0) != 3 or H.total_rank() != 3:
                        bad.append((str(B), R.tag, "shape"))
        st["ok"] = not bad
        st["detail"] = f"failures={bad[:3]}"


def test_criterion_08_double_root_equals_psi(capsys):
    with criterion(8, "double-root vanishing equals psi vanishing", 180, capsys) as st:
        bad = []
        vanishing = 0
        for R in (Q, F2):
            w1, w2 = from_roots(R, (1, 1, 0)), from_roots(R, (0, 0, 1))
            for B in CORPUS:
                v1 = class_vanishes(B, w1, 1)
                v2 = class_vanishes(B, w2, 0)
                psi = psi_vanishes(B, R)
                vanishing += psi
                if not v1 == v2 == psi:
                    bad.append((str(B), R.tag, v1, v2, psi))
        st["ok"] = not bad
        st["detail"] = f"{vanishing} vanishing verdicts, disagreements={bad[:3]}"


def test_criterion_09_triple_root_shift(capsys):
    with criterion(9, "triple-root verdict equals the x^3 verdict via the dot shift", 60, capsys) as st:
        bad = []
        for B in CORPUS:
            v1, v0, mapped = shifted_triple_root_verdicts(B, Q, 1)
            if v1 != v0 or not mapped:
                bad.append((str(B), v1, v0, mapped))
        st["ok"] = not bad
        st["detail"] = f"failures={bad[:3]}"


def test_criterion_10_c_invariant(capsys):
    with criterion(10, "c of the unknot, c = 0 iff psi3 != 0, transverse invariance", 180, capsys) as st:
        w = u_potential((0, 1, -1))
        # direct divisibility: beta of the unknot is x^2 + a1' x + a0' in F[U][x]/(x^3 - U^2 x)
        b1, b0 = split_root(w, w.roots[0])
        oracle = int(min(valuation(c) for c in (b0, b1, w.ring.one) if c))
        unknot = c_invariant(parse_braid("b=1;"), w, 0)
        x3 = from_roots(Q, (0, 0, 0))
        mismatch = [
            str(B) for B in CORPUS if (c_invariant(B, w, 0) == 0) == class_vanishes(B, x3, 0)
        ]
        moved = []
        for B in SAMPLES:
            ref = [c_invariant(B, w, i) for i in range(3)]
            for k in range(50):
                seq = random_transverse_sequence(B, 12, seed=2000 + k, max_strands=3, max_letters=4)
                B2 = apply_moves(B, seq)
                if [c_invariant(B2, w, i) for i in range(3)] != ref:
                    moved.append((str(B), k))
        st["ok"] = unknot == 0 and oracle == 0 and not mismatch and not moved
        st["detail"] = f"c(unknot)={unknot} oracle={oracle} mismatches={mismatch[:3]} unstable={moved[:3]}"


def test_criterion_11_bennequin(capsys):
    with criterion(11, "Bennequin-type inequalities and mirror duality of j", 180, capsys) as st:
        w = u_potential((0, 1, -1))
        knots = [B for B in CORPUS if is_knot(B)] + [parse_braid("b=3; 1,2,1,2")]
        failed, duality = [], []
        for B in knots:
            for i in range(3):
                rep = bennequin_check(B, w, i)
                for q in rep.inequalities:
                    if not q.ok:
                        failed.append((str(B), i, q.name, q.lhs, str(q.rhs)))
            wq = from_roots(Q, (0, 1, -1))
            js = j_invariants(build_complex(closure_diagram(B), wq))
            jm = j_invariants(build_complex(closure_diagram(mirror(B)), wq))
            if any(jm[i] != -js[2 - i] for i in range(3)):
                duality.append(str(B))
        st["ok"] = not failed and not duality
        st["detail"] = f"{len(knots)} knots, violations={sorted(set(failed))[:4]} duality failures={duality}"


def test_criterion_12_determinism(capsys):
    with criterion(12, "seeded reports repeat and reduction order does not matter", 120, capsys) as st:
        argv = ["check-invariance", "--braid", "b=2; 1,1", "--count", "5", "--moves", "12", "--seed", "9", "--json"]
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            code = main(argv, out=buf)
            outs.append((code, buf.getvalue()))
        same = outs[0] == outs[1] and outs[0][0] == 0
        rng = random.Random(12)
        D = closure_diagram(parse_braid("b=3; 1,2,1,2"))
        webs = [resolve(D, bits).web for bits in product((0, 1), repeat=4)]
        bracket_bad = 0
        for k in range(1000):
            web = webs[k % len(webs)]
            if kuperberg_bracket(web, rng) != kuperberg_bracket(web):
                bracket_bad += 1
        w = from_roots(Q, (0, 1, -1))
        basis = cached_web_basis(resolve(D, (0, 0, 0, 0)).web)
        foams = []
        for b in basis.elements[::7]:
            for c in basis.elements[::11]:
                pf = close_up(compose(b, reverse(c)))
                foams.append((pf, evaluate_closed(pf, w)))
        eval_bad = 0
        for k in range(1000):
            pf, ref = foams[k % len(foams)]
            if evaluate_closed(pf, w, rng) != ref:
                eval_bad += 1
        st["ok"] = same and not bracket_bad and not eval_bad
        st["detail"] = f"identical reports={same} bracket mismatches={bracket_bad} evaluation mismatches={eval_bad}"
