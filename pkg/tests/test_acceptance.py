"""The eight acceptance criteria, one test each; every test records a PASS/FAIL line."""
import time
from importlib.resources import files

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import record
from llworkbench import ctl as C
from llworkbench import formulas as F
from llworkbench import hyll_syntax as H
from llworkbench.encoders import adequacy_crosscheck, build_ll_theory, build_sell_theory
from llworkbench.hyll import check_cut_instance, prove_hyll, replay_hyll, sequent, zero_admissibility
from llworkbench.mumall import check_mumall
from llworkbench.parser import parse_formula, parse_hyll, parse_judgment, parse_world
from llworkbench.printer import formula_str, hyll_str, judgment_str, world_str
from llworkbench.problems import parse_problem
from llworkbench.proof import Verdict
from llworkbench.sellf import label_name, prove_sell
from llworkbench.signature import SubexpSignature
from llworkbench.worlds import Nat
from strategies import ctl_formulas, hyll_formulas, ll_formulas, systems, worlds

CORPUS = files("llworkbench") / "corpus"
J = H.HyllJudgment


def _settings(n):
    return settings(max_examples=n, deadline=None, derandomize=True, database=None,
                    suppress_health_check=list(HealthCheck))


def _hyll_corpus():
    out = []
    for entry in sorted(CORPUS.joinpath("hyll").iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".prob"):
            out.append((entry.name, parse_problem(entry.read_text(encoding="utf-8"))))
    return out


def _system(name):
    return C.parse_system(CORPUS.joinpath("ctl", name).read_text(encoding="utf-8"))


_ADEQUACY = {}


def _adequacy():
    """Run the three engines over the corpus once; both encoding criteria share it."""
    if not _ADEQUACY:
        start = time.perf_counter()
        _ADEQUACY["rows"] = [(name, p, adequacy_crosscheck(p.sequent, p.depth or 3, domain=p.domain))
                             for name, p in _hyll_corpus()]
        _ADEQUACY["seconds"] = time.perf_counter() - start
    return _ADEQUACY["rows"], _ADEQUACY["seconds"]


def _agreement(rows, side):
    exhausted = Verdict.EXHAUSTED.value
    decided = [(n, r) for n, _, r in rows if exhausted not in (r["hyll"], r[side])]
    bad = [n for n, r in decided if r["hyll"] != r[side]]
    return decided, bad


def test_criterion_1_hyll_to_ll():
    rows, seconds = _adequacy()
    decided, bad = _agreement(rows, "ll")
    bipoles = all(r["bipoles"] for _, _, r in rows if r["ll"] == Verdict.PROVED.value)
    ok = len(rows) >= 30 and not bad and bipoles and seconds < 60
    record(1, "HyLL->LL adequacy", ok,
           f"{len(decided) - len(bad)}/{len(decided)} decided cases agree ({len(rows)} in corpus), "
           f"bipole decides {'ok' if bipoles else 'BROKEN'}, {seconds:.1f}s")
    assert ok, bad


def _promotions(proof, sig):
    """(checked, violations) over ``!l`` steps whose body is a meta atom."""
    checked, bad = 0, 0
    for node in proof.nodes():
        focus = getattr(node.conclusion, "focus", None)
        if node.rule != "!l" or not isinstance(focus.body, F.Atom):
            continue
        checked += 1
        lab = label_name(focus.label)
        kept = {x for x, fs in node.premises[0].conclusion.k if fs}
        for x, fs in node.conclusion.k:
            if fs and (x in kept) != sig.admit(lab).admit(x).leq(lab, x):
                bad += 1
    return checked, bad


def test_criterion_2_hyll_to_sell():
    from llworkbench.encoders import encode_hyll_sequent_sell
    rows, _ = _adequacy()
    decided, bad = _agreement(rows, "sell")
    promo_cases, violations = 0, 0
    for _, p, r in rows:
        if r["proofs"]["sell"] is None:
            continue
        sig = encode_hyll_sequent_sell(p.sequent).sig
        n, v = _promotions(r["proofs"]["sell"], sig)
        promo_cases += n > 0
        violations += v
    ok = not bad and promo_cases >= 5 and violations == 0
    record(2, "HyLL->SELL adequacy", ok,
           f"{len(decided) - len(bad)}/{len(decided)} decided cases agree; {promo_cases} proofs promote "
           f"meta atoms, {violations} context-weakening violations")
    assert ok, bad


# cut formulas X are placed in fixed contexts that derive X@w and then use it
_D1 = [
    lambda x, b, w: [J(x, w)],
    lambda x, b, w: [J(b, w), J(H.HLimp(b, x), w)],
    lambda x, b, w: [J(H.HWith(x, b), w)],
    lambda x, b, w: [J(H.HAt(x, w), Nat(2))],
    lambda x, b, w: [J(H.HTensor(H.H_ONE, x), w)],
]
_D2 = [
    lambda x, c, w, v: ([], J(H.HPlus(x, c), w)),
    lambda x, c, w, v: ([J(c, v)], J(H.HTensor(x, H.HAt(c, v)), w)),
    lambda x, c, w, v: ([], J(H.HAt(x, w), v)),
    lambda x, c, w, v: ([J(H.HLimp(x, c), w)], J(c, w)),
    lambda x, c, w, v: ([], J(H.HWith(x, x), w)),
    lambda x, c, w, v: ([], J(H.HDown(H.HAt(x, w)), v)),
]


def test_criterion_3_identity_and_cut():
    ident = []

    @_settings(50)
    @given(hyll_formulas(depth=4), st.integers(0, 3))
    def identity(a, w):
        s = sequent([J(H.HAtom("g"), Nat(0))], [J(a, Nat(w))], J(a, Nat(w)))
        r = prove_hyll(s, 4)
        ident.append(r.proved and replay_hyll(r.proof))

    cuts = []

    @_settings(100)
    @given(hyll_formulas(depth=2), hyll_formulas(depth=1), hyll_formulas(depth=1), st.integers(0, 4),
           st.integers(0, 5), st.integers(0, 3), st.integers(0, 3))
    def cut_instance(x, b, c, i, k, w, v):
        w, v = Nat(w), Nat(v)
        left = sequent([], _D1[i](x, b, w), J(x, w))
        extra, goal = _D2[k](x, c, w, v)
        right = sequent([], extra + [J(x, w)], goal)
        d1, d2 = prove_hyll(left, 3), prove_hyll(right, 3)
        if not (d1.proved and d2.proved):
            cuts.append(None)
            return
        r = check_cut_instance(d1.proof, d2.proof, 6)
        cuts.append(r.proved and replay_hyll(r.proof))

    identity()
    cut_instance()
    made = [c for c in cuts if c is not None]
    ok = len(ident) == 50 and all(ident) and len(made) >= 100 and all(made)
    record(3, "identity/cut", ok,
           f"identity {sum(ident)}/{len(ident)}, cut-free composites {sum(made)}/{len(made)} "
           f"({len(cuts) - len(made)} generated pairs lacked a premise proof)")
    assert ok


def test_criterion_4_confinement():
    sig = SubexpSignature.build({"w", "v"})
    refute = [("?^w !^w top", "0"), ("?^w !^w top", "!^v ?^v 0")]
    sell_ok = all(prove_sell(sig, {}, (), tuple(map(parse_formula, g)), 8).verdict is Verdict.REFUTED
                  for g in refute)
    control = prove_sell(sig, {}, (), (parse_formula("?^w !^w top"), parse_formula("!^w ?^w 0")), 8).proved
    zeros = []

    @_settings(10)
    @given(hyll_formulas(depth=3), st.integers(0, 3), st.integers(0, 3))
    def zero_left(f, u, w):
        r = prove_hyll(sequent([], [J(H.H_ZERO, Nat(u))], J(f, Nat(w))), 0)
        zeros.append(r.proved and r.proof.rule == "0L" and replay_hyll(r.proof))

    zero_left()
    d = zero_admissibility([parse_judgment("q @ 2")], parse_hyll("p * r"), parse_world("1"), parse_world("3"))
    derived = replay_hyll(d, extra={"0'L", "cut"}) and not replay_hyll(d)
    ok = sell_ok and control and len(zeros) == 10 and all(zeros) and derived
    record(4, "confinement", ok,
           f"SELL non-theorems refuted at 8: {sell_ok} (control proved: {control}); "
           f"0L on {sum(zeros)}/10 random; 0'L+@L+cut derivation replays: {derived}")
    assert ok


def test_criterion_5_ctl_mumall():
    start = time.perf_counter()
    total, bad, nu_steps = 0, [], 0
    for name in ("two.ts", "three.ts"):
        ts = _system(name)
        for s in ts.reachable(ts.init):
            for f in C.enumerate_ctl(ts.vars, 3):
                r = C.mc_via_mumall(ts, s, f)
                total += 1
                if (r["verdict"] is Verdict.PROVED) != r["oracle"]:
                    bad.append((name, str(s), C.ctl_str(f)))
                if r["proof"] is not None:
                    check_mumall(r["proof"])
                    nu_steps += r["proof"].count("ν")
    seconds = time.perf_counter() - start
    ok = not bad and seconds < 600 and nu_steps > 0
    record(5, "CTL<->muMALL", ok,
           f"{total - len(bad)}/{total} agree, {nu_steps} nu steps on synthesized invariants, {seconds:.1f}s")
    assert ok, bad[:5]


def test_criterion_6_transitions():
    total, bad = 0, []
    for name in ("two.ts", "three.ts"):
        ts = _system(name)
        for rule in ts.rules:
            gamma = [C.encode_rule_hyll(ts, rule)]
            for s in ts.states():
                for s2 in ts.states():
                    goal = J(C.delta_hyll(1, C.encode_state_hyll(ts, s2)), Nat(0))
                    r = prove_hyll(sequent(gamma, [J(C.encode_state_hyll(ts, s), Nat(0))], goal), 3)
                    total += 1
                    if r.proved != (C.step(ts, s, rule) == s2) or (r.proved and not replay_hyll(r.proof)):
                        bad.append((name, rule.name, str(s), str(s2)))
    ok = not bad
    record(6, "transition sequents", ok, f"{total - len(bad)}/{total} match the step relation")
    assert ok, bad[:5]


def test_criterion_7_eg_failure():
    r = C.demo_eg_failure(6)
    ok = r["oracle"] and r["hyll"] is not Verdict.PROVED and r["mumall"] is Verdict.PROVED
    record(7, "EG separation", ok,
           f"oracle {r['oracle']}, box encoding in HyLL {r['hyll'].value}, muMALL {r['mumall'].value}")
    assert ok


def test_criterion_8_structural():
    bipoles = all(F.is_bipole(f, th.target == "SELL")
                  for th in (build_ll_theory(), build_sell_theory()) for _, f in th.clauses)
    counts = {}

    def check(name, strategy, prop):
        counts[name] = [0, 0]

        @_settings(500)
        @given(strategy)
        def run(x):
            counts[name][0] += 1
            counts[name][1] += bool(prop(x))

        run()

    check("negate", ll_formulas(depth=4), lambda f: F.negate(F.negate(f)) == f)
    check("formula", ll_formulas(depth=4), lambda f: parse_formula(formula_str(f)) == f)
    check("hyll", hyll_formulas(depth=4), lambda f: parse_hyll(hyll_str(f)) == f)
    check("judgment", st.builds(J, hyll_formulas(depth=2), worlds(0)),
          lambda j: parse_judgment(judgment_str(j)) == j)
    check("world", worlds(0, 3), lambda w: parse_world(world_str(w)) == w)
    check("ctl", ctl_formulas(("a", "b", "c"), 4), lambda f: C.parse_ctl(C.ctl_str(f)) == f)
    check("system", systems(), lambda ts: C.parse_system(C.system_str(ts)) == ts)
    ok = bipoles and all(n == good == 500 for n, good in counts.values())
    record(8, "structural", ok,
           f"clauses are bipoles: {bipoles}; " + ", ".join(f"{k} {g}/{n}" for k, (n, g) in counts.items()))
    assert ok, counts
