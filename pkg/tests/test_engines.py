import pytest

from llworkbench import ctl as C
from llworkbench import formulas as F
from llworkbench.encoders import build_ll_theory, encode_hyll_sequent_ll
from llworkbench.hyll import prove_hyll, replay_hyll
from llworkbench.llf import prove_llf, replay
from llworkbench.mumall import Invariant, MissingHint, prove_mumall, replay_mumall
from llworkbench.parser import parse_formula
from llworkbench.problems import parse_sequent
from llworkbench.proof import Verdict
from llworkbench.sellf import prove_sell, replay_sell
from llworkbench.signature import SignatureError, SubexpSignature

P = parse_formula


# -- focused LL

@pytest.mark.parametrize("goal,verdict", [
    ("p | ~p", Verdict.PROVED),
    ("(p * q) | (~q | ~p)", Verdict.PROVED),
    ("p * ~p", Verdict.REFUTED),
    ("1 (+) 0", Verdict.PROVED),
    ("0", Verdict.REFUTED),
])
def test_llf_small(goal, verdict):
    r = prove_llf((), (), (P(goal),), 4)
    assert r.verdict is verdict
    if r.proved:
        assert replay(r.proof)


def test_llf_classical_reuse():
    r = prove_llf((P("~p"),), (), (P("p * p"),), 4)
    assert r.proved and replay(r.proof)
    assert prove_llf((), (P("~p"),), (P("p * p"),), 4).verdict is Verdict.REFUTED


def test_llf_exhausts_on_loop():
    r = prove_llf((P("q * ~q | r"),), (), (P("r"),), 3)
    assert r.verdict is Verdict.EXHAUSTED


def test_replay_rejects_tampering():
    r = prove_llf((), (), (P("p | ~p"),), 2)
    bad = type(r.proof)("⊤", r.proof.conclusion, (), ())
    assert not replay(bad)


# -- SELL

def test_sell_promotion_respects_order():
    sig = SubexpSignature.build({"a", "b"}, [("a", "b")])
    ok = prove_sell(sig, {"b": [P("~p")]}, (), (P("!^a p"),), 4)
    no = prove_sell(sig, {"a": [P("~p")]}, (), (P("!^b p"),), 4)
    assert ok.proved and replay_sell(ok.proof, sig)
    assert no.verdict is Verdict.REFUTED


def test_sell_bounded_context_is_linear():
    sig = SubexpSignature.build({"a"})
    r = prove_sell(sig, {"a": [P("~p")]}, (), (P("p * p"),), 4)
    assert r.verdict is Verdict.REFUTED
    sig2 = SubexpSignature.build({"a"}, unbounded={"a"})
    assert prove_sell(sig2, {"a": [P("~p")]}, (), (P("p * p"),), 4).proved


def test_signature_rejects_unknown():
    with pytest.raises(SignatureError):
        SubexpSignature.build({"a"}, [("a", "z")])


# -- muMALL

def test_mumall_mu_unfolds():
    r = prove_mumall([P("mu X. 1 (+) X")])
    assert r.proved and replay_mumall(r.proof)


def test_mumall_needs_hint_for_nu():
    nu = P("nu X. X")
    with pytest.raises(MissingHint):
        prove_mumall([nu])
    r = prove_mumall([nu], {nu: Invariant(F.TOP)})
    assert r.proved and replay_mumall(r.proof)


def test_mumall_lfp_loop_not_proved():
    assert not prove_mumall([P("mu X. X")], depth=5).proved


# -- HyLL

@pytest.mark.parametrize("text,verdict", [
    (" ; p at 1 @ 0 |- p @ 1", Verdict.PROVED),
    (" ; p @ 1 |- p @ 0", Verdict.REFUTED),
    (" ; p @ 0 |- down u. p at u @ 0", Verdict.PROVED),
    (" ; forall u:world. p at u @ 0 |- p @ 5", Verdict.PROVED),
    (" ; p @ 3 |- exists u:world. p at u @ 0", Verdict.PROVED),
])
def test_hyll_small(text, verdict):
    r = prove_hyll(parse_sequent(text), 3)
    assert r.verdict is verdict
    if r.proved:
        assert replay_hyll(r.proof)


def test_hyll_encoding_uses_theory():
    enc = encode_hyll_sequent_ll(parse_sequent(" ; p @ 0 |- p @ 0"))
    names = {f for f in build_ll_theory().formulas()}
    assert names <= set(enc.classical)


# -- CTL

TWO = C.parse_system("vars: a b\nrule r1: +a -b -> -a +b\nrule r2: -a +b -> -a +b\ninit: +a -b\n")


@pytest.mark.parametrize("query,holds", [
    ("EX +b", True), ("AX +a", False), ("EF -a", True), ("AG +a", False),
    ("AG (+a | +b)", True), ("E[+a U +b]", True), ("EG +b", False), ("AF AG +b", True),
])
def test_oracle(query, holds):
    assert C.ctl_check(TWO, TWO.init, C.parse_ctl(query)) is holds


def test_non_serial_rejected():
    ts = C.parse_system("vars: a\nrule r: +a -> -a\ninit: +a\n")
    with pytest.raises(C.NonSerialError):
        C.ctl_check(ts, ts.init, C.parse_ctl("EF -a"))


def test_mumall_agrees_on_fixture():
    for q in ("EG +b", "AG (+a | +b)", "E[+a U +b]"):
        f = C.parse_ctl(q)
        r = C.mc_via_mumall(TWO, TWO.init, f)
        assert r["proof"] is None or replay_mumall(r["proof"])
        assert (r["verdict"] is Verdict.PROVED) == r["oracle"]


def test_hyll_fragment_boundaries():
    assert C.in_hyll_fragment(C.parse_ctl("EX +b"))
    assert not C.in_hyll_fragment(C.parse_ctl("EG +b"))
    with pytest.raises(C.UnsupportedFragment):
        C.encode_ctl_hyll(TWO, C.parse_ctl("AG +a"))


def test_hyll_ex():
    r = C.mc_via_hyll(TWO, TWO.init, C.parse_ctl("EX +b"), depth=3)
    assert r["verdict"] is Verdict.PROVED and r["oracle"]
