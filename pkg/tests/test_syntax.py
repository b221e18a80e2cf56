import pytest
from hypothesis import given, settings

from llworkbench import formulas as F
from llworkbench import hyll_syntax as H
from llworkbench.parser import ParseError, parse_formula, parse_hyll, parse_judgment, parse_term
from llworkbench.printer import formula_str, hyll_str
from llworkbench.problems import ProblemError, parse_problem, problem_str
from llworkbench.terms import Const
from llworkbench.worlds import Nat
from strategies import hyll_formulas, mall_formulas


@pytest.mark.parametrize("text", ["p * q | r", "!^a (forall x. p(x))", "mu X. p (+) X", "exists x. q(f(x), a)",
                                  "?^b ~p & top", "forallloc l:a. !^l p"])
def test_formula_print_parse(text):
    f = parse_formula(text)
    assert parse_formula(formula_str(f)) == f


def test_precedence():
    assert parse_formula("p * q | r") == F.Par(F.Tensor(F.Atom("p"), F.Atom("q")), F.Atom("r"))


def test_binders_are_nameless():
    assert parse_formula("forall x. p(x)") == parse_formula("forall y. p(y)")


def test_hyll_modal_syntax():
    f = parse_hyll("down u. p at u")
    assert isinstance(f, H.HDown)
    assert parse_judgment("p @ 2").world == Nat(2)
    assert parse_hyll(hyll_str(f)) == f


@pytest.mark.parametrize("text", ["p *", "(p", "forall . p", "p @@ 1", "nu X."])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_error_position():
    with pytest.raises(ParseError) as e:
        parse_formula("p * * q", 7)
    assert "line 7" in str(e.value)


def test_constants():
    assert parse_term("a") == Const("a")


@settings(max_examples=200, deadline=None)
@given(mall_formulas(depth=3))
def test_mall_negation_involutive(f):
    assert F.negate(F.negate(f)) == f


@settings(max_examples=100, deadline=None)
@given(hyll_formulas(depth=3))
def test_hyll_roundtrip(f):
    assert parse_hyll(hyll_str(f)) == f


def test_problem_roundtrip():
    text = "labels: a b\norder: a <= b\nunbounded: b\nctx b: p\nlinear: ~p\ngoal: 1\n"
    p = parse_problem(text)
    assert p.engine == "sellf"
    again = parse_problem(problem_str(p))
    assert (again.signature, again.ctx, again.linear, again.goal) == (p.signature, p.ctx, p.linear, p.goal)


@pytest.mark.parametrize("text,line", [("sequent: ; p @ 0 |- p @ 0\nbogus: 1\n", 2),
                                       ("depth: x\nsequent: ; p @ 0 |- p @ 0\n", 1),
                                       ("labels: a\nctx z: p\n", 2)])
def test_problem_errors(text, line):
    with pytest.raises(ProblemError) as e:
        parse_problem(text)
    assert e.value.line == line


def test_engine_is_inferred_or_ambiguous():
    assert parse_problem("delta: nu X. X\n").engine == "mumall"
    with pytest.raises(ProblemError):
        parse_problem("delta: 1\nsequent: ; p @ 0 |- p @ 0\n")
