"""Regenerate the shipped HyLL corpus (hand-written cases plus a seeded random batch)."""
import random
import sys
from pathlib import Path

from llworkbench import hyll_syntax as H
from llworkbench.hyll import prove_hyll, sequent
from llworkbench.printer import hyll_str
from llworkbench.problems import parse_sequent, sequent_str
from llworkbench.proof import Verdict
from llworkbench.worlds import Nat

OUT = Path(__file__).resolve().parents[1] / "src" / "llworkbench" / "corpus" / "hyll"
DEPTH = 3

HAND = [
    ("identity", " ; p @ 0 |- p @ 0", "proved"),
    ("world-mismatch", " ; p @ 0 |- p @ 1", "not-provable"),
    ("at-right", " ; p @ 1 |- (p at 1) @ 0", "proved"),
    ("at-left", " ; (p at 2) @ 0 |- p @ 2", "proved"),
    ("down-left", " ; (down u. (p at u)) @ 1 |- p @ 1", "proved"),
    ("forall-world-left", " ; (forall w:world. (p at w)) @ 0 |- p @ 2", "proved"),
    ("limp-left", " ; p @ 0, (p -o q) @ 0 |- q @ 0", "proved"),
    ("exists-term-right", " ; p(a) @ 0 |- (exists x. p(x)) @ 0", "proved"),
    ("gamma-twice", "p @ 0 ; |- (p * p) @ 0", "proved"),
    ("with-plus", " ; (p & q) @ 0 |- (q (+) r) @ 0", "proved"),
    ("zero-left", " ; 0 @ 1 |- p @ 2", "proved"),
    ("one", " ; 1 @ 0 |- 1 @ 0", "proved"),
    ("no-contraction", " ; p @ 1, p @ 1 |- p @ 1", "not-provable"),
    ("bang-right", "p @ 0 ; |- (!p) @ 0", "proved"),
    ("zero-right", " ; |- 0 @ 1", "not-provable"),
    ("tensor-swap", " ; p @ 0, q @ 0 |- (q * p) @ 0", "proved"),
    ("down-absolute", " ; (p at 1) @ 0 |- (down u. (p at 1)) @ 2", "proved"),
    ("delta-one", " ; p @ 1 |- (down u. (p at u.1)) @ 0", "proved"),
    ("exists-world-right", " ; p @ 2 |- (exists w:world. (p at w)) @ 0", "proved"),
    ("forall-world-right", " ; p @ 2 |- (forall w:world. (p at w)) @ 0", "not-provable"),
    ("limp-at", " ; (p at 1) @ 0, ((p at 1) -o q) @ 0 |- q @ 0", "proved"),
    ("top-absorbs", " ; p @ 0, q @ 1 |- (p * top) @ 0", "proved"),
    ("gamma-rule", "p -o q @ 0 ; p @ 0, p @ 0 |- (q * q) @ 0", "proved"),
    ("plus-left", " ; (p (+) q) @ 0 |- (q (+) p) @ 0", "proved"),
    ("with-right-fails", " ; p @ 0 |- (p & q) @ 0", "not-provable"),
    ("forall-term-left", " ; (forall x. p(x)) @ 1 |- p(a) @ 1", "proved"),
    ("bang-left", " ; (!p) @ 0 |- (p * p) @ 0", "proved"),
    ("one-refuted", " ; p @ 0 |- 1 @ 0", "not-provable"),
    ("bang-right-fails", " ; p @ 0 |- (!p) @ 0", "not-provable"),
    ("down-shift", " ; (down u. (p at u.2)) @ 1 |- p @ 3", "proved"),
    ("bang-world", " ; (!(p at 1)) @ 2 |- ((p at 1) * (p at 1)) @ 0", "proved"),
    ("limp-right", " ; |- (p -o p) @ 3", "proved"),
]

ATOMS = ("p", "q")


def rand_formula(rng: random.Random, depth: int) -> H.HyllFormula:
    if depth == 0 or rng.random() < 0.3:
        return H.HAtom(rng.choice(ATOMS))
    op = rng.choice(("tensor", "with", "plus", "at", "limp", "bang"))
    if op == "at":
        return H.HAt(rand_formula(rng, depth - 1), Nat(rng.randint(0, 3)))
    if op == "bang":
        return H.HBang(rand_formula(rng, depth - 1))
    cls = {"tensor": H.HTensor, "with": H.HWith, "plus": H.HPlus, "limp": H.HLimp}[op]
    return cls(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1))


def write(name: str, s, expect: str) -> None:
    text = f"# {name}\nengine: hyll\ndepth: {DEPTH}\nexpect: {expect}\nsequent: {sequent_str(s)}\n"
    (OUT / f"{name}.prob").write_text(text, encoding="utf-8")


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("*.prob"):
        old.unlink()
    for k, (name, text, expect) in enumerate(HAND):
        s = parse_sequent(text)
        got = prove_hyll(s, DEPTH).verdict.value
        if got != expect:
            print(f"{name}: expected {expect}, engine says {got}", file=sys.stderr)
            return 1
        write(f"h{k:02d}-{name}", s, expect)
    rng = random.Random(2024)
    made = 0
    while made < 12:
        a, b = rand_formula(rng, 2), rand_formula(rng, 2)
        w = Nat(rng.randint(0, 3))
        s = sequent([], [H.HyllJudgment(a, w)], H.HyllJudgment(b if made % 2 else a, w))
        v = prove_hyll(s, DEPTH).verdict
        if v is Verdict.EXHAUSTED:
            continue
        write(f"g{made:02d}-random", s, v.value)
        made += 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
