# 3 variables, 3 rules: a toggle with a nondeterministic stutter
vars: a b c
rule r1: +a -b -c -> -a +b +c
rule r2: -a +b +c -> +a -b -c
rule r3: -a +b +c -> -a +b +c
init: +a -b -c
