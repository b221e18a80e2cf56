# 2 variables, 2 rules: a hand-off that then idles
vars: a b
rule r1: +a -b -> -a +b
rule r2: -a +b -> -a +b
init: +a -b
