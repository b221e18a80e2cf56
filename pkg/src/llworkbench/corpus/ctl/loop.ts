# one state looping forever
vars: a
rule r: +a -> +a
init: +a
