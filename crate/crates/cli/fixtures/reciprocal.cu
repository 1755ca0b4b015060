# ρ(a, b) and ρ(b, a) in M_2(A) ⊕ M_2(A), one trace per summand.
[model]
kind = pointfn
points = p, q

[elements]
a = 1, 2
b = 2, 2

[query]
op = rho
x = a
y = b
