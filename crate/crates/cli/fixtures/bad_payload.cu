[model]
kind = pointfn
points = p, q

[elements]
a = 1, -2

[query]
op = rho
x = a
y = a
