[model]
kind = perforated
gap = 3

[elements]
x = 5
y = inf * x

[query]
op = rho
x = x
y = y
