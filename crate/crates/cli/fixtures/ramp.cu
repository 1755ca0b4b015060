# diag(t, 1): rank jumps at t = 0.
[model]
kind = spectral
fiber = 2

[elements]
a = [0:0, 1:1] [0:1, 1:1]

[query]
op = osc
a = a
