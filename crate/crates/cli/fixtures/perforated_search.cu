[model]
kind = perforated
gap = 4

[elements]
w = 1

[query]
op = rc_search
w = w
bound = 30
