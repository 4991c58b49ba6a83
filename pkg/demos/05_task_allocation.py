"""Decide disjointness with a task allocation protocol."""

from coordinfo.model import InputMatrix, disj, error_probability, transcript_distribution
from coordinfo.taskalloc import (
    TaskInstance,
    check_allocation,
    closed_form_overhead,
    disj_via_ta,
    greedy_allocation,
    greedy_ta_protocol,
    reduction_overhead,
)

inst = TaskInstance(3, (frozenset({1, 2}), frozenset({2, 3})))
alloc = greedy_allocation(inst)
print("capabilities", inst.to_json(), "->", alloc.to_json(), check_allocation(inst, alloc))

n, k = 3, 2
red = disj_via_ta(greedy_ta_protocol(n, k), n, k)
for x in (InputMatrix.from_rows((1, 0, 0), (0, 1, 1)), InputMatrix.from_rows((1, 1, 0), (0, 1, 0))):
    (t,) = transcript_distribution(red, x).support
    print(x, "->", [m.payload for m in t.messages], "answer", t.output, "DISJ", disj(x))
print("error over all inputs:", error_probability(red, disj))
for enc in ("vector", "list"):
    print(f"{enc} overhead: measured {reduction_overhead(n, k, enc)}, closed form {closed_form_overhead(n, k, enc)}")
