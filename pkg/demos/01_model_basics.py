"""Run a protocol by hand and look at what each party sees."""

from coordinfo.distributions import e_bar
from coordinfo.model import InputMatrix, communication_cost, disj, error_probability, transcript_distribution, view_distribution
from coordinfo.protolib import (
    compress_search_transcript,
    noisy_reply_and_protocol,
    sequential_search_protocol,
)

x = InputMatrix.from_rows((1, 0), (1, 1), (0, 1))
p = sequential_search_protocol(2, 3)
print("input (one row per player):", x)
(t,) = transcript_distribution(p, x).support
for m in t.messages:
    print(f"  {m.direction.value:>15} ch{m.channel}: {m.payload}")
print("output:", t.output, "(1 means the sets intersect), DISJ =", disj(x))
print("bits on the wire:", t.bits, "worst case:", communication_cost(p))
print("compressed to", compress_search_transcript(t, 2, 3))

print("\nplayer 2 only sees its own channel:")
for v, q in view_distribution(p, x, 2).items():
    print(" ", q, [m.payload for m in v.messages])

noisy = noisy_reply_and_protocol(3)
print("\n", noisy.name, "error:", error_probability(noisy, lambda y: int(all(y.column(1)))))
for t, q in transcript_distribution(noisy, e_bar(3, 1)).items():
    print(" ", q, [m.payload for m in t.messages], "->", t.output)
