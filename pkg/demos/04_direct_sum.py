"""Plant a one-bit AND instance inside a disjointness protocol."""

from coordinfo.costs import check_direct_sum_lemma
from coordinfo.distributions import build_xi, collapsing_epsilon
from coordinfo.model import and_k, disj, error_probability
from coordinfo.protolib import EmbeddingConfig, direct_sum_protocol, naive_protocol, sequential_search_protocol

n, k = 2, 2
eps = collapsing_epsilon(build_xi(k).marginal_zeta())
print("collapsing probability per coordinate:", eps)
for base in (sequential_search_protocol(n, k), naive_protocol(n, k)):
    cfg = EmbeddingConfig(base)
    hat = direct_sum_protocol(base)
    print(f"\n{base.name}: {cfg.required_player_bits()} coin bit(s) per player,"
          f" {cfg.required_coordinator_outcomes()} coordinator outcomes")
    print("  base error", error_probability(base, disj), "embedded error", error_probability(hat, and_k),
          "allowed", error_probability(base, disj) + n * eps)
    for c in check_direct_sum_lemma(base, n, k).checks:
        print(f"  {c.name:>26}: {c.lhs:.6f} vs {c.rhs:.6f} {c.status}")
