"""Rectangles, distances between views, and the one-bit chain."""

from coordinfo.distributions import build_xi
from coordinfo.protolib import and_poll_protocol, noisy_reply_and_protocol, random_order_and_protocol
from coordinfo.structure import check_rectangle, usefulness, verify_onebit_chain

k = 3
xi = build_xi(k)
for p in (and_poll_protocol(k), random_order_and_protocol(k), noisy_reply_and_protocol(k)):
    rects = [rep.ok for i in range(1, k + 1) for rep in check_rectangle(p, i)]
    print(p.name)
    print("  rectangular for every player:", all(rects))
    print("  usefulness per player:", tuple(round(g, 4) for g in usefulness(p).gamma))
    rep = verify_onebit_chain(p, xi)
    for link, checks in rep.links.items():
        worst = min(checks, key=lambda c: c.margin)
        print(f"  {link:>15}: worst {worst.name} lhs={worst.lhs:.4f} rhs={worst.rhs:.4f} {worst.status}")
