"""Internal and switched information costs under the hard distribution."""

from coordinfo.costs import check_cc_ic, check_sic_vs_ic, full_report, reports_to_csv
from coordinfo.distributions import build_xi
from coordinfo.protolib import (
    and_poll_protocol,
    constant_protocol,
    naive_protocol,
    noisy_reply_and_protocol,
    random_order_and_protocol,
)

k = 3
xi = build_xi(k)
protocols = [
    naive_protocol(1, k),
    and_poll_protocol(k),
    random_order_and_protocol(k),
    noisy_reply_and_protocol(k),
    constant_protocol(1, k),
]
reports = [full_report(xi, p) for p in protocols]
for r in reports:
    print(f"{r.protocol:>28}: CC={r.cc:>2} IC={r.ic:.4f} SIC={r.sic:.4f} error={r.error}")

print("\nCSV:")
print(reports_to_csv(reports), end="")

print("\nbounds:")
for p in protocols:
    a, b = check_cc_ic(xi, p), check_sic_vs_ic(xi, p)
    print(f"  {p.name:>28}: CC - IC/2 = {a.margin:.4f}, slack in SIC <= IC + H(M,Z) + kH(Z) = {b.margin:.4f}")
