"""Protocols by name, and the default set the verification suites sweep."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable

from .model import Protocol
from .protolib import (
    and_poll_protocol,
    coin_output_protocol,
    constant_protocol,
    direct_sum_protocol,
    naive_protocol,
    noisy_and_protocol,
    noisy_reply_and_protocol,
    random_order_and_protocol,
    sequential_search_protocol,
)
from .taskalloc import disj_via_ta, greedy_ta_protocol

SIMPLE: dict[str, Callable[[int, int], Protocol]] = {
    "naive": naive_protocol,
    "seq-search": sequential_search_protocol,
    "and-poll": lambda n, k: and_poll_protocol(k),
    "random-order-and": lambda n, k: random_order_and_protocol(k),
    "noisy-and": lambda n, k: noisy_and_protocol(k),
    "noisy-reply-and": lambda n, k: noisy_reply_and_protocol(k),
    "constant": constant_protocol,
    "coin": coin_output_protocol,
    "disj-via-ta": lambda n, k: disj_via_ta(greedy_ta_protocol(n, k), n, k),
    "disj-via-ta-list": lambda n, k: disj_via_ta(greedy_ta_protocol(n, k), n, k, "list"),
}

HARNESS = ("naive", "seq-search", "and-poll", "direct-sum(base=seq-search)", "direct-sum(base=naive)")

_DIRECT_SUM = re.compile(r"^direct-sum\(base=(.+)\)$")


def protocol_names() -> list[str]:
    return sorted(SIMPLE) + ["direct-sum(base=<name>)"]


def make_protocol(name: str, n: int, k: int) -> Protocol:
    """Build ``name`` for ``n`` coordinates and ``k`` players.

    One-bit protocols (``and-poll`` and friends) ignore ``n``.  The
    direct-sum wrapper builds its base at ``(n, k)`` and is itself one-bit.
    """
    m = _DIRECT_SUM.match(name)
    if m:
        return direct_sum_protocol(make_protocol(m.group(1), n, k))
    for prefix, build in (("noisy-and(flip=", noisy_and_protocol), ("noisy-reply-and(flip=", noisy_reply_and_protocol)):
        if name.startswith(prefix) and name.endswith(")"):
            return build(k, Fraction(name[len(prefix) : -1]))
    try:
        return SIMPLE[name](n, k)
    except KeyError:
        raise KeyError(f"unknown protocol {name!r}; valid: {', '.join(protocol_names())}") from None


def harness(n: int, k: int, names=HARNESS) -> dict[str, Protocol]:
    return {name: make_protocol(name, n, k) for name in names}
