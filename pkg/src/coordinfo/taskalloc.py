"""Task Allocation and the reduction from Set Disjointness to it.

Player ``i`` holds the set of tasks it can perform.  A valid allocation
gives every task to exactly one player able to do it.  The reduction runs a
Task Allocation protocol on the complemented sets: the original sets are
disjoint exactly when the complements cover ``[n]``, and a valid allocation
of the complements certifies that.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .model import Halt, InputMatrix, Protocol, Send, all_inputs, transcript_distribution


def _sorted_sets(sets) -> list[list[int]]:
    return [sorted(s) for s in sets]


@dataclass(frozen=True)
class TaskInstance:
    n: int
    capabilities: tuple[frozenset[int], ...]

    def __post_init__(self):
        caps = tuple(frozenset(c) for c in self.capabilities)
        for c in caps:
            if not c <= frozenset(range(1, self.n + 1)):
                raise ValueError(f"capability set {sorted(c)} is not a subset of [1..{self.n}]")
        object.__setattr__(self, "capabilities", caps)

    @property
    def k(self) -> int:
        return len(self.capabilities)

    @property
    def promise_holds(self) -> bool:
        """Every task is doable by someone."""
        return frozenset().union(*self.capabilities) == frozenset(range(1, self.n + 1))

    @classmethod
    def from_input(cls, x: InputMatrix) -> "TaskInstance":
        return cls(x.n, x.as_sets())

    def to_input(self) -> InputMatrix:
        return InputMatrix.from_sets(self.capabilities, self.n)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "capabilities": _sorted_sets(self.capabilities)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TaskInstance":
        d = json.loads(text)
        return cls(d["n"], tuple(frozenset(c) for c in d["capabilities"]))


@dataclass(frozen=True)
class Allocation:
    assigned: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "assigned", tuple(frozenset(s) for s in self.assigned))

    def to_json_dict(self) -> dict:
        return {"assigned": _sorted_sets(self.assigned)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Allocation":
        return cls(tuple(frozenset(s) for s in json.loads(text)["assigned"]))


@dataclass(frozen=True)
class AllocationReport:
    ok: bool
    partition: tuple[int, int, int] | None = None  # (task, player, player)
    coverage: int | None = None  # an unassigned task
    capability: tuple[int, int] | None = None  # (player, task)


def is_partition(assigned: Sequence[frozenset[int]], n: int) -> bool:
    seen: set[int] = set()
    for s in assigned:
        if seen & s:
            return False
        seen |= s
    return seen == set(range(1, n + 1))


def check_allocation(instance: TaskInstance, allocation: Allocation) -> AllocationReport:
    """Validity with one witness per violated property."""
    if len(allocation.assigned) != instance.k:
        raise ValueError("allocation must have one set per player")
    partition = coverage = capability = None
    owner: dict[int, int] = {}
    for i, s in enumerate(allocation.assigned, start=1):
        for t in sorted(s):
            if t in owner and partition is None:
                partition = (t, owner[t], i)
            owner.setdefault(t, i)
            if t not in instance.capabilities[i - 1] and capability is None:
                capability = (i, t)
    missing = sorted(set(range(1, instance.n + 1)) - set(owner))
    if missing:
        coverage = missing[0]
    ok = partition is None and coverage is None and capability is None
    return AllocationReport(ok, partition, coverage, capability)


def greedy_allocation(instance: TaskInstance) -> Allocation:
    out: list[set[int]] = [set() for _ in range(instance.k)]
    for t in range(1, instance.n + 1):
        for i, c in enumerate(instance.capabilities):
            if t in c:
                out[i].add(t)
                break
    return Allocation(tuple(out))


def greedy_ta_protocol(n: int, k: int) -> Protocol:
    """Collect every capability vector, then give each task to the
    lowest-index capable player.  Tasks nobody can do stay unassigned."""

    def coordinator(transcript, tape):
        r = len(transcript) // 2
        if r < k:
            return Send(r + 1, "1")
        rows = [tuple(int(b) for b in m.payload) for m in transcript[1::2]]
        caps = tuple(frozenset(j + 1 for j, b in enumerate(row) if b) for row in rows)
        return Halt(greedy_allocation(TaskInstance(n, caps)).assigned)

    def player(i, row, view, tape):
        return "".join(map(str, row))

    return Protocol("greedy-ta", k, n, coordinator, player, max_rounds=k, params={"player_rounds": 1})


# ---------------------------------------------------------------------------
# the reduction


def _width(x: int) -> int:
    return math.ceil(math.log2(x)) if x > 1 else 0


def encode_assignment(s: frozenset[int], n: int, encoding: str) -> str:
    """Payload telling a player its assigned tasks, led by a framing ``1``."""
    if encoding == "vector":
        return "1" + "".join("1" if t in s else "0" for t in range(1, n + 1))
    if encoding == "list":
        cw, ew = _width(n + 1), _width(n)
        body = format(len(s), f"0{cw}b") + "".join(format(t - 1, f"0{ew}b") if ew else "" for t in sorted(s))
        return "1" + body
    raise ValueError(f"unknown encoding {encoding!r}; use 'vector' or 'list'")


def decode_assignment(payload: str, n: int, encoding: str) -> frozenset[int]:
    if not payload.startswith("1"):
        raise ValueError("missing framing bit")
    body = payload[1:]
    if encoding == "vector":
        return frozenset(t for t in range(1, n + 1) if body[t - 1] == "1")
    if encoding == "list":
        cw, ew = _width(n + 1), _width(n)
        count = int(body[:cw], 2) if cw else 0
        if ew == 0:
            return frozenset(range(1, count + 1))
        return frozenset(int(body[cw + r * ew : cw + (r + 1) * ew], 2) + 1 for r in range(count))
    raise ValueError(f"unknown encoding {encoding!r}; use 'vector' or 'list'")


def _inner_run(ta: Protocol, transcript, inner_tape):
    """Replay the inner TA coordinator on the transcript prefix it owns.

    Returns ``(action, consumed)``: the inner coordinator's next step and how
    many leading messages belong to the inner run.
    """
    msgs = tuple(transcript)
    pos = 0
    while True:
        act = ta.coordinator(msgs[:pos], inner_tape)
        if isinstance(act, Halt) or pos >= len(msgs):
            return act, pos
        pos += 2


def disj_via_ta(ta: Protocol, n: int, k: int, encoding: str = "vector", players_learn: bool = False) -> Protocol:
    """Set Disjointness from a Task Allocation protocol.

    Players run ``ta`` on their complemented rows.  The coordinator then
    checks that the allocation partitions ``[n]`` (answering 1, "not
    disjoint", if not), sends each player its assigned set and collects a
    one-bit verdict: ``1`` when the set avoids the player's own elements.
    The answer is 0 exactly when every verdict is ``1``.

    With ``players_learn`` the sets are sent before the partition check.
    """
    if (ta.n, ta.k) != (n, k):
        raise ValueError(f"TA protocol is n={ta.n}, k={ta.k}; asked for n={n}, k={k}")
    encode_assignment(frozenset(), n, encoding)
    inner_rounds = ta.params.get("player_rounds")
    if inner_rounds is None:
        raise ValueError("the TA protocol must declare 'player_rounds' so players can tell the phases apart")

    def coordinator(transcript, tape):
        act, used = _inner_run(ta, transcript, tape)
        if isinstance(act, Send):
            return act
        alloc = act.output
        valid = is_partition(alloc, n)
        if not valid and not players_learn:
            return Halt(1)
        tail = transcript[used:]
        r = len(tail) // 2
        if r < k:
            return Send(r + 1, encode_assignment(alloc[r], n, encoding))
        if not valid:
            return Halt(1)
        return Halt(0 if all(m.payload == "1" for m in tail[1::2]) else 1)

    def player(i, row, view, tape):
        if len(view) > 2 * inner_rounds:
            z = decode_assignment(view[-1].payload, n, encoding)
            own = {j + 1 for j, b in enumerate(row) if b}
            return "0" if z & own else "1"
        return ta.player(i, tuple(1 - b for b in row), view, tape)

    return Protocol(
        f"disj-via-ta({ta.name},{encoding})", k, n, coordinator, player,
        max_rounds=ta.max_rounds + k,
        coordinator_tape=ta.coordinator_tape, player_tapes=ta.player_tapes,
        params={"encoding": encoding, "players_learn": players_learn},
    )


def closed_form_overhead(n: int, k: int, encoding: str = "vector") -> int:
    """Dispatch plus verdict bits when the partition check passes."""
    if encoding == "vector":
        return k * (n + 2)
    if encoding == "list":
        return k * (_width(n + 1) + 2) + n * _width(n)
    raise ValueError(f"unknown encoding {encoding!r}")


def reduction_overhead(n: int, k: int, encoding: str = "vector", ta: Protocol | None = None) -> int:
    """Largest number of bits the reduction adds to the TA run, over all inputs."""
    ta = greedy_ta_protocol(n, k) if ta is None else ta
    if not ta.is_deterministic:
        raise ValueError("overhead accounting needs a deterministic TA protocol")
    (tape,) = ta.coordinator_tape.support
    red = disj_via_ta(ta, n, k, encoding)
    worst = 0
    for x in all_inputs(k, n):
        for t in transcript_distribution(red, x):
            _, used = _inner_run(ta, t.messages, tape)
            worst = max(worst, sum(len(m.payload) for m in t.messages[used:]))
    return worst
