"""The coordinator message-passing model, executed exactly.

A protocol has ``k`` players and an input-less coordinator.  Each player
shares a private channel with the coordinator and nothing else.  Execution
is sequential: in every round the coordinator addresses one player, and that
player replies before anything else happens.  On every channel the
coordinator therefore speaks first and the two directions alternate.

All randomness lives in finite per-party tapes fixed before the run, so a
transcript is a deterministic function of ``(protocol, input, tapes)`` and
its distribution is obtained by enumerating the tape product.

Players, coordinates and channel numbers are 1-based throughout, matching
``[k] = {1, ..., k}``.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from .budget import ensure_within
from .pmf import Pmf

__all__ = [
    "InputMatrix",
    "Direction",
    "Message",
    "Transcript",
    "PlayerView",
    "JointTape",
    "Send",
    "Halt",
    "Protocol",
    "ModelViolation",
    "NonTermination",
    "all_inputs",
    "execute",
    "joint_tapes",
    "transcript_distribution",
    "view_distribution",
    "restrict_view",
    "communication_cost",
    "error_probability",
    "check_alternation",
    "privacy_probe",
    "disj",
    "and_k",
]


class ModelViolation(RuntimeError):
    """A step function broke the rules of the coordinator model."""


class NonTermination(RuntimeError):
    """A run exceeded the protocol's declared round bound."""


# ---------------------------------------------------------------------------
# inputs


@dataclass(frozen=True)
class InputMatrix:
    """A ``k x n`` 0/1 matrix; row ``i`` is player ``i``'s input."""

    bits: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(b) for b in row) for row in self.bits)
        if not rows or not rows[0]:
            raise ValueError("an input needs k >= 1 rows and n >= 1 columns")
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged input matrix")
            if any(b not in (0, 1) for b in row):
                raise ValueError("input entries must be 0 or 1")
        object.__setattr__(self, "bits", rows)

    @classmethod
    def from_rows(cls, *rows: Iterable[int]) -> "InputMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "InputMatrix":
        if not columns:
            raise ValueError("need at least one column")
        return cls(tuple(zip(*columns)))

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]], n: int) -> "InputMatrix":
        """Rows are membership vectors of subsets of ``[n]``."""
        rows = []
        for s in sets:
            s = set(s)
            if not s <= set(range(1, n + 1)):
                raise ValueError(f"set {sorted(s)} is not a subset of [1..{n}]")
            rows.append(tuple(int(j in s) for j in range(1, n + 1)))
        return cls(tuple(rows))

    @property
    def k(self) -> int:
        return len(self.bits)

    @property
    def n(self) -> int:
        return len(self.bits[0])

    def row(self, i: int) -> tuple[int, ...]:
        if not 1 <= i <= self.k:
            raise IndexError(f"player {i} out of range 1..{self.k}")
        return self.bits[i - 1]

    def column(self, j: int) -> tuple[int, ...]:
        if not 1 <= j <= self.n:
            raise IndexError(f"coordinate {j} out of range 1..{self.n}")
        return tuple(row[j - 1] for row in self.bits)

    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.bits))

    def others(self, i: int) -> tuple[tuple[int, ...], ...]:
        """Rows of all players but ``i``."""
        self.row(i)
        return self.bits[: i - 1] + self.bits[i:]

    def with_row(self, i: int, row: Sequence[int]) -> "InputMatrix":
        self.row(i)
        return InputMatrix(self.bits[: i - 1] + (tuple(row),) + self.bits[i:])

    def as_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(j + 1 for j, b in enumerate(row) if b) for row in self.bits)

    def __str__(self) -> str:
        return "/".join("".join(map(str, row)) for row in self.bits)


def all_inputs(k: int, n: int) -> Iterator[InputMatrix]:
    """Every ``k x n`` input, in lexicographic order of the flattened bits."""
    ensure_within(2 ** (k * n), f"inputs {k}x{n}")
    for flat in itertools.product((0, 1), repeat=k * n):
        yield InputMatrix(tuple(flat[r * n : (r + 1) * n] for r in range(k)))


def disj(x: InputMatrix) -> int:
    """1 when some coordinate is in every player's set ("not disjoint")."""
    return int(any(all(col) for col in x.columns()))


def and_k(x: InputMatrix) -> int:
    if x.n != 1:
        raise ValueError("AND_k takes one bit per player")
    return disj(x)


# ---------------------------------------------------------------------------
# messages and transcripts


class Direction(str, enum.Enum):
    TO_PLAYER = "to_player"
    TO_COORDINATOR = "to_coordinator"


@dataclass(frozen=True)
class Message:
    direction: Direction
    channel: int
    payload: str

    def __post_init__(self):
        if not self.payload or set(self.payload) - {"0", "1"}:
            raise ModelViolation(f"payload must be a non-empty bit string, got {self.payload!r}")

    def to_json_dict(self) -> dict:
        return {"direction": self.direction.value, "channel": self.channel, "payload": self.payload}


def _output_json(value: Any) -> Any:
    if isinstance(value, (frozenset, set)):
        return sorted(value)
    if isinstance(value, tuple):
        return [_output_json(v) for v in value]
    return value


@dataclass(frozen=True)
class Transcript:
    messages: tuple[Message, ...]
    output: Hashable

    @property
    def bits(self) -> int:
        return sum(len(m.payload) for m in self.messages)

    def to_json_dict(self) -> dict:
        return {
            "messages": [m.to_json_dict() for m in self.messages],
            "output": _output_json(self.output),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        data = json.loads(text)
        msgs = tuple(
            Message(Direction(m["direction"]), int(m["channel"]), m["payload"])
            for m in data["messages"]
        )
        out = data["output"]
        if isinstance(out, list):
            out = tuple(frozenset(v) if isinstance(v, list) else v for v in out)
        return cls(msgs, out)


@dataclass(frozen=True)
class PlayerView:
    channel: int
    messages: tuple[Message, ...]


def restrict_view(transcript: Transcript, player: int, k: int | None = None) -> PlayerView:
    """The messages on ``player``'s channel, in their original order."""
    if player < 1 or (k is not None and player > k):
        raise IndexError(f"player {player} out of range")
    return PlayerView(player, tuple(m for m in transcript.messages if m.channel == player))


def check_alternation(transcript: Transcript) -> bool:
    """True when every channel alternates, coordinator first."""
    expect: dict[int, Direction] = {}
    for m in transcript.messages:
        want = expect.get(m.channel, Direction.TO_PLAYER)
        if m.direction is not want:
            return False
        expect[m.channel] = (
            Direction.TO_COORDINATOR if want is Direction.TO_PLAYER else Direction.TO_PLAYER
        )
    return True


# ---------------------------------------------------------------------------
# protocols


@dataclass(frozen=True)
class Send:
    channel: int
    payload: str


@dataclass(frozen=True)
class Halt:
    output: Hashable


CoordinatorStep = Callable[[tuple[Message, ...], Hashable], "Send | Halt"]
PlayerStep = Callable[[int, tuple[int, ...], tuple[Message, ...], Hashable], str]


@dataclass(frozen=True)
class JointTape:
    coordinator: Hashable
    players: tuple[Hashable, ...]


@dataclass(frozen=True, eq=False)
class Protocol:
    """A private-coin protocol in the coordinator model.

    ``coordinator(transcript, tape)`` returns :class:`Send` or :class:`Halt`.
    ``player(i, row, view, tape)`` returns the reply payload; ``view`` ends
    with the coordinator message being answered.  The player step never sees
    other players' inputs, which is what makes the model private.
    """

    name: str
    k: int
    n: int
    coordinator: CoordinatorStep
    player: PlayerStep
    max_rounds: int
    coordinator_tape: Pmf = field(default_factory=lambda: Pmf.point(None))
    player_tapes: tuple[Pmf, ...] | None = None
    params: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError("a protocol needs k >= 1 and n >= 1")
        if self.player_tapes is None:
            object.__setattr__(self, "player_tapes", tuple(Pmf.point(None) for _ in range(self.k)))
        if len(self.player_tapes) != self.k:
            raise ValueError("need one tape distribution per player")

    def __repr__(self) -> str:
        return f"Protocol({self.name!r}, k={self.k}, n={self.n})"

    @property
    def tape_space_size(self) -> int:
        size = len(self.coordinator_tape)
        for t in self.player_tapes:
            size *= len(t)
        return size

    @property
    def is_deterministic(self) -> bool:
        return self.tape_space_size == 1


def joint_tapes(protocol: Protocol) -> Iterator[tuple[JointTape, Fraction]]:
    """Every joint tape assignment with its probability."""
    ensure_within(protocol.tape_space_size, f"tape space of {protocol.name}")
    parties = [list(protocol.coordinator_tape.items())] + [list(t.items()) for t in protocol.player_tapes]
    for combo in itertools.product(*parties):
        w = Fraction(1)
        for _, q in combo:
            w *= q
        yield JointTape(combo[0][0], tuple(o for o, _ in combo[1:])), w


def execute(protocol: Protocol, x: InputMatrix, tapes: JointTape) -> Transcript:
    """Run the protocol once on a fixed input and fixed tapes."""
    if (x.k, x.n) != (protocol.k, protocol.n):
        raise ValueError(f"input is {x.k}x{x.n}, protocol expects {protocol.k}x{protocol.n}")
    if len(tapes.players) != protocol.k:
        raise ValueError("tape assignment must give one outcome per player")
    msgs: list[Message] = []
    for rnd in range(protocol.max_rounds + 1):
        action = protocol.coordinator(tuple(msgs), tapes.coordinator)
        if isinstance(action, Halt):
            return Transcript(tuple(msgs), action.output)
        if not isinstance(action, Send):
            raise ModelViolation(f"coordinator returned {action!r}")
        if rnd == protocol.max_rounds:
            raise NonTermination(f"{protocol.name} exceeded {protocol.max_rounds} rounds on {x}")
        i = action.channel
        if not 1 <= i <= protocol.k:
            raise ModelViolation(f"coordinator addressed player {i} of {protocol.k}")
        msgs.append(Message(Direction.TO_PLAYER, i, action.payload))
        view = tuple(m for m in msgs if m.channel == i)
        reply = protocol.player(i, x.row(i), view, tapes.players[i - 1])
        if not isinstance(reply, str):
            raise ModelViolation(f"player {i} replied with {reply!r}")
        msgs.append(Message(Direction.TO_COORDINATOR, i, reply))
    raise AssertionError("unreachable")


def transcript_distribution(protocol: Protocol, x: InputMatrix) -> Pmf:
    """Exact law of ``Pi(x)`` over the protocol's tapes.  Cached per input."""
    cache = protocol._cache.setdefault("transcripts", {})
    hit = cache.get(x)
    if hit is not None:
        return hit
    acc: dict[Transcript, Fraction] = {}
    for tape, w in joint_tapes(protocol):
        t = execute(protocol, x, tape)
        acc[t] = acc.get(t, Fraction(0)) + w
    pmf = Pmf(acc)
    cache[x] = pmf
    return pmf


def view_distribution(protocol: Protocol, x: InputMatrix, player: int) -> Pmf:
    """Law of player ``player``'s view ``Pi^i(x)``."""
    if not 1 <= player <= protocol.k:
        raise IndexError(f"player {player} out of range 1..{protocol.k}")
    cache = protocol._cache.setdefault("views", {})
    key = (x, player)
    hit = cache.get(key)
    if hit is None:
        hit = transcript_distribution(protocol, x).map(lambda t: restrict_view(t, player))
        cache[key] = hit
    return hit


def _inputs_of(protocol: Protocol, inputs: Iterable[InputMatrix] | None) -> Iterable[InputMatrix]:
    if inputs is not None:
        return inputs
    ensure_within(2 ** (protocol.k * protocol.n) * protocol.tape_space_size, f"inputs x tapes of {protocol.name}")
    return all_inputs(protocol.k, protocol.n)


def communication_cost(protocol: Protocol, inputs: Iterable[InputMatrix] | None = None) -> int:
    """Worst-case number of bits over all inputs and all tape outcomes."""
    worst = 0
    for x in _inputs_of(protocol, inputs):
        for t in transcript_distribution(protocol, x):
            worst = max(worst, t.bits)
    return worst


def error_probability(
    protocol: Protocol,
    truth: Callable[[InputMatrix], Hashable],
    inputs: Iterable[InputMatrix] | None = None,
) -> Fraction:
    """``max_X Pr[output != truth(X)]``, exactly."""
    worst = Fraction(0)
    for x in _inputs_of(protocol, inputs):
        want = truth(x)
        err = transcript_distribution(protocol, x).prob(lambda t: t.output != want)
        worst = max(worst, err)
    return worst


def privacy_probe(protocol: Protocol, player: int) -> bool:
    """Check that player ``player``'s replies depend only on its own row, view and tape.

    Every run over all inputs and tapes is replayed and the reply emitted at
    each point is recorded against ``(row, view so far, tape)``.  A conflict
    means the reply varied with something outside those three.
    """
    seen: dict[tuple, str] = {}
    for x in _inputs_of(protocol, None):
        for tape, _ in joint_tapes(protocol):
            view: list[Message] = []
            for m in execute(protocol, x, tape).messages:
                if m.channel != player:
                    continue
                if m.direction is Direction.TO_COORDINATOR:
                    key = (x.row(player), tuple(view), tape.players[player - 1])
                    if seen.setdefault(key, m.payload) != m.payload:
                        return False
                view.append(m)
    return True
