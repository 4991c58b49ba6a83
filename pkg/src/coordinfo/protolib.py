"""Concrete protocols: the baselines and the direct-sum embedding.

Outputs follow the Set Disjointness convention: ``1`` means some coordinate
lies in every player's set ("not disjoint"), ``0`` means disjoint.  One-bit
AND protocols are the ``n = 1`` case, so ``1`` is also ``AND_k = 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .budget import ensure_within
from .distributions import MODE_LAW, column_mode_law
from .model import Halt, InputMatrix, Protocol, Send, Transcript, Direction, Message, disj
from .pmf import Pmf, product_pmf

__all__ = [
    "naive_protocol",
    "sequential_search_protocol",
    "and_poll_protocol",
    "random_order_and_protocol",
    "noisy_and_protocol",
    "noisy_reply_and_protocol",
    "constant_protocol",
    "coin_output_protocol",
    "compress_search_transcript",
    "decompress_search_transcript",
    "symbol_width",
    "EmbeddingConfig",
    "build_direct_sum_protocol",
    "direct_sum_protocol",
    "embedded_inputs",
]


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def _clog2(x: int) -> int:
    return max(0, math.ceil(math.log2(x))) if x > 1 else 0


def label_width(n: int) -> int:
    """Bits in a sequential-search poke naming the coordinate being asked."""
    return max(1, _clog2(n))


# ---------------------------------------------------------------------------
# baselines


def naive_protocol(n: int, k: int) -> Protocol:
    """Coordinator pokes every player; each replies with its whole input."""

    def coordinator(transcript, tape):
        r = len(transcript) // 2
        if r < k:
            return Send(r + 1, "1")
        rows = tuple(tuple(int(b) for b in m.payload) for m in transcript[1::2])
        return Halt(disj(InputMatrix(rows)))

    def player(i, row, view, tape):
        return "".join(map(str, row))

    return Protocol("naive", k, n, coordinator, player, max_rounds=k)


def _search_state(replies, n: int, k: int):
    """Walk sequential-search replies; return ``("ask", j, i)`` or ``("halt", out)``."""
    j, i = 1, 1
    for r in replies:
        if r == "0":
            j, i = j + 1, 1
        else:
            i += 1
            if i > k:
                return ("halt", 1)
    if j > n:
        return ("halt", 0)
    return ("ask", j, i)


def sequential_search_protocol(n: int, k: int, name: str = "seq-search") -> Protocol:
    """For each coordinate, poll players in order until one holds a 0.

    The poke names the coordinate in ``label_width(n)`` bits; the reply is
    the player's bit there.  Halts with 1 when all ``k`` players answer 1.
    """
    w = label_width(n)

    def coordinator(transcript, tape):
        state = _search_state([m.payload for m in transcript[1::2]], n, k)
        if state[0] == "halt":
            return Halt(state[1])
        _, j, i = state
        return Send(i, _bits(j - 1, w))

    def player(i, row, view, tape):
        j = int(view[-1].payload, 2) + 1
        return str(row[j - 1])

    return Protocol(name, k, n, coordinator, player, max_rounds=n * k)


def and_poll_protocol(k: int) -> Protocol:
    """Zero-error AND_k: sequential search on a single coordinate."""
    return sequential_search_protocol(1, k, name="and-poll")


def random_order_and_protocol(k: int) -> Protocol:
    """Zero-error AND_k that polls players in a uniformly random order."""
    perms = Pmf.uniform(itertools.permutations(range(1, k + 1)))

    def coordinator(transcript, order):
        replies = [m.payload for m in transcript[1::2]]
        if "0" in replies:
            return Halt(0)
        if len(replies) == k:
            return Halt(1)
        return Send(order[len(replies)], "1")

    def player(i, row, view, tape):
        return str(row[0])

    return Protocol("random-order-and", k, 1, coordinator, player, max_rounds=k, coordinator_tape=perms)


def noisy_and_protocol(k: int, flip: Fraction = Fraction(1, 4)) -> Protocol:
    """``and-poll`` whose coordinator flips its answer with probability ``flip``."""
    flip = Fraction(flip)
    base = and_poll_protocol(k)
    coin = Pmf({0: 1 - flip, 1: flip})

    def coordinator(transcript, b):
        act = base.coordinator(transcript, None)
        if isinstance(act, Halt):
            return Halt(act.output ^ b)
        return act

    return Protocol(
        f"noisy-and(flip={flip})", k, 1, coordinator, base.player,
        max_rounds=k, coordinator_tape=coin, params={"flip": flip},
    )


def noisy_reply_and_protocol(k: int, flip: Fraction = Fraction(1, 4)) -> Protocol:
    """``and-poll`` in which player 1 flips its reply with probability ``flip``.

    The error is exactly ``flip`` (for ``flip <= 1/2``), yet the transcripts
    on ``e_bar(1)`` and the all-ones input are only ``1 - 2 flip`` apart in
    statistical distance.
    """
    flip = Fraction(flip)
    base = and_poll_protocol(k)
    coin = Pmf({0: 1 - flip, 1: flip})
    tapes = (coin,) + tuple(Pmf.point(None) for _ in range(k - 1))

    def player(i, row, view, b):
        bit = row[0] ^ b if i == 1 else row[0]
        return str(bit)

    return Protocol(
        f"noisy-reply-and(flip={flip})", k, 1, base.coordinator, player,
        max_rounds=k, player_tapes=tapes, params={"flip": flip},
    )


def constant_protocol(n: int, k: int, output=0) -> Protocol:
    """Halts before any message is sent."""
    return Protocol(
        f"constant({output})", k, n,
        lambda transcript, tape: Halt(output),
        lambda i, row, view, tape: "0",
        max_rounds=0,
    )


def coin_output_protocol(n: int, k: int) -> Protocol:
    """Halts at once, answering with a fair coin."""
    return Protocol(
        "coin", k, n,
        lambda transcript, b: Halt(b),
        lambda i, row, view, tape: "0",
        max_rounds=0, coordinator_tape=Pmf.uniform((0, 1)),
    )


# ---------------------------------------------------------------------------
# sequential-search transcript compression


def symbol_width(k: int) -> int:
    return _clog2(k + 1)


def _search_symbols(transcript: Transcript, n: int, k: int) -> list[int]:
    w = label_width(n)
    symbols: list[int] = []
    j, i = 1, 1
    msgs = transcript.messages
    if len(msgs) % 2:
        raise ValueError("malformed search transcript: dangling message")
    for poke, reply in zip(msgs[0::2], msgs[1::2]):
        if j > n:
            raise ValueError("malformed search transcript: polls past the last coordinate")
        if (
            poke.direction is not Direction.TO_PLAYER
            or reply.direction is not Direction.TO_COORDINATOR
            or poke.channel != i
            or reply.channel != i
            or poke.payload != _bits(j - 1, w)
            or reply.payload not in ("0", "1")
        ):
            raise ValueError(f"malformed search transcript at coordinate {j}, player {i}")
        if reply.payload == "0":
            symbols.append(i)
            j, i = j + 1, 1
        elif i == k:
            symbols.append(0)
            j, i = n + 1, 1
            break
        else:
            i += 1
    if len(msgs) != 2 * sum(s if s else k for s in symbols):
        raise ValueError("malformed search transcript: messages after halt")
    complete = bool(symbols) and (symbols[-1] == 0 or len(symbols) == n)
    if not complete:
        raise ValueError("malformed search transcript: run did not finish")
    if transcript.output != int(symbols[-1] == 0):
        raise ValueError("malformed search transcript: output disagrees with replies")
    return symbols


def compress_search_transcript(transcript: Transcript, n: int, k: int) -> str:
    """Encode a sequential-search run as ``n`` fixed-width symbols.

    Symbol ``j`` is the index of the first player holding 0 at coordinate
    ``j``, or 0 when nobody does (and the run halted there).  Coordinates
    never reached are padded with 0, so the length is always
    ``n * ceil(log2(k + 1))``.
    """
    symbols = _search_symbols(transcript, n, k)
    symbols += [0] * (n - len(symbols))
    w = symbol_width(k)
    return "".join(_bits(s, w) for s in symbols)


def decompress_search_transcript(code: str, n: int, k: int) -> Transcript:
    w = symbol_width(k)
    if len(code) != n * w or set(code) - {"0", "1"}:
        raise ValueError(f"expected {n * w} bits, got {code!r}")
    lw = label_width(n)
    msgs: list[Message] = []
    for j in range(1, n + 1):
        s = int(code[(j - 1) * w : j * w], 2)
        if s > k:
            raise ValueError(f"symbol {s} out of range")
        last = s if s else k
        for i in range(1, last + 1):
            msgs.append(Message(Direction.TO_PLAYER, i, _bits(j - 1, lw)))
            msgs.append(Message(Direction.TO_COORDINATOR, i, "0" if i == s else "1"))
        if s == 0:
            if set(code[j * w :]) - {"0"}:
                raise ValueError("non-zero padding after the halting symbol")
            return Transcript(tuple(msgs), 1)
    return Transcript(tuple(msgs), 0)


# ---------------------------------------------------------------------------
# direct-sum embedding


@dataclass(frozen=True)
class _Setup:
    j: int
    z: tuple  # z[l-1] for l != j, 0 at j
    m: tuple  # mode for l < j, None elsewhere
    above: tuple  # column for l > j, None elsewhere
    above_m: tuple  # mode sampled alongside each column above j


@dataclass(frozen=True)
class EmbeddingConfig:
    """Inputs to the direct-sum construction.

    ``player_coin_bits`` and ``coordinator_outcomes`` may be given to pin the
    randomness budget; they must equal what the sampling steps consume.
    """

    base: Protocol
    player_coin_bits: int | None = None
    coordinator_outcomes: int | None = None

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def k(self) -> int:
        return self.base.k

    def required_player_bits(self) -> int:
        return self.n - 1

    def required_coordinator_outcomes(self) -> int:
        n, k = self.n, self.k
        return sum(k ** (n - 1) * 2 ** (j - 1) * (2**k + 1) ** (n - j) for j in range(1, n + 1))


def _setup_law(n: int, k: int) -> Pmf:
    """Coordinator's sampling: ``j``, the pointers off ``j``, the modes below
    ``j`` and the (column, mode) pairs above ``j``."""
    out: dict[_Setup, Fraction] = {}
    pj, pz = Fraction(1, n), Fraction(1, k)
    for j in range(1, n + 1):
        for zs in itertools.product(range(1, k + 1), repeat=n - 1):
            z = zs[: j - 1] + (0,) + zs[j - 1 :]
            below = [list(MODE_LAW.items()) for _ in range(j - 1)]
            above = [list(column_mode_law(k, z[l - 1]).items()) for l in range(j + 1, n + 1)]
            for ms in itertools.product(*below):
                for cms in itertools.product(*above):
                    w = pj * pz ** (n - 1)
                    for _, q in ms:
                        w *= q
                    for _, q in cms:
                        w *= q
                    setup = _Setup(
                        j,
                        z,
                        tuple(v for v, _ in ms) + (None,) * (n - j + 1),
                        (None,) * j + tuple(cm[0] for cm, _ in cms),
                        (None,) * j + tuple(cm[1] for cm, _ in cms),
                    )
                    out[setup] = w
    return Pmf(out)


def _setup_payload(s: _Setup, i: int, n: int, k: int) -> str:
    wj, wz = _clog2(n), _clog2(k)
    parts = [_bits(s.j - 1, wj)]
    parts += [_bits(s.z[l - 1] - 1, wz) for l in range(1, n + 1) if l != s.j]
    parts += [str(s.m[l - 1]) for l in range(1, s.j)]
    parts += [str(s.above[l - 1][i - 1]) for l in range(s.j + 1, n + 1)]
    return "".join(parts)


def _parse_setup(payload: str, n: int, k: int):
    wj, wz = _clog2(n), _clog2(k)
    pos = 0
    j = int(payload[:wj], 2) + 1
    pos = wj
    z = []
    for l in range(1, n + 1):
        if l == j:
            z.append(0)
        else:
            z.append(int(payload[pos : pos + wz], 2) + 1 if wz else 1)
            pos += wz
    m = [int(b) for b in payload[pos : pos + j - 1]]
    pos += j - 1
    above = [int(b) for b in payload[pos : pos + n - j]]
    if pos + n - j != len(payload):
        raise ValueError("setup message has the wrong length")
    return j, z, m, above


def _player_row(i: int, j: int, z, m, above, coins, u_bit: int) -> tuple[int, ...]:
    """Player ``i``'s embedded n-bit row."""
    row = []
    for l in range(1, j):
        if m[l - 1] == 1:
            row.append(0 if z[l - 1] == i else 1)
        else:
            row.append(coins[l - 1])
    row.append(u_bit)
    row.extend(above)
    return tuple(row)


def build_direct_sum_protocol(cfg: EmbeddingConfig) -> Protocol:
    """One-bit AND protocol that plants its input at a random coordinate of
    an ``n``-coordinate instance and runs the base protocol on it.

    Setup phase (skipped when ``n = 1``): player ``i`` receives one message
    holding ``j``, the pointers ``Z_l`` for ``l != j``, the modes ``M_l`` for
    ``l < j`` and its own bits ``X_l^i`` for ``l > j``, and acknowledges with
    a constant bit.  Below ``j`` each player draws its bit from the
    conditional law given ``(M_l, Z_l)`` with its private coins.
    """
    base, n, k = cfg.base, cfg.n, cfg.k
    if k < 2:
        raise ValueError("the embedding samples from xi, which needs k >= 2")
    if cfg.player_coin_bits is not None and cfg.player_coin_bits != cfg.required_player_bits():
        raise ValueError(
            f"coin budget mismatch: players need {cfg.required_player_bits()} bits, "
            f"config declares {cfg.player_coin_bits}"
        )
    if (
        cfg.coordinator_outcomes is not None
        and cfg.coordinator_outcomes != cfg.required_coordinator_outcomes()
    ):
        raise ValueError(
            f"coin budget mismatch: coordinator needs {cfg.required_coordinator_outcomes()} "
            f"outcomes, config declares {cfg.coordinator_outcomes}"
        )
    ensure_within(cfg.required_coordinator_outcomes(), "direct-sum setup law")
    setup_law = _setup_law(n, k)
    coord_tape = product_pmf([setup_law, base.coordinator_tape])
    coins = Pmf.uniform(itertools.product((0, 1), repeat=n - 1))
    player_tapes = tuple(product_pmf([coins, base.player_tapes[i]]) for i in range(k))
    lead = 2 * k if n > 1 else 0

    def coordinator(transcript, tape):
        setup, btape = tape
        if len(transcript) < lead:
            i = len(transcript) // 2 + 1
            return Send(i, _setup_payload(setup, i, n, k))
        return base.coordinator(transcript[lead:], btape)

    def player(i, row, view, tape):
        coin_bits, btape = tape
        if n == 1:
            return base.player(i, row, view, btape)
        if len(view) == 1:
            return "0"
        j, z, m, above = _parse_setup(view[0].payload, n, k)
        full = _player_row(i, j, z, m, above, coin_bits, row[0])
        return base.player(i, full, view[2:], btape)

    return Protocol(
        f"direct-sum(base={base.name})", k, 1, coordinator, player,
        max_rounds=base.max_rounds + (k if n > 1 else 0),
        coordinator_tape=coord_tape, player_tapes=player_tapes,
        params={"embedding": cfg},
    )


def direct_sum_protocol(base: Protocol) -> Protocol:
    return build_direct_sum_protocol(EmbeddingConfig(base))


def embedded_inputs(cfg: EmbeddingConfig, u: InputMatrix) -> Pmf:
    """Law of ``(j, X, M, Z)`` on which the embedding runs the base protocol.

    ``X`` is the full ``n``-coordinate input with ``u`` at coordinate ``j``;
    ``M`` and ``Z`` hold the sampled modes and pointers, with ``None`` at
    ``j``.  Built from the same sampling helpers the protocol uses.
    """
    n, k = cfg.n, cfg.k
    coins = Pmf.uniform(itertools.product((0, 1), repeat=n - 1))
    per_player = product_pmf([coins] * k)
    out: dict[tuple, Fraction] = {}
    for s, ps in _setup_law(n, k).items():
        for cs, pc in per_player.items():
            rows = []
            for i in range(1, k + 1):
                above = [s.above[l - 1][i - 1] for l in range(s.j + 1, n + 1)]
                rows.append(_player_row(i, s.j, s.z, s.m, above, cs[i - 1], u.row(i)[0]))
            modes = tuple(
                s.m[l - 1] if l < s.j else (None if l == s.j else s.above_m[l - 1])
                for l in range(1, n + 1)
            )
            pointers = tuple(None if l == s.j else s.z[l - 1] for l in range(1, n + 1))
            key = (s.j, InputMatrix(tuple(rows)), modes, pointers)
            out[key] = out.get(key, Fraction(0)) + ps * pc
    return Pmf(out)
