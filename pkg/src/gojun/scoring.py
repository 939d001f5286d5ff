"""Bidirectional sentence scoring and variant comparison.

A sentence's score is the sum of a forward (left-to-right) and a backward
(right-to-left) log-probability in nats, i.e. the log of the product of
the two generation probabilities. Scorer handles are either built-in
n-gram models or an external process speaking the line-delimited JSON
protocol (see ExternalScorerClient).
"""

from __future__ import annotations

import json
import queue
import socket
import subprocess
import threading
from dataclasses import dataclass
from typing import Protocol, Sequence

from .corpus import render_text
from .errors import ExternalScorerDownError, ProtocolError
from .ngram import Direction, NGramModel
from .transform import VariantSet

TIE = "TIE"

PROTOCOL_VERSION = 1
DEFAULT_TIMEOUT = 30.0
DEFAULT_TIE_EPSILON = 1e-9


class ScorerHandle(Protocol):
    def logprob_batch(self, texts: Sequence[str]) -> list[float]: ...


@dataclass(frozen=True)
class ScoredVariant:
    label: str
    text: str
    forward_logp: float
    backward_logp: float

    @property
    def combined_logp(self) -> float:
        return self.forward_logp + self.backward_logp


@dataclass(frozen=True)
class ComparisonResult:
    """Variants sorted by descending combined score, with tie detection."""

    variants: tuple[ScoredVariant, ...]
    winner: str
    tie_epsilon: float

    @property
    def is_tie(self) -> bool:
        return self.winner == TIE

    @property
    def best(self) -> ScoredVariant:
        return self.variants[0]


class ExternalScorerHandle:
    """One direction of an external scorer process."""

    def __init__(self, client: "ExternalScorerClient", direction: Direction):
        self.client = client
        self.direction = direction

    def logprob_batch(self, texts: Sequence[str]) -> list[float]:
        wire = "fwd" if self.direction is Direction.FORWARD else "bwd"
        return self.client.score(texts, wire)


class BidirectionalScorer:
    def __init__(self, forward: ScorerHandle, backward: ScorerHandle):
        if isinstance(forward, NGramModel) and forward.direction is not Direction.FORWARD:
            raise ValueError("forward handle is not a FORWARD model")
        if isinstance(backward, NGramModel) and backward.direction is not Direction.BACKWARD:
            raise ValueError("backward handle is not a BACKWARD model")
        self.forward = forward
        self.backward = backward

    @classmethod
    def from_external(cls, client: "ExternalScorerClient") -> "BidirectionalScorer":
        return cls(
            ExternalScorerHandle(client, Direction.FORWARD),
            ExternalScorerHandle(client, Direction.BACKWARD),
        )

    def score_batch(self, texts: Sequence[str], labels: Sequence[str] | None = None) -> list[ScoredVariant]:
        labels = list(labels) if labels is not None else [str(i) for i in range(len(texts))]
        fwd = self.forward.logprob_batch(texts)
        bwd = self.backward.logprob_batch(texts)
        return [
            ScoredVariant(label=lab, text=t, forward_logp=f, backward_logp=b)
            for lab, t, f, b in zip(labels, texts, fwd, bwd)
        ]

    def score(self, text: str, label: str = "") -> ScoredVariant:
        return self.score_batch([text], [label])[0]


def score(scorer: BidirectionalScorer, text: str, label: str = "") -> ScoredVariant:
    return scorer.score(text, label)


def compare(
    scorer: BidirectionalScorer,
    variant_set: VariantSet,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    separator: str = "",
) -> ComparisonResult:
    """Score every variant and pick the argmax of the combined score.

    The result is a TIE when the top two combined scores differ by at most
    tie_epsilon. Equal scores order lexicographically by label, so the
    outcome is deterministic regardless of input order.
    """
    return compare_texts(
        scorer,
        [(label, render_text(s, separator)) for label, s in variant_set.variants],
        tie_epsilon,
    )


def compare_texts(
    scorer: BidirectionalScorer,
    labeled_texts: Sequence[tuple[str, str]],
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
) -> ComparisonResult:
    """compare() over raw labeled texts instead of a VariantSet."""
    if len(labeled_texts) < 2:
        raise ValueError("compare needs at least two variants")
    labels = [label for label, _ in labeled_texts]
    texts = [text for _, text in labeled_texts]
    scored = scorer.score_batch(texts, labels)
    scored.sort(key=lambda v: (-v.combined_logp, v.label))
    tie = abs(scored[0].combined_logp - scored[1].combined_logp) <= tie_epsilon
    winner = TIE if tie else scored[0].label
    return ComparisonResult(variants=tuple(scored), winner=winner, tie_epsilon=tie_epsilon)


# ---------------------------------------------------------------------------
# External scorer protocol


class _LineChannel:
    """Line transport over a child process's stdio or a TCP socket.

    A reader thread funnels decoded lines into a queue so reads can time
    out without platform-specific pipe tricks.
    """

    def __init__(self, reader, writer, process: subprocess.Popen | None = None,
                 sock: socket.socket | None = None):
        self._reader = reader
        self._writer = writer
        self._process = process
        self._sock = sock
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._thread = threading.Thread(target=self._pump, daemon=True)
        self._thread.start()

    def _pump(self) -> None:
        try:
            for line in self._reader:
                self._lines.put(line)
        except (OSError, ValueError):
            pass
        self._lines.put(None)

    def write_line(self, line: str) -> None:
        try:
            self._writer.write(line + "\n")
            self._writer.flush()
        except (OSError, ValueError, BrokenPipeError) as exc:
            raise ExternalScorerDownError(f"cannot write to scorer: {exc}") from exc

    def read_line(self, timeout: float) -> str:
        try:
            line = self._lines.get(timeout=timeout)
        except queue.Empty:
            raise ExternalScorerDownError(
                f"scorer did not respond within {timeout:.0f} s"
            ) from None
        if line is None:
            raise ExternalScorerDownError("scorer closed its output stream")
        return line

    def close(self) -> None:
        for stream in (self._writer, self._reader):
            try:
                stream.close()
            except (OSError, ValueError):
                pass
        if self._process is not None:
            try:
                self._process.terminate()
                self._process.wait(timeout=5)
            except (OSError, subprocess.TimeoutExpired):
                self._process.kill()
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass


class ExternalScorerClient:
    """Client for the external-scorer line protocol.

    Wire format, one JSON object per LF-terminated UTF-8 line:
    request ``{"id": int, "dir": "fwd"|"bwd", "text": str}``, response
    ``{"id": int, "logp": float}``. Both sides open with the handshake
    line ``{"proto": 1}``. Responses may arrive in any order; ids pair
    them back to requests.
    """

    def __init__(self, channel: _LineChannel, timeout: float = DEFAULT_TIMEOUT):
        self._channel = channel
        self._timeout = timeout
        self._next_id = 0
        self._lock = threading.Lock()
        self._handshake()

    @classmethod
    def spawn(cls, cmd: Sequence[str], timeout: float = DEFAULT_TIMEOUT) -> "ExternalScorerClient":
        try:
            process = subprocess.Popen(
                list(cmd),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise ExternalScorerDownError(f"cannot launch scorer {cmd!r}: {exc}") from exc
        channel = _LineChannel(process.stdout, process.stdin, process=process)
        return cls(channel, timeout=timeout)

    @classmethod
    def connect(cls, host: str, port: int, timeout: float = DEFAULT_TIMEOUT) -> "ExternalScorerClient":
        try:
            sock = socket.create_connection((host, port), timeout=timeout)
        except OSError as exc:
            raise ExternalScorerDownError(f"cannot connect to {host}:{port}: {exc}") from exc
        reader = sock.makefile("r", encoding="utf-8", newline="\n")
        writer = sock.makefile("w", encoding="utf-8", newline="\n")
        channel = _LineChannel(reader, writer, sock=sock)
        return cls(channel, timeout=timeout)

    def _handshake(self) -> None:
        self._channel.write_line(json.dumps({"proto": PROTOCOL_VERSION}))
        line = self._channel.read_line(self._timeout)
        try:
            greeting = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"bad handshake line: {line!r}") from exc
        if greeting.get("proto") != PROTOCOL_VERSION:
            raise ProtocolError(f"unsupported protocol handshake: {greeting!r}")

    def score(self, texts: Sequence[str], direction: str) -> list[float]:
        """Log-probabilities for texts, in request order; thread-safe."""
        if direction not in ("fwd", "bwd"):
            raise ValueError(f"direction must be 'fwd' or 'bwd', got {direction!r}")
        if not texts:
            return []
        with self._lock:
            ids = []
            for text in texts:
                rid = self._next_id
                self._next_id += 1
                ids.append(rid)
                self._channel.write_line(
                    json.dumps({"id": rid, "dir": direction, "text": text}, ensure_ascii=False)
                )
            pending = set(ids)
            results: dict[int, float] = {}
            while pending:
                line = self._channel.read_line(self._timeout)
                try:
                    response = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ProtocolError(f"bad response line: {line!r}") from exc
                if "error" in response:
                    raise ProtocolError(f"scorer error: {response['error']}")
                rid = response.get("id")
                if rid not in pending:
                    raise ProtocolError(f"response id {rid!r} does not match any request")
                if not isinstance(response.get("logp"), (int, float)):
                    raise ProtocolError(f"response lacks numeric logp: {line!r}")
                results[rid] = float(response["logp"])
                pending.discard(rid)
        return [results[rid] for rid in ids]

    def close(self) -> None:
        self._channel.close()

    def __enter__(self) -> "ExternalScorerClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def score_external(client: ExternalScorerClient, texts: Sequence[str], direction: str = "fwd") -> list[float]:
    return client.score(texts, direction)
