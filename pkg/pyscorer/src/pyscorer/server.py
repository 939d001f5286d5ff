"""Line-protocol server loop.

One JSON object per LF-terminated UTF-8 line. The client opens with
``{"proto": 1}`` and the server answers in kind; after that, every
request ``{"id": int, "dir": "fwd"|"bwd", "text": str}`` gets one
response ``{"id": int, "logp": float}``. Malformed requests produce
``{"id": null, "error": str}`` and the loop continues. End of input
shuts the loop down cleanly.
"""

from __future__ import annotations

import argparse
import json
import random
import select
import sys

from .backends import make_backend

PROTOCOL_VERSION = 1


def _write_line(out, obj) -> None:
    out.write(json.dumps(obj, ensure_ascii=False) + "\n")
    out.flush()


def _respond(backend, request, out) -> None:
    try:
        rid = request["id"]
        direction = request["dir"]
        text = request["text"]
        if direction not in ("fwd", "bwd"):
            raise ValueError(f"unknown dir {direction!r}")
        if not isinstance(text, str):
            raise ValueError("text must be a string")
    except (KeyError, TypeError, ValueError) as exc:
        _write_line(out, {"id": None, "error": str(exc)})
        return
    _write_line(out, {"id": rid, "logp": backend.logprob(text, direction)})


def serve(backend, stdin=None, stdout=None, shuffle: bool = False,
          shuffle_seed: int = 0) -> int:
    """Run the protocol loop until end of input.

    With ``shuffle``, requests are buffered while input keeps arriving
    and answered in a seeded-random order once it pauses; ids let the
    client reassemble request order. Useful for exercising clients.
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout

    line = stdin.readline()
    if not line:
        return 0
    try:
        greeting = json.loads(line)
    except json.JSONDecodeError as exc:
        _write_line(stdout, {"id": None, "error": f"bad handshake: {exc}"})
        return 1
    if greeting.get("proto") != PROTOCOL_VERSION:
        _write_line(stdout, {"id": None, "error": f"unsupported handshake {greeting!r}"})
        return 1
    _write_line(stdout, {"proto": PROTOCOL_VERSION})

    rng = random.Random(shuffle_seed)
    pending: list[dict] = []
    can_select = shuffle and hasattr(stdin, "fileno") and stdin is sys.stdin

    def flush_pending() -> None:
        rng.shuffle(pending)
        while pending:
            _respond(backend, pending.pop(), stdout)

    while True:
        if pending and can_select:
            ready, _, _ = select.select([stdin], [], [], 0.05)
            if not ready:
                flush_pending()
                continue
        line = stdin.readline()
        if not line:
            flush_pending()
            return 0
        if not line.strip():
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            _write_line(stdout, {"id": None, "error": str(exc)})
            continue
        if shuffle:
            pending.append(request)
            if not can_select and len(pending) >= 8:
                flush_pending()
        else:
            _respond(backend, request, stdout)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pyscorer", description="external-scorer protocol adapter over stdio"
    )
    parser.add_argument("--backend", choices=["mock", "neural"], default="mock")
    parser.add_argument("--model", help="causal LM name for the neural backend")
    parser.add_argument("--backward-model",
                        help="right-to-left LM; defaults to --model on reversed text")
    parser.add_argument("--shuffle", action="store_true",
                        help="answer buffered requests out of order (test aid)")
    args = parser.parse_args(argv)
    backend = make_backend(args.backend, args.model, args.backward_model)
    return serve(backend, shuffle=args.shuffle)


if __name__ == "__main__":
    sys.exit(main())
