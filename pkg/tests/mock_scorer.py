"""Stdio mock speaking the external-scorer line protocol, for client tests.

logp defaults to -len(text). Knobs exercise failure paths:
  --shuffle     buffer requests while input is busy, then reply in a
                seed-shuffled order (ids must still pair everything up)
  --hang        complete the handshake, then never respond
  --bad-ids     reply with ids shifted by 1000
  --no-handshake  greet with garbage instead of the protocol line
"""

import argparse
import json
import random
import select
import sys


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--shuffle", action="store_true")
    parser.add_argument("--hang", action="store_true")
    parser.add_argument("--bad-ids", action="store_true")
    parser.add_argument("--no-handshake", action="store_true")
    args = parser.parse_args()

    def reply(obj):
        sys.stdout.write(json.dumps(obj) + "\n")
        sys.stdout.flush()

    line = sys.stdin.readline()
    if not line:
        return 0
    if args.no_handshake:
        reply({"hello": "world"})
    else:
        json.loads(line)
        reply({"proto": 1})

    if args.hang:
        while sys.stdin.readline():
            pass
        return 0

    rng = random.Random(0)
    pending = []

    def respond(request):
        rid = request["id"] + (1000 if args.bad_ids else 0)
        reply({"id": rid, "logp": -float(len(request["text"]))})

    def flush():
        rng.shuffle(pending)
        while pending:
            respond(pending.pop())

    while True:
        if args.shuffle and pending:
            readable, _, _ = select.select([sys.stdin], [], [], 0.05)
            if not readable:
                flush()
                continue
        line = sys.stdin.readline()
        if not line:
            flush()
            return 0
        if not line.strip():
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            reply({"id": None, "error": str(exc)})
            continue
        if args.shuffle:
            pending.append(request)
        else:
            respond(request)


if __name__ == "__main__":
    sys.exit(main())
