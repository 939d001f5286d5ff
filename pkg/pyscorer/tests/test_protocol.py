import io
import json
import sys

import pytest

from pyscorer import MockBackend, serve
from pyscorer.backends import make_backend


def run_session(lines, backend=None, **kwargs):
    """Feed protocol lines to serve(); returns (exit_code, response lines)."""
    stdin = io.StringIO("".join(line + "\n" for line in lines))
    stdout = io.StringIO()
    code = serve(backend or MockBackend(), stdin=stdin, stdout=stdout, **kwargs)
    out = [line for line in stdout.getvalue().splitlines() if line]
    return code, out


class TestServeLoop:
    def test_handshake_then_scoring(self):
        code, out = run_session([
            '{"proto": 1}',
            '{"id": 0, "dir": "fwd", "text": "abc"}',
            '{"id": 1, "dir": "bwd", "text": "ab"}',
        ])
        assert code == 0
        assert json.loads(out[0]) == {"proto": 1}
        assert json.loads(out[1]) == {"id": 0, "logp": -3.0}
        assert json.loads(out[2]) == {"id": 1, "logp": -2.0}

    def test_empty_text_scores_zero(self):
        _, out = run_session(['{"proto": 1}', '{"id": 5, "dir": "fwd", "text": ""}'])
        assert json.loads(out[1]) == {"id": 5, "logp": 0.0}

    def test_malformed_line_keeps_loop_alive(self):
        code, out = run_session([
            '{"proto": 1}',
            "{nope",
            '{"id": 2, "dir": "fwd", "text": "xy"}',
        ])
        assert code == 0
        error = json.loads(out[1])
        assert error["id"] is None and "error" in error
        assert json.loads(out[2]) == {"id": 2, "logp": -2.0}

    def test_missing_fields_reported(self):
        _, out = run_session(['{"proto": 1}', '{"id": 3, "text": "x"}'])
        assert json.loads(out[1])["id"] is None

    def test_bad_dir_reported(self):
        _, out = run_session(['{"proto": 1}', '{"id": 3, "dir": "up", "text": "x"}'])
        assert "error" in json.loads(out[1])

    def test_bad_handshake_exits_nonzero(self):
        code, out = run_session(['{"proto": 99}'])
        assert code == 1
        assert "error" in json.loads(out[0])

    def test_eof_is_clean_shutdown(self):
        code, out = run_session(['{"proto": 1}'])
        assert code == 0
        assert len(out) == 1

    def test_transcript_is_valid_protocol(self):
        requests = [f'{{"id": {i}, "dir": "fwd", "text": "{"x" * i}"}}' for i in range(20)]
        _, out = run_session(['{"proto": 1}'] + requests)
        assert json.loads(out[0]) == {"proto": 1}
        for line in out[1:]:
            response = json.loads(line)
            assert set(response) == {"id", "logp"}
            assert isinstance(response["id"], int)
            assert isinstance(response["logp"], float)

    def test_mock_is_pure(self):
        batch = ['{"proto": 1}'] + [
            '{"id": %d, "dir": "fwd", "text": "hello"}' % i for i in range(5)
        ]
        _, first = run_session(batch)
        _, second = run_session(batch)
        assert [json.loads(l)["logp"] for l in first[1:]] == [
            json.loads(l)["logp"] for l in second[1:]
        ]

    def test_shuffle_mode_answers_everything(self):
        requests = [f'{{"id": {i}, "dir": "fwd", "text": "{"a" * i}"}}' for i in range(16)]
        code, out = run_session(['{"proto": 1}'] + requests, shuffle=True)
        assert code == 0
        answered = {json.loads(line)["id"]: json.loads(line)["logp"] for line in out[1:]}
        assert answered == {i: -float(i) for i in range(16)}


class TestBackends:
    def test_mock_direction_symmetry(self):
        backend = MockBackend()
        assert backend.logprob("abc", "fwd") == -3.0
        assert backend.logprob("abc", "bwd") == -3.0

    def test_make_backend_mock(self):
        assert isinstance(make_backend("mock"), MockBackend)

    def test_neural_falls_back_without_deps(self, monkeypatch, capsys):
        import builtins

        real_import = builtins.__import__

        def blocked(name, *args, **kwargs):
            if name in ("torch", "transformers"):
                raise ImportError(f"{name} blocked for test")
            return real_import(name, *args, **kwargs)

        monkeypatch.setattr(builtins, "__import__", blocked)
        backend = make_backend("neural")
        assert isinstance(backend, MockBackend)
        assert "falling back to MOCK" in capsys.readouterr().err


class TestAcceptanceA9:
    """Protocol round-trip against the core client (criterion A9)."""

    def _spawn(self, *flags):
        gojun = pytest.importorskip("gojun")
        return gojun.ExternalScorerClient.spawn(
            [sys.executable, "-m", "pyscorer", *flags], timeout=30.0
        )

    def test_a9(self):
        texts = [("x" * (i % 31)) for i in range(1000)]
        expected = [-float(len(t)) for t in texts]

        with self._spawn() as client:
            assert client.score(texts, "fwd") == expected
            assert client.score(["abc"], "fwd") == [-3.0]
            assert client.score(["abc"], "bwd") == [-3.0]

        with self._spawn("--shuffle") as client:
            assert client.score(texts, "bwd") == expected

        print("A9 PASS (1k batch round-trip, shuffled mode, logp('abc') = -3.0)")
