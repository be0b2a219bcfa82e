"""Line-protocol bridge to external objective processes.

Protocol, one evaluation per round trip: the parent writes one line of
D space-separated decimal floats to the child's stdin; the child replies
with one line holding a single decimal float on stdout. Floats travel in
shortest round-trip decimal form, so both sides compute on identical
doubles. Replies are awaited with a per-evaluation timeout.
"""
from __future__ import annotations

import os
import select
import shlex
import subprocess
import time
from typing import Optional, Sequence, Union

import numpy as np

from ..core import EvaluationAbort, Objective

DEFAULT_TIMEOUT = 30.0


class ProtocolError(EvaluationAbort):
    """The child replied with something other than one float on one line."""


class ExternalTimeout(EvaluationAbort):
    """The child did not reply within the per-evaluation timeout."""


class ChildExit(EvaluationAbort):
    """The child process ended while evaluations were still expected."""


class ExternalObjective:
    """A callable objective backed by a subprocess speaking the protocol.

    Use as a context manager, or call :meth:`close` when done. The
    subprocess starts lazily on the first evaluation.
    """

    def __init__(self, cmd: Union[str, Sequence[str]], *,
                 timeout: float = DEFAULT_TIMEOUT):
        self.cmd = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
        self.timeout = float(timeout)
        self._proc: Optional[subprocess.Popen] = None
        self._buffer = b""

    def __enter__(self) -> "ExternalObjective":
        self._ensure_started()
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _ensure_started(self) -> None:
        if self._proc is None:
            self._proc = subprocess.Popen(
                self.cmd, stdin=subprocess.PIPE, stdout=subprocess.PIPE)

    def __call__(self, x: np.ndarray) -> float:
        self._ensure_started()
        proc = self._proc
        line = " ".join(repr(float(v)) for v in x) + "\n"
        try:
            proc.stdin.write(line.encode("ascii"))
            proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ChildExit(self._exit_message("while sending a request")) from exc
        reply = self._read_line()
        tokens = reply.split()
        if len(tokens) != 1:
            raise ProtocolError(f"expected one float per reply line, got {reply!r}")
        try:
            return float(tokens[0])
        except ValueError as exc:
            raise ProtocolError(f"unparseable objective value {tokens[0]!r}") from exc

    def _read_line(self) -> str:
        proc = self._proc
        fd = proc.stdout.fileno()
        deadline = time.monotonic() + self.timeout
        while b"\n" not in self._buffer:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise ExternalTimeout(
                    f"no reply within {self.timeout} s from {self.cmd!r}")
            ready, _, _ = select.select([fd], [], [], remaining)
            if not ready:
                continue
            chunk = os.read(fd, 65536)
            if chunk == b"":
                raise ChildExit(self._exit_message("while awaiting a reply"))
            self._buffer += chunk
        line, self._buffer = self._buffer.split(b"\n", 1)
        return line.decode("ascii", errors="replace")

    def _exit_message(self, when: str) -> str:
        code = self._proc.poll()
        return f"child {self.cmd!r} exited (returncode {code}) {when}"

    def close(self) -> None:
        if self._proc is None:
            return
        proc, self._proc = self._proc, None
        try:
            if proc.stdin:
                proc.stdin.close()
            proc.terminate()
            proc.wait(timeout=5)
        except Exception:
            proc.kill()
        finally:
            if proc.stdout:
                proc.stdout.close()

    def objective(self, known_optimum: Optional[float] = None,
                  known_solution: Optional[np.ndarray] = None) -> Objective:
        """Wrap this bridge in the standard objective contract."""
        return Objective(fn=self, known_optimum=known_optimum,
                         known_solution=known_solution)
