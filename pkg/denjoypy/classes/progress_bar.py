import sys
import time
from contextlib import contextmanager
from typing import Optional, TextIO


class ProgressBar:
    """
    Single-line progress display for loops over convergent indices or bisection steps.

    The bar is written to standard error so that reports on standard output stay reproducible.

    Parameters
    ----------
    total : int
        Number of steps.
    verb : str, optional
        Label shown before the bar.
    bar_length : int, optional
        Width of the bar in characters.
    stream : file-like, optional
        Destination, standard error by default.
    """

    def __init__(
        self, total: int, verb: str = "", bar_length: int = 40, stream: Optional[TextIO] = None
    ):
        self.total = max(int(total), 1)
        self.verb = verb
        self.bar_length = bar_length
        self.stream = stream if stream is not None else sys.stderr

        self.n_done = 0
        self.mean_step = 0.0
        self.init_time = time.perf_counter()
        self.last_print_time = 0.0

    @contextmanager
    def step(self):
        """Time one step; the bar is redrawn at most four times a second and on the last step."""
        start = time.perf_counter()
        yield
        elapsed = time.perf_counter() - start

        self.n_done += 1
        weight = 1 / self.n_done
        self.mean_step = weight * elapsed + (1 - weight) * self.mean_step

        now = time.perf_counter()
        if now - self.last_print_time > 0.25 or self.n_done == self.total:
            self.render()
            self.last_print_time = now

    @staticmethod
    def _clock(seconds: float) -> str:
        minutes, seconds = divmod(int(seconds), 60)
        return f"{minutes:02d}:{seconds:02d}"

    def render(self):
        filled = int(self.n_done / self.total * self.bar_length)
        remaining = self.mean_step * (self.total - self.n_done)
        elapsed = time.perf_counter() - self.init_time

        line = (
            f"{self.verb} {self.n_done:>{len(str(self.total))}} / {self.total} "
            f"[{'=' * filled}{' ' * (self.bar_length - filled)}] "
            f"elapsed: {self._clock(elapsed)}, remaining: {self._clock(remaining)}"
        )
        end = "\n" if self.n_done == self.total else "\r"
        self.stream.write(line + end)
        self.stream.flush()
