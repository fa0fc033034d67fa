"""Per-worker task deque: the owner works LIFO at the head, thieves take
from the tail.

Built on :class:`collections.deque`, whose single-element appends and pops
are atomic in CPython. A steal is a run of individual tail pops, so a task is
handed to exactly one party even when the owner races for the last element,
and neither side ever takes a lock.
"""

from __future__ import annotations

from collections import deque
from typing import Generic, Iterable, TypeVar

T = TypeVar("T")


class WorkerDeque(Generic[T]):
    __slots__ = ("_items", "peak")

    def __init__(self, items: Iterable[T] = ()):
        self._items: deque[T] = deque(items)
        self.peak = len(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __repr__(self) -> str:
        return f"WorkerDeque(len={len(self._items)})"

    def push(self, task: T) -> None:
        self._items.append(task)
        if len(self._items) > self.peak:
            self.peak = len(self._items)

    def push_all(self, tasks: list[T]) -> None:
        """Push so that ``tasks[0]`` ends up at the head and runs first."""
        self._items.extend(reversed(tasks))
        n = len(self._items)
        if n > self.peak:
            self.peak = n

    def push_tail_batch(self, tasks: list[T]) -> None:
        """Install a stolen batch, keeping its tail-to-head order."""
        self._items.extend(tasks)
        n = len(self._items)
        if n > self.peak:
            self.peak = n

    def pop(self) -> T | None:
        """Owner pop from the head."""
        try:
            return self._items.pop()
        except IndexError:
            return None

    def steal_half(self) -> list[T]:
        """Remove ceil(n/2) tasks from the tail, oldest first.

        ``n`` is the length when the steal starts; if the owner drains the
        deque concurrently the batch is simply shorter (possibly empty).
        """
        k = (len(self._items) + 1) // 2
        out = []
        popleft = self._items.popleft
        for _ in range(k):
            try:
                out.append(popleft())
            except IndexError:
                break
        return out

    def snapshot(self) -> list[T]:
        """Tail-to-head copy, for tests and diagnostics."""
        return list(self._items)


def steal(victim: WorkerDeque[T]) -> list[T]:
    return victim.steal_half()
