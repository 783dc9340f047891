"""Shared record of acceptance outcomes, printed once per criterion."""
from __future__ import annotations

LINES: dict[int, str] = {}


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES[n] = line
    print(line)
