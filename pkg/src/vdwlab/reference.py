"""Known values and lower bounds for the mixed van der Waerden numbers w(3, k).

Sources are the computational literature: Brown, Landman and Robertson for
the exact small values, Ahmed, Kullmann and Snevily for the larger lower
bounds.  Entries are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ReferenceEntry", "ReferenceTable", "REFERENCE_TABLE"]


@dataclass(frozen=True)
class ReferenceEntry:
    k: int
    bound: int
    kind: str  # "exact" | "lower"
    source: str

    def to_dict(self) -> dict:
        return {"k": self.k, "w": self.bound, "kind": self.kind, "source": self.source}


class ReferenceTable:
    def __init__(self, entries: tuple[ReferenceEntry, ...]):
        self._entries = {e.k: e for e in entries}

    def lookup(self, k: int) -> ReferenceEntry:
        if k not in self._entries:
            raise KeyError(f"no reference entry for k={k}")
        return self._entries[k]

    def known_k(self) -> list[int]:
        return sorted(self._entries)

    def __iter__(self):
        return iter(sorted(self._entries.values(), key=lambda e: e.k))


REFERENCE_TABLE = ReferenceTable(
    (
        ReferenceEntry(4, 18, "exact", "Chvatal"),
        ReferenceEntry(5, 22, "exact", "Chvatal"),
        ReferenceEntry(6, 32, "exact", "Brown-Landman-Robertson"),
        ReferenceEntry(7, 46, "exact", "Brown-Landman-Robertson"),
        ReferenceEntry(8, 58, "exact", "Brown-Landman-Robertson"),
        ReferenceEntry(9, 77, "exact", "Brown-Landman-Robertson"),
        ReferenceEntry(10, 97, "exact", "Brown-Landman-Robertson"),
        ReferenceEntry(20, 389, "lower", "Ahmed-Kullmann-Snevily"),
        ReferenceEntry(30, 903, "lower", "Ahmed-Kullmann-Snevily"),
    )
)
