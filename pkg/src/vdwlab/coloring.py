"""Two-colourings of [N] and exact monochromatic-progression verification.

A colouring stores the blue set as a boolean array indexed by n = 1..N; red
is always the complement.  The verifiers are exact: the 3-AP search either
returns a witness or proves absence, and the longest-AP scan is exhaustive
over all differences d <= d_max.
"""

from __future__ import annotations

import binascii
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Colouring",
    "ApWitness",
    "find_blue_3ap",
    "longest_mono_ap",
    "ap_is_monochromatic",
]

BLUE = "blue"
RED = "red"

# Below this blue density the pairwise O(|B|^2) 3-AP scan beats the O(N*d)
# difference sweep.
SPARSE_DENSITY = 0.05


@dataclass(frozen=True)
class ApWitness:
    """Arithmetic progression start, start + d, ..., start + (length-1) d."""

    start: int
    difference: int
    length: int

    def elements(self) -> np.ndarray:
        return self.start + self.difference * np.arange(self.length)

    def validate(self, n_max: int) -> None:
        if self.start < 1 or self.length < 1 or self.difference < 1:
            raise ValueError(f"degenerate witness {self}")
        if self.start + (self.length - 1) * self.difference > n_max:
            raise ValueError(f"witness {self} leaves [1, {n_max}]")

    def to_dict(self) -> dict:
        return {"start": self.start, "difference": self.difference, "length": self.length}

    @classmethod
    def from_dict(cls, d: dict) -> "ApWitness":
        return cls(int(d["start"]), int(d["difference"]), int(d["length"]))


class Colouring:
    """Blue/red colouring of {1, ..., n_max}; immutable after construction."""

    def __init__(self, n_max: int, blue: np.ndarray):
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        blue = np.asarray(blue, dtype=bool)
        if blue.shape != (n_max,):
            raise ValueError(f"blue array must have shape ({n_max},)")
        self.n_max = int(n_max)
        self._blue = blue.copy()
        self._blue.setflags(write=False)

    @classmethod
    def from_blue_set(cls, n_max: int, blue_elements) -> "Colouring":
        mask = np.zeros(n_max, dtype=bool)
        for n in blue_elements:
            if not 1 <= n <= n_max:
                raise ValueError(f"element {n} outside [1, {n_max}]")
            mask[n - 1] = True
        return cls(n_max, mask)

    @property
    def blue_mask(self) -> np.ndarray:
        """Boolean array, index i <-> n = i + 1."""
        return self._blue

    def mask(self, colour: str) -> np.ndarray:
        if colour == BLUE:
            return self._blue
        if colour == RED:
            return ~self._blue
        raise ValueError(f"unknown colour {colour!r}")

    def blue_elements(self) -> np.ndarray:
        return np.flatnonzero(self._blue) + 1

    def blue_count(self) -> int:
        return int(self._blue.sum())

    def is_blue(self, n: int) -> bool:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"{n} outside [1, {self.n_max}]")
        return bool(self._blue[n - 1])

    def swapped(self) -> "Colouring":
        """Colouring with blue and red exchanged."""
        return Colouring(self.n_max, ~self._blue)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Colouring)
            and self.n_max == other.n_max
            and bool(np.array_equal(self._blue, other._blue))
        )

    def __repr__(self) -> str:
        return f"Colouring(n_max={self.n_max}, blue={self.blue_count()})"

    # -- file format: "vdwf1 N=<int>" header, hex bit array, LSB = n=1 --

    def dumps(self) -> str:
        packed = np.packbits(self._blue, bitorder="little")
        return f"vdwf1 N={self.n_max}\n{packed.tobytes().hex()}\n"

    @classmethod
    def loads(cls, text: str) -> "Colouring":
        lines = text.strip().splitlines()
        if len(lines) != 2:
            raise ValueError("expected header line plus one hex line")
        header, hexline = lines[0].strip(), lines[1].strip()
        if not header.startswith("vdwf1 N="):
            raise ValueError(f"bad header {header!r}")
        n_max = int(header[len("vdwf1 N=") :])
        try:
            raw = binascii.unhexlify(hexline)
        except (binascii.Error, ValueError) as exc:
            raise ValueError(f"bad hex payload: {exc}") from exc
        if len(raw) != (n_max + 7) // 8:
            raise ValueError(f"payload holds {len(raw)} bytes, need {(n_max + 7) // 8}")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        if bits[n_max:].any():
            raise ValueError("padding bits beyond N must be zero")
        return cls(n_max, bits[:n_max].astype(bool))

    def save(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "Colouring":
        with open(path, "r", encoding="ascii") as fh:
            return cls.loads(fh.read())


def _find_blue_3ap_sparse(blue_idx: np.ndarray, blue: np.ndarray) -> ApWitness | None:
    """Scan pairs of blue elements, probing the midpoint.  O(|B|^2)."""
    best: tuple[int, int] | None = None  # (d, n0) minimal
    for k, x in enumerate(blue_idx[:-1]):
        z = blue_idx[k + 1 :]
        span = z - x
        even = span % 2 == 0
        if not even.any():
            continue
        mids = x + span[even] // 2
        hit = blue[mids]
        if not hit.any():
            continue
        d = int((span[even][hit] // 2).min())
        key = (d, int(x) + 1)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return ApWitness(start=best[1], difference=best[0], length=3)


def _find_blue_3ap_dense(blue: np.ndarray, n_max: int) -> ApWitness | None:
    """Sweep differences in increasing order; first hit is the minimal one."""
    for d in range(1, (n_max - 1) // 2 + 1):
        hits = blue[: n_max - 2 * d] & blue[d : n_max - d] & blue[2 * d :]
        idx = np.flatnonzero(hits)
        if idx.size:
            return ApWitness(start=int(idx[0]) + 1, difference=d, length=3)
    return None


def find_blue_3ap(c: Colouring) -> ApWitness | None:
    """Exhaustive blue 3-AP search; None iff the blue set is 3-AP-free.

    Ties resolved to the witness with smallest difference, then smallest
    start, so the result does not depend on scan strategy.
    """
    blue = c.blue_mask
    count = c.blue_count()
    if count < 3:
        return None
    if count / c.n_max <= SPARSE_DENSITY:
        return _find_blue_3ap_sparse(np.flatnonzero(blue), blue)
    return _find_blue_3ap_dense(blue, c.n_max)


def _longest_run_for_difference(mask: np.ndarray, d: int) -> tuple[int, int]:
    """(best length, best start index 0-based) of True runs along stride d."""
    n = mask.shape[0]
    ncols = -(-n // d)
    padded = np.zeros(d * ncols, dtype=bool)
    padded[:n] = mask
    # residue class g sits in row g, ordered by position
    mat = padded.reshape(ncols, d).T
    idx = np.arange(ncols)
    last_false = np.maximum.accumulate(np.where(mat, -1, idx[None, :]), axis=1)
    runs = np.where(mat, idx[None, :] - last_false, 0)
    best = int(runs.max())
    if best == 0:
        return 0, -1
    gs, qs = np.nonzero(runs == best)
    starts = gs + (qs - best + 1) * d
    return best, int(starts.min())


def longest_mono_ap(c: Colouring, colour: str, d_max: int) -> tuple[int, ApWitness | None]:
    """Longest monochromatic AP over all differences d <= d_max, with witness.

    Exact for the searched range; cost O(N * d_max).  Ties go to the smallest
    difference, then the smallest start.  Returns (0, None) when the colour
    class is empty.
    """
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    if d_max > c.n_max - 1 and c.n_max > 1:
        d_max = c.n_max - 1
    mask = c.mask(colour)
    if not mask.any():
        return 0, None
    if c.n_max == 1:
        return 1, ApWitness(start=1, difference=1, length=1)
    best_len = 0
    best_witness: ApWitness | None = None
    for d in range(1, d_max + 1):
        length, start0 = _longest_run_for_difference(mask, d)
        if length > best_len:
            best_len = length
            best_witness = ApWitness(start=start0 + 1, difference=d, length=length)
    return best_len, best_witness


def ap_is_monochromatic(c: Colouring, w: ApWitness, colour: str) -> bool:
    """True iff every element of the progression carries the colour."""
    w.validate(c.n_max)
    mask = c.mask(colour)
    return bool(mask[w.elements() - 1].all())
