"""Walsh-Hadamard amplitude reflection patterns and their cyclic-shift ambiguity.

Because the receiver searches over all cyclic shifts of a candidate pattern,
two Hadamard rows that are cyclic shifts of each other (or of each other's
negation) are indistinguishable.  Code assignment therefore picks at most one
representative per cyclic-equivalence class.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import CapacityError


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class ArpCode:
    """A length-M amplitude reflection pattern of +-1 symbols, tied to one RIS id."""

    ris_id: int
    symbols: np.ndarray

    def __post_init__(self):
        if self.ris_id < 1:
            raise ValueError(f"ris_id must be >= 1, got {self.ris_id}")
        sym = np.asarray(self.symbols, dtype=np.int64)
        if sym.ndim != 1:
            raise ValueError("code symbols must be a flat vector")
        m = sym.size
        if not _is_power_of_two(m) or m < 2:
            raise ValueError(f"code length must be a power of two >= 2, got {m}")
        if not np.all(np.abs(sym) == 1):
            raise ValueError("code symbols must all be +1 or -1")
        if int(sym.sum()) != 0:
            raise ValueError("code must be zero-mean (equal counts of +1 and -1)")
        sym = sym.astype(np.int8)
        sym.setflags(write=False)
        object.__setattr__(self, "symbols", sym)

    @property
    def length(self) -> int:
        return int(self.symbols.size)


@dataclass(frozen=True)
class CodebookReport:
    codes: List[ArpCode]
    max_pairwise_cyclic_corr: float
    ambiguity_classes: List[List[int]]


def generate_hadamard(order: int) -> np.ndarray:
    """Return the Sylvester Hadamard matrix of the given power-of-two order.

    Row 0 is all ones and H @ H.T == order * I holds exactly in integer
    arithmetic.
    """
    if not isinstance(order, (int, np.integer)) or not _is_power_of_two(int(order)):
        raise ValueError(f"Hadamard order must be a power of two >= 1, got {order!r}")
    h = np.array([[1]], dtype=np.int64)
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    return h


def max_cyclic_crosscorr(a: Sequence[int], b: Sequence[int]) -> float:
    """Maximum over all cyclic shifts of |a . shift(b)| / M, in [0, 1]."""
    av = np.asarray(a, dtype=np.int64)
    bv = np.asarray(b, dtype=np.int64)
    if av.shape != bv.shape or av.ndim != 1:
        raise ValueError(f"vectors must share one length, got {av.shape} and {bv.shape}")
    m = av.size
    best = 0
    for s in range(m):
        c = abs(int(np.dot(av, np.roll(bv, -s))))
        if c > best:
            best = c
    return best / m


def _canonical_form(row: np.ndarray) -> tuple:
    # Lexicographic minimum over all rotations of the row and of its negation.
    best = None
    for signed in (row, -row):
        for s in range(row.size):
            cand = tuple(np.roll(signed, s).tolist())
            if best is None or cand < best:
                best = cand
    return best


def cyclic_ambiguity_classes(rows: Sequence[np.ndarray]) -> List[List[int]]:
    """Partition row indices into classes equivalent up to cyclic shift and sign.

    Two rows share a class iff one equals some cyclic shift of the other or of
    its negation.  Classes are returned in order of their smallest member.
    """
    rows = [np.asarray(r, dtype=np.int64) for r in rows]
    if rows and any(r.shape != rows[0].shape for r in rows):
        raise ValueError("all rows must have the same length")
    groups: dict = {}
    for idx, row in enumerate(rows):
        groups.setdefault(_canonical_form(row), []).append(idx)
    return sorted(groups.values(), key=lambda g: g[0])


def build_codebook(m: int, count: int) -> CodebookReport:
    """Assign `count` unambiguous patterns of length `m` to RIS ids 1..count.

    The all-ones Hadamard row is excluded (it carries no modulation and is
    annihilated by zero-centering); each assigned code is the lowest-index row
    of a distinct cyclic-equivalence class.
    """
    if not _is_power_of_two(m) or m < 4:
        raise ValueError(f"code length must be a power of two >= 4, got {m}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    h = generate_hadamard(m)
    classes01 = cyclic_ambiguity_classes([h[i] for i in range(1, m)])
    classes = [[i + 1 for i in cls] for cls in classes01]  # absolute row indices
    if count > len(classes):
        raise CapacityError(
            f"cannot assign {count} codes of length {m}: only {len(classes)} "
            f"cyclic-equivalence classes exist among rows 1..{m - 1}"
        )
    codes = [ArpCode(ris_id=i + 1, symbols=h[cls[0]]) for i, cls in enumerate(classes[:count])]
    peak = 0.0
    for i in range(len(codes)):
        for j in range(i + 1, len(codes)):
            c = max_cyclic_crosscorr(codes[i].symbols, codes[j].symbols)
            if c > peak:
                peak = c
    return CodebookReport(codes=codes, max_pairwise_cyclic_corr=peak, ambiguity_classes=classes)


def assign_codes(m: int, code_rows: Sequence[Optional[int]]) -> List[ArpCode]:
    """Build one code per RIS, honoring explicit Hadamard row overrides.

    Entries of `code_rows` are either a row index in [1, m-1] or None for the
    default pick (next unused class representative, lowest row index first).
    """
    if not _is_power_of_two(m) or m < 4:
        raise ValueError(f"code length must be a power of two >= 4, got {m}")
    h = generate_hadamard(m)
    classes01 = cyclic_ambiguity_classes([h[i] for i in range(1, m)])
    classes = [[i + 1 for i in cls] for cls in classes01]
    row_to_class = {row: ci for ci, cls in enumerate(classes) for row in cls}

    used = set()
    for row in code_rows:
        if row is None:
            continue
        if not 1 <= row <= m - 1:
            raise ValueError(f"code_row must be in [1, {m - 1}], got {row}")
        used.add(row_to_class[row])

    codes: List[ArpCode] = []
    free = iter(ci for ci in range(len(classes)) if ci not in used)
    for i, row in enumerate(code_rows):
        if row is None:
            try:
                ci = next(free)
            except StopIteration:
                raise CapacityError(
                    f"cannot assign {len(code_rows)} codes of length {m}: only "
                    f"{len(classes)} cyclic-equivalence classes exist"
                ) from None
            row = classes[ci][0]
        codes.append(ArpCode(ris_id=i + 1, symbols=h[row]))
    return codes
