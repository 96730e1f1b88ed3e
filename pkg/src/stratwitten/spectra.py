"""Eigenvalue ladders and their truncated per-degree assembly.

Every closed-form spectrum in the package is a finite union of arithmetic
progressions ``(base + 4k) * s``.  Values are stored in units of ``s`` while
merging so that scaling ``s`` never perturbs the multiset structure, and the
cutoff is likewise a multiple of ``s``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

# relative tolerance used when merging numerically equal eigenvalues
MERGE_RTOL = 1e-9


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def sqrt_base(offset: int | float, radicand: float) -> float:
    """Return ``offset + sqrt(radicand)``.

    All ladders whose base carries a square root go through this single
    expression, so two ladders that agree symbolically agree bit for bit.
    Roots within rounding of an integer are snapped to it.
    """
    root = math.sqrt(radicand)
    if abs(root - round(root)) <= 1e-12 * max(1.0, root):
        root = float(round(root))
    return float(offset) + root


def below_cutoff(value: float, cutoff: float) -> bool:
    """Strict ``value < cutoff`` with values within rounding of the cutoff treated as ties."""
    return value < cutoff and not _close(value, cutoff)


@dataclass(frozen=True)
class EigLadder:
    """Arithmetic family ``(base + 4k) s`` for ``k >= 0`` in one form degree.

    Parameters
    ----------
    base : float
        Lowest eigenvalue divided by ``s``.
    degree : int
        Form degree the family lives in.
    mult : int
        Multiplicity of every member.
    provenance : str
        Branch tag, e.g. ``"T12a0"`` or ``"T5X"``.
    expr : str
        Symbolic form of the ladder such as ``"4k+2+sqrt(8)"``.
    """

    base: float
    degree: int
    mult: int
    provenance: str
    expr: str = ""

    def __post_init__(self):
        if self.mult < 1:
            raise ValueError("ladder multiplicity must be positive")
        if not math.isfinite(self.base):
            raise ValueError("ladder base must be finite")
        if not self.expr:
            object.__setattr__(self, "expr", ladder_expr(self.base))

    def count_below(self, cutoff: float) -> int:
        """Number of members with ``base + 4k < cutoff`` (ties excluded)."""
        if not below_cutoff(self.base, cutoff):
            return 0
        n = math.ceil((cutoff - self.base) / 4.0)
        # guard the ceil against rounding right at a tie
        while n > 0 and not below_cutoff(self.base + 4.0 * (n - 1), cutoff):
            n -= 1
        return n

    def values(self, cutoff: float) -> np.ndarray:
        """Members below ``cutoff``, in units of ``s``."""
        return self.base + 4.0 * np.arange(self.count_below(cutoff))


def ladder_expr(offset: float, radicand: float | None = None) -> str:
    """Symbolic label ``4k+offset[+sqrt(radicand)]`` for a ladder."""
    out = "4k"
    if offset != 0 or radicand is None:
        out += f"{'+' if offset >= 0 else '-'}{_fmt(abs(offset))}"
    if radicand is not None:
        out += f"+sqrt({_fmt(radicand)})"
    return out


@dataclass
class AssembledSpectrum:
    """Truncated per-degree spectrum with merged multiplicities.

    Attributes
    ----------
    s : float
        Deformation parameter.
    per_degree : dict
        Degree to ascending list of ``(eigenvalue, multiplicity)``.
    kernel_dims : list of int
        Multiplicity of the eigenvalue 0 in each degree.
    cutoff : float
        Strict upper bound in units of ``s``.
    branches : dict
        Degree to a list, parallel to ``per_degree``, of the branch tags that
        contributed each eigenvalue.
    ladders : tuple of EigLadder
        Source ladders, kept for audit output.
    """

    s: float
    per_degree: dict
    kernel_dims: list
    cutoff: float
    branches: dict = field(default_factory=dict)
    ladders: tuple = ()

    @property
    def top_degree(self) -> int:
        return len(self.kernel_dims) - 1

    def values(self, degree: int) -> np.ndarray:
        """Eigenvalues in ``degree`` repeated by multiplicity."""
        entries = self.per_degree.get(degree, [])
        if not entries:
            return np.empty(0)
        return np.repeat([v for v, _ in entries], [m for _, m in entries])

    def all_values(self) -> np.ndarray:
        """Eigenvalues of every degree, repeated and sorted."""
        parts = [self.values(d) for d in sorted(self.per_degree)]
        if not parts:
            return np.empty(0)
        return np.sort(np.concatenate(parts))

    def total_count(self) -> int:
        return sum(m for d in self.per_degree.values() for _, m in d)

    def scaled(self) -> dict:
        """Per-degree lists in units of ``s``."""
        return {d: [(v / self.s, m) for v, m in e] for d, e in self.per_degree.items()}

    def same_multisets(self, other: "AssembledSpectrum", rtol: float = MERGE_RTOL) -> bool:
        """Degreewise multiset equality up to ``rtol``."""
        degrees = set(self.per_degree) | set(other.per_degree)
        for d in degrees:
            a, b = self.per_degree.get(d, []), other.per_degree.get(d, [])
            if len(a) != len(b):
                return False
            for (va, ma), (vb, mb) in zip(a, b):
                if ma != mb or not _close(va, vb, rtol):
                    return False
        return True


def _close(a: float, b: float, rtol: float = MERGE_RTOL) -> bool:
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


def merge_entries(entries: Iterable[tuple], rtol: float = MERGE_RTOL):
    """Merge ``(value, mult, tags)`` triples whose values agree to ``rtol``.

    Returns two parallel lists: ``[(value, mult)]`` and ``[tags]`` with tags a
    sorted tuple of unique branch names.
    """
    rows = sorted(entries, key=lambda t: t[0])
    merged: list = []
    tags: list = []
    for v, m, t in rows:
        if merged and _close(merged[-1][0], v, rtol):
            pv, pm = merged[-1]
            merged[-1] = (pv, pm + m)
            tags[-1] = tags[-1] | set(t)
        else:
            merged.append((0.0 if abs(v) <= rtol else float(v), int(m)))
            tags.append(set(t))
    return merged, [tuple(sorted(t)) for t in tags]


def spectrum_from_entries(
    s: float,
    cutoff: float,
    entries: Mapping[int, Sequence[tuple]],
    top_degree: int,
    ladders: Sequence[EigLadder] = (),
) -> AssembledSpectrum:
    """Build an :class:`AssembledSpectrum` from raw ``(value/s, mult, tags)``.

    ``entries`` holds values in units of ``s``; they are merged, scaled by
    ``s`` and the kernel is read off.
    """
    per_degree, branches = {}, {}
    kernel = [0] * (top_degree + 1)
    for d in range(top_degree + 1):
        merged, tags = merge_entries(entries.get(d, ()))
        per_degree[d] = [(v * s, m) for v, m in merged]
        branches[d] = tags
        if merged and merged[0][0] == 0.0:
            kernel[d] = merged[0][1]
    extra = set(entries) - set(range(top_degree + 1))
    if extra:
        raise ValueError(f"entries outside degrees 0..{top_degree}: {sorted(extra)}")
    return AssembledSpectrum(
        s=float(s),
        per_degree=per_degree,
        kernel_dims=kernel,
        cutoff=float(cutoff),
        branches=branches,
        ladders=tuple(ladders),
    )


def assemble_ladders(
    ladders: Sequence[EigLadder], s: float, cutoff: float, top_degree: int
) -> AssembledSpectrum:
    """Truncate each ladder at ``cutoff`` (units of ``s``) and merge by degree."""
    if not s > 0:
        raise ValueError("s must be positive")
    entries = defaultdict(list)
    for lad in ladders:
        if not 0 <= lad.degree <= top_degree:
            raise ValueError(f"ladder degree {lad.degree} outside 0..{top_degree}")
        for v in lad.values(cutoff):
            entries[lad.degree].append((float(v), lad.mult, (lad.provenance,)))
    return spectrum_from_entries(s, cutoff, entries, top_degree, ladders)
