"""Morse numbers of rel-critical points, Morse inequalities and Weyl fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InsufficientDataError
from .model_complexes import Ibc
from .space_model import CriticalPointModel
from .spectra import AssembledSpectrum

MIN_FIT_EIGENVALUES = 16


def _plus_admits(r: int, n: int, ibc: Ibc) -> bool:
    # r_+ <= n/2 - 1 (n even); (n-3)/2 Min or (n-1)/2 Max (n odd)
    if n % 2 == 0:
        return 2 * r <= n - 2
    return 2 * r <= (n - 3 if ibc is Ibc.MIN else n - 1)


def _minus_admits(r: int, n: int, ibc: Ibc) -> bool:
    # r_- >= n/2 (n even); (n-1)/2 Min or (n+1)/2 Max (n odd)
    if n % 2 == 0:
        return 2 * r >= n
    return 2 * r >= (n - 1 if ibc is Ibc.MIN else n + 1)


def nu_point(cp: CriticalPointModel, ibc: Ibc) -> list[int]:
    """Morse numbers ``nu^r`` of one critical point, degrees ``0..dim``.

    Enumerates the admissible pairs ``(r_+, r_-)`` of link degrees directly;
    a vertex factor contributes no link degree.
    """
    ibc = Ibc.parse(ibc)
    nu = [0] * (cp.dim + 1)
    mm = cp.m_minus
    P, M = cp.plus, cp.minus
    if P is None and M is None:
        nu[mm] = 1
        return nu
    plus_terms = [(0, 1)] if P is None else [
        (r, b) for r, b in enumerate(P.betti(ibc)) if _plus_admits(r, P.n, ibc)
    ]
    minus_terms = [(-1, 1)] if M is None else [
        (r, b) for r, b in enumerate(M.betti(ibc)) if _minus_admits(r, M.n, ibc)
    ]
    # with a vertex on the minus side the shift r_- + 1 collapses to 0
    for rp, bp in plus_terms:
        for rm, bm in minus_terms:
            nu[mm + rp + rm + 1] += bp * bm
    return nu


def nu_total(points: Sequence[CriticalPointModel], ibc: Ibc) -> list[int]:
    """Sum of :func:`nu_point` over critical points, zero-padded."""
    vecs = [nu_point(cp, ibc) for cp in points]
    L = max((len(v) for v in vecs), default=1)
    return [sum(v[r] for v in vecs if r < len(v)) for r in range(L)]


@dataclass
class MorseReport:
    """Outcome of the Morse inequalities and the Euler identity."""

    partial_sums: list = field(default_factory=list)
    euler_lhs: int = 0
    euler_rhs: int = 0
    euler_holds: bool = True

    @property
    def inequalities_hold(self) -> bool:
        return all(h for *_, h in self.partial_sums)

    @property
    def all_hold(self) -> bool:
        return self.inequalities_hold and self.euler_holds

    def to_dict(self) -> dict:
        return {
            "partial_sums": [
                {"degree": r, "lhs": lhs, "rhs": rhs, "holds": h} for r, lhs, rhs, h in self.partial_sums
            ],
            "euler": {"lhs": self.euler_lhs, "rhs": self.euler_rhs, "holds": self.euler_holds},
            "all_hold": self.all_hold,
        }

    def table(self) -> str:
        rows = [f"{'r':>3}  {'beta-sum':>9}  {'nu-sum':>7}  holds"]
        for r, lhs, rhs, h in self.partial_sums:
            rows.append(f"{r:>3}  {lhs:>9}  {rhs:>7}  {'yes' if h else 'NO'}")
        eq = "=" if self.euler_holds else "!="
        rows.append(f"chi: {self.euler_lhs} {eq} {self.euler_rhs}")
        return "\n".join(rows) + "\n"


def morse_check(beta: Sequence[int], nu: Sequence[int]) -> MorseReport:
    """Check ``sum_{j<=r} (-1)^{r-j} beta^j <= sum_{j<=r} (-1)^{r-j} nu^j``
    for every ``r`` and the Euler identity ``sum (-1)^r beta^r = sum (-1)^r nu^r``.
    """
    L = max(len(beta), len(nu))
    b = list(beta) + [0] * (L - len(beta))
    v = list(nu) + [0] * (L - len(nu))
    report = MorseReport()
    sb = sv = 0
    for r in range(L):
        sb = b[r] - sb
        sv = v[r] - sv
        report.partial_sums.append((r, sb, sv, sb <= sv))
    report.euler_lhs = sum((-1) ** r * x for r, x in enumerate(b))
    report.euler_rhs = sum((-1) ** r * x for r, x in enumerate(v))
    report.euler_holds = report.euler_lhs == report.euler_rhs
    return report


def counting_function(spectrum: AssembledSpectrum, lam: float) -> int:
    """Number of eigenvalues ``< lam`` over all degrees, with multiplicity."""
    return sum(m for rows in spectrum.per_degree.values() for v, m in rows if v < lam)


class WeylFit(NamedTuple):
    theta_hat: float
    c_hat: float
    slope: float
    points: int


def weyl_fit(spectrum: AssembledSpectrum) -> WeylFit:
    """Estimate the Weyl exponent from the counting function.

    Fits ``log N(lambda)`` against ``log lambda`` at the eigenvalue jumps in
    the top half of the cutoff window; ``theta_hat = 1/slope`` and
    ``c_hat = min lambda_k k^{-theta_hat}`` over the same window.

    Raises
    ------
    InsufficientDataError
        With fewer than 16 eigenvalues or fewer than two jumps in the window.
    """
    vals = spectrum.all_values()
    if vals.size < MIN_FIT_EIGENVALUES:
        raise InsufficientDataError(f"need at least {MIN_FIT_EIGENVALUES} eigenvalues, got {vals.size}")
    top = spectrum.cutoff * spectrum.s
    lo = top / 2
    jumps = np.unique(vals[(vals >= lo) & (vals > 0)])
    if jumps.size < 2:
        raise InsufficientDataError("fewer than two eigenvalue jumps in the fit window")
    counts = np.searchsorted(vals, jumps, side="right")
    slope, _ = np.polyfit(np.log(jumps), np.log(counts), 1)
    theta = 1.0 / slope
    k = np.arange(1, vals.size + 1)
    window = (vals >= lo) & (vals > 0)
    c_hat = float(np.min(vals[window] * k[window] ** (-theta)))
    if not math.isfinite(c_hat):
        raise InsufficientDataError("degenerate fit")
    return WeylFit(float(theta), c_hat, float(slope), int(jumps.size))
