"""Closed-form spectra of the Witten Laplacian on a cone stratum ``N x R_+``.

The perturbed Laplacian splits over the spectral data of the link ``N``
(dimension ``n - 1``):

* a harmonic class in degree ``r`` spans a length-one complex in degrees
  ``r, r+1`` with ``kappa = (n - 2r - 1)/2`` (types 1 and 2);
* an eigenpair ``d~beta = mu alpha`` with ``alpha`` of degree ``r`` spans a
  length-two complex in degrees ``r-1, r, r+1`` (types 3, 4 and the 2x2
  block of type 5, diagonalized into ``X`` and ``Y``).

With ``S = sqrt((n-2r)^2 + 4 mu^2)`` and upper signs for ``Sign.PLUS``::

    type 3 (degree r-1):  (4k + 2 + S ∓ (n-2r+2)) s
    type 4 (degree r+1):  (4k + 2 + S ∓ (n-2r-2)) s
    X      (degree r):    (4k + S ∓ (n-2r)) s
    Y      (degree r):    (4k + 4 + S ∓ (n-2r)) s
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegreeRangeError
from .model_complexes import Ibc, Sign, classify_length_one, length_one_blocks
from .spectra import AssembledSpectrum, EigLadder, assemble_ladders, ladder_expr, sqrt_base

# type-1/2 provenance: (core, degree within the pair) -> tag
_T12_TAGS = {("E1", 0): "T12a0", ("E2", 0): "T12aTop", ("E1", 1): "T12a1", ("E2", 1): "T12aSide"}


@dataclass(frozen=True)
class LinkPair:
    """Eigenpair data ``d~beta = mu alpha`` with ``alpha`` in degree ``r``."""

    mu: float
    r: int
    mult: int = 1

    def __post_init__(self):
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.mult < 1:
            raise ValueError("pair multiplicity must be positive")


@dataclass(frozen=True)
class LinkSpectrum:
    """Spectral data of a compact link stratum.

    Parameters
    ----------
    n_link : int
        Dimension of the link.
    harmonic_min, harmonic_max : sequence of int
        Harmonic dimensions per degree ``0..n_link``.
    pairs : sequence of LinkPair
    mu_max : float, optional
        When given, every pair with ``mu <= mu_max`` is listed.  Used to
        refuse cutoffs that would need pairs beyond the data.
    """

    n_link: int
    harmonic_min: tuple
    harmonic_max: tuple
    pairs: tuple = ()
    mu_max: float | None = None
    source: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "harmonic_min", tuple(int(x) for x in self.harmonic_min))
        object.__setattr__(self, "harmonic_max", tuple(int(x) for x in self.harmonic_max))
        object.__setattr__(
            self, "pairs", tuple(p if isinstance(p, LinkPair) else LinkPair(*p) for p in self.pairs)
        )
        if self.n_link < 0:
            raise ValueError("n_link must be nonnegative")
        for name in ("harmonic_min", "harmonic_max"):
            vec = getattr(self, name)
            if len(vec) != self.n_link + 1 or min(vec) < 0:
                raise ValueError(f"{name} must hold {self.n_link + 1} nonnegative entries")
        for p in self.pairs:
            if not 1 <= p.r <= self.n_link:
                raise DegreeRangeError(f"pair degree r={p.r} outside 1..{self.n_link}")

    def harmonic(self, ibc: Ibc) -> tuple:
        return self.harmonic_min if Ibc.parse(ibc) is Ibc.MIN else self.harmonic_max


def type12_core(r: int, n: int, ibc: Ibc) -> str:
    """Core (E1 or E2) selected for a harmonic class of degree ``r``."""
    return classify_length_one((n - 2 * r - 1) / 2).core(ibc)


def type12_ladders(r: int, gamma_count: int, n: int, sign: Sign, ibc: Ibc) -> list[EigLadder]:
    """Ladders in degrees ``r`` and ``r+1`` from ``gamma_count`` harmonic classes.

    The class spans a length-one complex with ``kappa = (n - 2r - 1)/2``;
    Min/Max choose its core, and for ``|kappa| >= 1/2`` the core is unique.

    Examples
    --------
    >>> [l.base for l in type12_ladders(0, 1, 1, Sign.PLUS, Ibc.MAX)]
    [0.0, 4.0]
    """
    if not 0 <= r <= n - 1:
        raise DegreeRangeError(f"harmonic degree r={r} outside 0..{n - 1}")
    if gamma_count < 0:
        raise ValueError("gamma_count must be nonnegative")
    if gamma_count == 0:
        return []
    kappa = (n - 2 * r - 1) / 2
    core = type12_core(r, n, ibc)
    out = []
    for j, (c2, a, shift) in enumerate(length_one_blocks(kappa, sign, core)):
        # P-ladder with c1 = 0: (4k + 1 + 2a) + shift; all terms integers here
        base = 1.0 + 2.0 * a + shift
        out.append(EigLadder(base, r + j, gamma_count, _T12_TAGS[(core, j)]))
    return out


def theta_constants(n: int, r: int, mu: float) -> tuple[float, float, float]:
    """Constants ``(c, a, b)`` of the diagonalizing matrix for a pair block.

    ``c = c_+`` is the positive root of ``mu c^2 + (n-2r) c - mu = 0``,
    ``a = c mu`` and ``b = a + 2``.  Both are evaluated without cancellation.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    D = n - 2 * r
    S = math.hypot(D, 2.0 * mu)
    if D > 0:
        a = 2.0 * mu * mu / (D + S)
    else:
        a = (S - D) / 2.0
    c = a / mu
    return c, a, a + 2.0


def pair_radicand(n: int, r: int, mu: float) -> float:
    D = n - 2 * r
    return D * D + 4.0 * mu * mu


def type345_ladders(mu: float, r: int, mult: int, n: int, sign: Sign) -> list[EigLadder]:
    """Four ladders of one eigenpair: type 3, type 4, and ``X``, ``Y`` of type 5.

    Returned in the order ``[T3 (r-1), T4 (r+1), T5X (r), T5Y (r)]``.
    """
    if not 1 <= r <= n - 1:
        raise DegreeRangeError(f"pair degree r={r} outside 1..{n - 1}")
    if not mu > 0:
        raise ValueError("mu must be positive")
    eps = Sign.parse(sign).value
    D = n - 2 * r
    rad = pair_radicand(n, r, mu)
    spec = [
        (r - 1, 2 - eps * (D + 2), "T3"),
        (r + 1, 2 - eps * (D - 2), "T4"),
        (r, -eps * D, "T5X"),
        (r, 4 - eps * D, "T5Y"),
    ]
    return [
        EigLadder(sqrt_base(off, rad), deg, mult, tag, ladder_expr(off, rad))
        for deg, off, tag in spec
    ]


def pair_partner(tag: str, sign: Sign) -> str:
    """Type-5 branch sharing its spectrum with a type-3 or type-4 ladder.

    For ``Sign.PLUS`` type 3 pairs with ``X`` and type 4 with ``Y``; the roles
    swap for ``Sign.MINUS``.
    """
    plus = {"T3": "T5X", "T4": "T5Y"}
    minus = {"T3": "T5Y", "T4": "T5X"}
    return (plus if Sign.parse(sign) is Sign.PLUS else minus)[tag]


def _check_completeness(link: LinkSpectrum, n: int, cutoff: float):
    if link.mu_max is None or not link.pairs and link.n_link == 0:
        return
    # smallest base any unlisted pair could have: S - |n - 2r| over r
    worst = min(
        math.sqrt(pair_radicand(n, r, link.mu_max)) - abs(n - 2 * r) for r in range(1, n)
    ) if n > 1 else math.inf
    if worst < cutoff:
        warnings.warn(
            f"cutoff {cutoff} exceeds the range covered by link data (mu_max={link.mu_max}); "
            "the spectrum may be incomplete",
            RuntimeWarning,
            stacklevel=3,
        )


def cone_ladders(link: LinkSpectrum, sign: Sign, ibc: Ibc) -> list[EigLadder]:
    """All ladders of the cone over ``link``."""
    n = link.n_link + 1
    out = []
    for r, g in enumerate(link.harmonic(ibc)):
        out.extend(type12_ladders(r, g, n, sign, ibc))
    for p in link.pairs:
        out.extend(type345_ladders(p.mu, p.r, p.mult, n, sign))
    return out


def assemble_cone_spectrum(
    link: LinkSpectrum, sign: Sign, ibc: Ibc, s: float, cutoff: float
) -> AssembledSpectrum:
    """Spectrum of the perturbed Laplacian on the cone over ``link``.

    Parameters
    ----------
    link : LinkSpectrum
    sign : Sign
    ibc : Ibc
    s : float
        Deformation parameter.
    cutoff : float
        Strict eigenvalue bound in units of ``s``.

    Returns
    -------
    AssembledSpectrum
        Degrees ``0..n`` with ``n = link.n_link + 1``.
    """
    n = link.n_link + 1
    _check_completeness(link, n, cutoff)
    return assemble_ladders(cone_ladders(link, Sign.parse(sign), Ibc.parse(ibc)), s, cutoff, n)


def cone_kernel_dims(link_betti: Sequence[int], n: int, sign: Sign, ibc: Ibc) -> list[int]:
    """Kernel dimensions of the perturbed cone complex, degrees ``0..n``.

    Plus keeps ``beta^r`` of the link in degree ``r`` for low ``r``; Minus moves
    ``beta^r`` to degree ``r+1`` for high ``r``.  The thresholds depend on the
    parity of ``n`` and, for odd ``n``, on the i.b.c.
    """
    if len(link_betti) != n:
        raise ValueError(f"link Betti vector must have length n={n}")
    sign, ibc = Sign.parse(sign), Ibc.parse(ibc)
    dims = [0] * (n + 1)
    odd = n % 2 == 1
    for r, b in enumerate(link_betti):
        # compare doubled degrees to stay in integers
        if sign is Sign.PLUS:
            limit = n - 2 if not odd else (n - 3 if ibc is Ibc.MIN else n - 1)
            if 2 * r <= limit:
                dims[r] += b
        else:
            limit = n if not odd else (n - 1 if ibc is Ibc.MIN else n + 1)
            if 2 * r >= limit:
                dims[r + 1] += b
    return dims
