"""The two one-dimensional model elliptic complexes on the half line.

Length one::

    0 -> C^inf -> C^inf -> 0,    d = d/drho - kappa/rho ± s rho

with Laplacians ``Delta_0 = H + kappa(kappa-1)/rho^2 ∓ s(1+2kappa)`` and
``Delta_1 = H + kappa(kappa+1)/rho^2 ± s(1-2kappa)``.

Length two (``kappa != -1/2``, ``c > 0``, ``q = (1-c^2)/(1+c^2)``)::

    Delta_0    = H + kappa(kappa+1)/rho^2 ∓ s(2 + q(1+2kappa))
    Delta_{11} = H + kappa(kappa-1)/rho^2 ∓ s q(1+2kappa)
    Delta_{12} = H + (kappa+1)(kappa+2)/rho^2 ∓ s q(1+2kappa)
    Delta_2    = H + kappa(kappa+1)/rho^2 ± s(2 - q(1+2kappa))

Every block is ``P`` with ``c1 = 0`` plus a constant, so each core yields one
ladder ``(4k + 1 + 2a) s + shift``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InadmissibleDomainError
from .hermite import PParams, p_eigenvalue
from .spectra import AssembledSpectrum, EigLadder, assemble_ladders


class Sign(enum.Enum):
    """Sign of the model function ``±rho^2/2``."""

    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, text) -> "Sign":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        if key in ("plus", "+", "+1", "1"):
            return cls.PLUS
        if key in ("minus", "-", "-1"):
            return cls.MINUS
        raise ValueError(f"unknown sign {text!r}")

    def __str__(self):
        return self.name.lower()


class Ibc(enum.Enum):
    """Minimum or maximum ideal boundary condition."""

    MIN = "min"
    MAX = "max"

    @classmethod
    def parse(cls, text) -> "Ibc":
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise ValueError(f"unknown ibc {text!r}") from None

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class DomainClass:
    """Classification of the ideal boundary conditions of a model complex.

    ``kind`` is ``"UniqueIbc"`` or ``"MinMaxDistinct"``; core tags are among
    ``E1, E2, F1, F2``.
    """

    kind: str
    core_min: str
    core_max: str

    def __post_init__(self):
        if self.kind not in ("UniqueIbc", "MinMaxDistinct"):
            raise ValueError(self.kind)
        if self.kind == "UniqueIbc" and self.core_min != self.core_max:
            raise ValueError("a unique i.b.c. has a single core")

    def core(self, ibc: Ibc) -> str:
        return self.core_min if Ibc.parse(ibc) is Ibc.MIN else self.core_max


def classify_length_one(kappa: float) -> DomainClass:
    """Ideal boundary conditions of the length-one complex.

    ``|kappa| < 1/2`` gives distinct Min (core E2) and Max (core E1); the
    boundary values ``±1/2`` belong to the unique cases.
    """
    if kappa >= 0.5:
        return DomainClass("UniqueIbc", "E1", "E1")
    if kappa <= -0.5:
        return DomainClass("UniqueIbc", "E2", "E2")
    return DomainClass("MinMaxDistinct", "E2", "E1")


# boundary exponents a of each core, per degree
def _length_one_exponents(core: str, kappa: float) -> tuple[float, float]:
    if core == "E1":
        return kappa, 1.0 + kappa
    return 1.0 - kappa, -kappa


def length_one_blocks(kappa: float, sign: Sign, core: str):
    """Scalar blocks ``(c2, a, shift/s)`` of the length-one Laplacian per degree."""
    eps = Sign.parse(sign).value
    a0, a1 = _length_one_exponents(core, kappa)
    return [
        (kappa * (kappa - 1.0), a0, -eps * (1.0 + 2.0 * kappa)),
        (kappa * (kappa + 1.0), a1, eps * (1.0 - 2.0 * kappa)),
    ]


def _block_base(c2: float, a: float, shift: float) -> float:
    try:
        params = PParams(s=1.0, c1=0.0, c2=c2, a=a)
    except InadmissibleDomainError as exc:
        raise InadmissibleDomainError(f"core exponent a={a} is inadmissible: {exc}") from None
    return p_eigenvalue(0, params) + shift


def length_one_ladders(kappa: float, sign: Sign, ibc: Ibc, degree_offset: int = 0, mult: int = 1):
    """The two ladders of the length-one complex for the selected core."""
    core = classify_length_one(kappa).core(ibc)
    out = []
    for deg, (c2, a, shift) in enumerate(length_one_blocks(kappa, sign, core)):
        base = _block_base(c2, a, shift)
        out.append(EigLadder(base, degree_offset + deg, mult, f"{core}.{deg}"))
    return out


def spectrum_length_one(
    kappa: float, s: float, sign: Sign, ibc: Ibc, cutoff: float
) -> AssembledSpectrum:
    """Spectrum of the length-one complex in degrees 0 and 1.

    Parameters
    ----------
    kappa : float
    s : float
        Deformation parameter, positive.
    sign : Sign
    ibc : Ibc
        Ignored in the unique-i.b.c. range ``|kappa| >= 1/2``.
    cutoff : float
        Strict bound on eigenvalues, in units of ``s``.
    """
    return assemble_ladders(length_one_ladders(kappa, sign, ibc), s, cutoff, 1)


def length_two_blocks(kappa: float, c: float, sign: Sign):
    """Scalar blocks ``(degree, c2, a, shift/s, tag)`` of the length-two Laplacian."""
    if kappa == -0.5:
        raise InadmissibleDomainError("kappa = -1/2 is excluded for the length-two complex")
    if not c > 0:
        raise ValueError("c must be positive")
    eps = Sign.parse(sign).value
    q = (1.0 - c * c) / (1.0 + c * c)
    t = q * (1.0 + 2.0 * kappa)
    k0 = kappa * (kappa + 1.0)
    if kappa > -0.5:
        core, a = "F1", (1.0 + kappa, kappa, 2.0 + kappa, 1.0 + kappa)
    else:
        core, a = "F2", (-kappa, 1.0 - kappa, -1.0 - kappa, -kappa)
    return [
        (0, k0, a[0], -eps * (2.0 + t), f"{core}.0"),
        (1, kappa * (kappa - 1.0), a[1], -eps * t, f"{core}.11"),
        (1, (kappa + 1.0) * (kappa + 2.0), a[2], -eps * t, f"{core}.12"),
        (2, k0, a[3], eps * (2.0 - t), f"{core}.2"),
    ]


def spectrum_length_two(
    kappa: float, c: float, s: float, sign: Sign, cutoff: float
) -> AssembledSpectrum:
    """Spectrum of the length-two complex in degrees 0, 1 and 2.

    Uses the F1 core for ``kappa > -1/2`` and F2 for ``kappa < -1/2``; the
    complex has a unique i.b.c. in both ranges.
    """
    ladders = [
        EigLadder(_block_base(c2, a, shift), deg, 1, tag)
        for deg, c2, a, shift, tag in length_two_blocks(kappa, c, sign)
    ]
    return assemble_ladders(ladders, s, cutoff, 2)
