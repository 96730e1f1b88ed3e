"""Descriptor trees for small stratified spaces and their local models.

A descriptor is one of :class:`ClosedManifold`, :class:`CompactStratum`,
:class:`ConeStratum`, :class:`VertexStratum`, :class:`EuclideanFactor` or
:class:`Product`.  Kernel dimensions recurse through any depth; spectra recurse
one cone level above closed manifolds that carry spectral data.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .cone_spectrum import LinkSpectrum, assemble_cone_spectrum, cone_kernel_dims, type12_ladders
from .errors import MismatchedSError, MissingDataError
from .model_complexes import Ibc, Sign
from .spectra import AssembledSpectrum, assemble_ladders, below_cutoff, merge_entries, spectrum_from_entries

SpectrumTable = AssembledSpectrum


def _betti_vec(vec, dim, name):
    if vec is None:
        return None
    vec = tuple(int(x) for x in vec)
    if len(vec) != dim + 1 or min(vec) < 0:
        raise ValueError(f"{name} must hold {dim + 1} nonnegative entries")
    return vec


@dataclass(frozen=True)
class ClosedManifold:
    """Closed manifold leaf; min and max Betti numbers coincide."""

    dim: int
    betti_min: tuple | None = None
    betti_max: tuple | None = None
    spectrum: LinkSpectrum | None = None

    def __post_init__(self):
        bmin = _betti_vec(self.betti_min, self.dim, "betti_min")
        bmax = _betti_vec(self.betti_max, self.dim, "betti_max")
        if bmin is None and self.spectrum is not None:
            bmin = self.spectrum.harmonic_min
        if bmax is None:
            bmax = bmin
        if bmin is None:
            bmin = bmax
        if bmin != bmax:
            raise ValueError("a closed manifold has equal min and max Betti numbers")
        object.__setattr__(self, "betti_min", bmin)
        object.__setattr__(self, "betti_max", bmax)
        if self.spectrum is not None and self.spectrum.n_link != self.dim:
            raise ValueError("spectral data dimension does not match the manifold")


@dataclass(frozen=True)
class CompactStratum:
    """Compact stratum known only through its min and max Betti numbers."""

    dim: int
    betti_min: tuple
    betti_max: tuple

    def __post_init__(self):
        object.__setattr__(self, "betti_min", _betti_vec(self.betti_min, self.dim, "betti_min"))
        object.__setattr__(self, "betti_max", _betti_vec(self.betti_max, self.dim, "betti_max"))


@dataclass(frozen=True)
class ConeStratum:
    """The stratum ``link x R_+`` of a cone; ``sign`` overrides the inherited one."""

    link: "StratumDesc"
    sign: Sign | None = None


@dataclass(frozen=True)
class VertexStratum:
    """Cone vertex, a point."""

    link_dim: int = 0


@dataclass(frozen=True)
class EuclideanFactor:
    m: int
    sign: Sign | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("Euclidean factor dimension must be positive")


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) < 2:
            raise ValueError("a product needs at least two factors")


StratumDesc = Union[ClosedManifold, CompactStratum, ConeStratum, VertexStratum, EuclideanFactor, Product]


def dimension(desc: StratumDesc) -> int:
    """Dimension of the stratum described by ``desc``."""
    if isinstance(desc, (ClosedManifold, CompactStratum)):
        return desc.dim
    if isinstance(desc, ConeStratum):
        return dimension(desc.link) + 1
    if isinstance(desc, VertexStratum):
        return 0
    if isinstance(desc, EuclideanFactor):
        return desc.m
    if isinstance(desc, Product):
        return sum(dimension(f) for f in desc.factors)
    raise TypeError(f"not a stratum descriptor: {desc!r}")


def convolve(vectors: Sequence[Sequence[int]]) -> list[int]:
    """Degreewise (Künneth) convolution of integer vectors."""
    out = np.array([1], dtype=np.int64)
    for v in vectors:
        out = np.convolve(out, np.asarray(v, dtype=np.int64))
    return [int(x) for x in out]


def betti(desc: StratumDesc, ibc: Ibc, sign: Sign = Sign.PLUS) -> list[int]:
    """Min or max Betti numbers, or perturbed-model kernel dimensions.

    Closed and compact leaves return their data.  A cone stratum returns the
    kernel dimensions of its perturbed model (the link itself is compact, so
    its own numbers are computed with ``Sign.PLUS``).  Euclidean factors give
    ``delta_{r,0}`` for Plus and ``delta_{r,m}`` for Minus, and products
    convolve.

    Raises
    ------
    MissingDataError
        If a leaf lacks the requested Betti vector.
    """
    ibc, sign = Ibc.parse(ibc), Sign.parse(sign)
    if isinstance(desc, (ClosedManifold, CompactStratum)):
        vec = desc.betti_min if ibc is Ibc.MIN else desc.betti_max
        if vec is None:
            raise MissingDataError(f"no {ibc} Betti numbers for a {type(desc).__name__} leaf")
        return list(vec)
    if isinstance(desc, ConeStratum):
        link_b = betti(desc.link, ibc, Sign.PLUS)
        n = dimension(desc.link) + 1
        return cone_kernel_dims(link_b, n, desc.sign or sign, ibc)
    if isinstance(desc, VertexStratum):
        return [1]
    if isinstance(desc, EuclideanFactor):
        vec = [0] * (desc.m + 1)
        vec[0 if (desc.sign or sign) is Sign.PLUS else desc.m] = 1
        return vec
    if isinstance(desc, Product):
        return convolve([betti(f, ibc, sign) for f in desc.factors])
    raise TypeError(f"not a stratum descriptor: {desc!r}")


# -- spectra -----------------------------------------------------------------


def identity_table(s: float, cutoff: float) -> SpectrumTable:
    """Spectrum of a point: a single zero in degree 0 (if the cutoff allows)."""
    entries = {0: [(0.0, 1, ("point",))]} if cutoff > 0 else {}
    return spectrum_from_entries(s, cutoff, entries, 0)


def tensor_spectrum(tables: Sequence[SpectrumTable], cutoff: float) -> SpectrumTable:
    """Spectrum of a product from the spectra of its factors.

    Degrees add, eigenvalues add and multiplicities multiply; the result is
    truncated at ``cutoff`` (units of ``s``).

    Raises
    ------
    MismatchedSError
        If the tables were built with different ``s``.
    """
    if not tables:
        raise ValueError("need at least one table")
    s = tables[0].s
    if any(t.s != s for t in tables):
        raise MismatchedSError(f"tables use different s: {sorted({t.s for t in tables})}")
    acc = {0: [(0.0, 1, ())]}
    top = 0
    for t in tables:
        nxt = defaultdict(list)
        for d1, rows in acc.items():
            for d2, entries in t.per_degree.items():
                for v2, m2 in entries:
                    v2 = v2 / s
                    for v1, m1, _ in rows:
                        v = v1 + v2
                        if below_cutoff(v, cutoff):
                            nxt[d1 + d2].append((v, m1 * m2, ("tensor",)))
        top += t.top_degree
        acc = {}
        for d, rows in nxt.items():
            merged, _ = merge_entries(rows)
            acc[d] = [(v, m, ("tensor",)) for v, m in merged]
    return spectrum_from_entries(s, cutoff, acc, top)


def closed_spectrum(desc: ClosedManifold, s: float, cutoff: float) -> SpectrumTable:
    """Hodge spectrum of a closed manifold from its spectral data.

    The Witten deformation does not act on a closed factor, so the values are
    the unperturbed ``0`` (harmonic) and ``mu^2`` (in degrees ``r-1`` and ``r``).
    """
    data = desc.spectrum
    if data is None:
        raise MissingDataError("closed manifold has no spectral data")
    if data.mu_max is not None and data.mu_max**2 < cutoff * s:
        warnings.warn("cutoff exceeds the range covered by the spectral data", RuntimeWarning, stacklevel=2)
    entries = defaultdict(list)
    for r, g in enumerate(data.harmonic_min):
        if g and cutoff > 0:
            entries[r].append((0.0, g, ("harmonic",)))
    for p in data.pairs:
        v = p.mu**2 / s
        if below_cutoff(v, cutoff):
            entries[p.r - 1].append((v, p.mult, ("exact",)))
            entries[p.r].append((v, p.mult, ("coexact",)))
    return spectrum_from_entries(s, cutoff, entries, desc.dim)


def euclidean_spectrum(
    m: int, sign: Sign, s: float, cutoff: float, sphere_data: LinkSpectrum | None = None
) -> SpectrumTable:
    """Witten spectrum of ``R^m`` with ``f = ±|x|^2/2``.

    For ``m >= 2`` this is the Max cone spectrum over ``S^{m-1}``.  For
    ``m = 1`` the line is the cone over two points, split into the even and
    odd combinations of the two components: the even class carries the Max
    (E1) core and the odd class the Min (E2) core.  This gives
    ``{2k s}`` in degree 0 and ``{(2k+2) s}`` in degree 1 for Plus, with a
    one-dimensional kernel.

    Raises
    ------
    MissingDataError
        If ``m >= 2`` and no sphere data is available.
    """
    sign = Sign.parse(sign)
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        ladders = type12_ladders(0, 1, 1, sign, Ibc.MAX) + type12_ladders(0, 1, 1, sign, Ibc.MIN)
        return assemble_ladders(ladders, s, cutoff, 1)
    if sphere_data is None:
        from .spheres import load_sphere

        sphere_data = load_sphere(m - 1)
    if sphere_data.n_link != m - 1:
        raise ValueError(f"sphere data has dimension {sphere_data.n_link}, expected {m - 1}")
    return assemble_cone_spectrum(sphere_data, sign, Ibc.MAX, s, cutoff)


def spectrum(desc: StratumDesc, sign: Sign, ibc: Ibc, s: float, cutoff: float) -> SpectrumTable:
    """Spectrum of the perturbed Laplacian on a descriptor.

    Supports closed leaves with spectral data, cones over such leaves,
    Euclidean factors, vertices and products of these.
    """
    sign, ibc = Sign.parse(sign), Ibc.parse(ibc)
    if isinstance(desc, ClosedManifold):
        return closed_spectrum(desc, s, cutoff)
    if isinstance(desc, ConeStratum):
        link = desc.link
        if not isinstance(link, ClosedManifold) or link.spectrum is None:
            raise MissingDataError("cone spectra need a closed link with spectral data")
        return assemble_cone_spectrum(link.spectrum, desc.sign or sign, ibc, s, cutoff)
    if isinstance(desc, EuclideanFactor):
        return euclidean_spectrum(desc.m, desc.sign or sign, s, cutoff)
    if isinstance(desc, VertexStratum):
        return identity_table(s, cutoff)
    if isinstance(desc, Product):
        return tensor_spectrum([spectrum(f, sign, ibc, s, cutoff) for f in desc.factors], cutoff)
    raise MissingDataError(f"no spectral model for {type(desc).__name__}")


# -- local models of critical points ------------------------------------------


@dataclass(frozen=True)
class LinkFactor:
    """Cone factor ``M = N x R_+`` of a local model, with ``n = dim M``.

    Betti vectors are those of ``N`` (length ``n``).
    """

    n: int
    betti_min: tuple
    betti_max: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("cone factor dimension must be at least 1")
        object.__setattr__(self, "betti_min", _betti_vec(self.betti_min, self.n - 1, "betti_min"))
        object.__setattr__(self, "betti_max", _betti_vec(self.betti_max, self.n - 1, "betti_max"))

    def betti(self, ibc: Ibc) -> tuple:
        return self.betti_min if Ibc.parse(ibc) is Ibc.MIN else self.betti_max


@dataclass(frozen=True)
class CriticalPointModel:
    """Local model ``R^{m+} x R^{m-} x M+ x M-`` of a rel-critical point.

    ``plus`` and ``minus`` are :class:`LinkFactor` or ``None`` for a vertex.
    """

    m_plus: int
    m_minus: int
    plus: LinkFactor | None = None
    minus: LinkFactor | None = None

    def __post_init__(self):
        if self.m_plus < 0 or self.m_minus < 0:
            raise ValueError("m_plus and m_minus must be nonnegative")

    @property
    def dim(self) -> int:
        return self.m_plus + self.m_minus + sum(f.n for f in (self.plus, self.minus) if f)

    def descriptor(self) -> Product:
        """Product descriptor with the factor signs fixed by their roles."""
        factors = []
        if self.m_plus:
            factors.append(EuclideanFactor(self.m_plus, Sign.PLUS))
        if self.m_minus:
            factors.append(EuclideanFactor(self.m_minus, Sign.MINUS))
        for f, sg in ((self.plus, Sign.PLUS), (self.minus, Sign.MINUS)):
            if f is None:
                factors.append(VertexStratum())
            else:
                link = CompactStratum(f.n - 1, f.betti_min, f.betti_max)
                factors.append(ConeStratum(link, sg))
        return Product(tuple(factors))


def local_model_kernel(cp: CriticalPointModel, ibc: Ibc) -> list[int]:
    """Kernel dimensions of the perturbed local model at a critical point.

    Künneth product of the kernels of ``R^{m+}`` (Plus), ``R^{m-}`` (Minus)
    and the cone factors ``M+`` (Plus) and ``M-`` (Minus).
    """
    return betti(cp.descriptor(), ibc, Sign.PLUS)
