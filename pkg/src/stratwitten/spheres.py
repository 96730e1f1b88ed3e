"""Spectral data of round spheres, used as links of Euclidean cones.

On ``S^N`` the coexact ``p``-forms (``0 <= p <= N-1``) have eigenvalues
``(k+p)(k+N-p-1)`` for ``k >= 1`` with multiplicity::

    (2k+N-1) (k+N-1)! / (p! (N-p-1)! (k-1)! (k+p) (k+N-p-1))

Each such ``beta`` pairs with ``alpha = d beta / mu`` of degree ``r = p+1``.
Harmonic forms sit in degrees 0 and N (two points for ``S^0``).
"""

from __future__ import annotations

import json
import math
import os
from importlib import resources
from pathlib import Path

from .cone_spectrum import LinkPair, LinkSpectrum
from .errors import MissingDataError

DATA_ENV = "STRATWITTEN_DATA"
DATA_VERSION = "1"
ORACLE = "closed-form sphere Hodge spectrum (coexact forms), cross-checked against Euclidean tensor products"


def coexact_multiplicity(N: int, p: int, k: int) -> int:
    num = (2 * k + N - 1) * math.factorial(k + N - 1)
    den = (
        math.factorial(p)
        * math.factorial(N - p - 1)
        * math.factorial(k - 1)
        * (k + p)
        * (k + N - p - 1)
    )
    if num % den:
        raise ArithmeticError(f"non-integral multiplicity for N={N}, p={p}, k={k}")
    return num // den


def sphere_link_spectrum(N: int, mu_max: float) -> LinkSpectrum:
    """Link data of ``S^N`` listing every pair with ``mu <= mu_max``."""
    if N < 0:
        raise ValueError("sphere dimension must be nonnegative")
    if N == 0:
        return LinkSpectrum(0, (2,), (2,), (), mu_max=None, source=ORACLE)
    harmonic = tuple(1 if r in (0, N) else 0 for r in range(N + 1))
    pairs = []
    for r in range(1, N + 1):
        p = r - 1
        k = 1
        while True:
            mu = math.sqrt((k + p) * (k + N - p - 1))
            if mu > mu_max:
                break
            pairs.append(LinkPair(mu, r, coexact_multiplicity(N, p, k)))
            k += 1
    return LinkSpectrum(N, harmonic, harmonic, tuple(pairs), mu_max=float(mu_max), source=ORACLE)


def sphere_document(N: int, mu_max: float) -> dict:
    from .io import link_to_dict

    doc = link_to_dict(sphere_link_spectrum(N, mu_max))
    doc["version"] = DATA_VERSION
    doc["oracle"] = ORACLE
    return doc


def _data_file(N: int):
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override) / f"S{N}.json"
    return resources.files("stratwitten").joinpath("data").joinpath(f"S{N}.json")


def load_sphere(N: int) -> LinkSpectrum:
    """Load bundled (or ``$STRATWITTEN_DATA``) spectral data of ``S^N``.

    Raises
    ------
    MissingDataError
        If no data file exists for ``N``.
    """
    from .io import link_from_dict

    path = _data_file(N)
    try:
        text = path.read_text()
    except (FileNotFoundError, OSError):
        raise MissingDataError(f"no sphere data for S^{N} at {path}") from None
    link = link_from_dict(json.loads(text))
    if link.n_link != N:
        raise MissingDataError(f"{path} describes S^{link.n_link}, not S^{N}")
    return link


# bundled ranges: enough for the cutoffs used by the tests and examples
BUNDLED_MU_MAX = {0: None, 1: 128.0, 2: 64.0, 3: 48.0}


def write_bundled(directory: Path) -> list[Path]:
    """Regenerate the bundled data files into ``directory``."""
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for N, mu_max in BUNDLED_MU_MAX.items():
        doc = sphere_document(N, mu_max or 0.0)
        path = directory / f"S{N}.json"
        path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
        out.append(path)
    return out
