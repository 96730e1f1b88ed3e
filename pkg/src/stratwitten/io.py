"""JSON schemas, converters and deterministic emitters."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from typing import Any

import jsonschema

from .cone_spectrum import LinkPair, LinkSpectrum
from .errors import SchemaError
from .model_complexes import Sign
from .space_model import (
    ClosedManifold,
    CompactStratum,
    ConeStratum,
    CriticalPointModel,
    EuclideanFactor,
    LinkFactor,
    Product,
    VertexStratum,
)
from .spectra import AssembledSpectrum

_NNINT = {"type": "integer", "minimum": 0}
_BETTI = {"type": "array", "items": _NNINT}

LINK_SCHEMA = {
    "type": "object",
    "required": ["dim", "harmonic_min", "harmonic_max", "pairs"],
    "properties": {
        "dim": _NNINT,
        "harmonic_min": _BETTI,
        "harmonic_max": _BETTI,
        "pairs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["mu", "r", "mult"],
                "properties": {
                    "mu": {"type": "number", "exclusiveMinimum": 0},
                    "r": {"type": "integer", "minimum": 1},
                    "mult": {"type": "integer", "minimum": 1},
                },
                "additionalProperties": False,
            },
        },
        "mu_max": {"type": ["number", "null"]},
        "version": {"type": "string"},
        "oracle": {"type": "string"},
    },
}

_SIGN = {"enum": ["plus", "minus"]}

DESC_SCHEMA = {
    "$defs": {
        "desc": {
            "type": "object",
            "required": ["kind"],
            "properties": {"kind": {"enum": ["closed", "compact", "cone", "vertex", "euclidean", "product"]}},
            "allOf": [
                {
                    "if": {"properties": {"kind": {"const": "closed"}}},
                    "then": {
                        "required": ["dim"],
                        "properties": {"dim": _NNINT, "betti_min": _BETTI, "betti_max": _BETTI, "spectrum": LINK_SCHEMA},
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "compact"}}},
                    "then": {
                        "required": ["dim", "betti_min", "betti_max"],
                        "properties": {"dim": _NNINT, "betti_min": _BETTI, "betti_max": _BETTI},
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "cone"}}},
                    "then": {"required": ["link"], "properties": {"link": {"$ref": "#/$defs/desc"}, "sign": _SIGN}},
                },
                {
                    "if": {"properties": {"kind": {"const": "vertex"}}},
                    "then": {"properties": {"link_dim": _NNINT}},
                },
                {
                    "if": {"properties": {"kind": {"const": "euclidean"}}},
                    "then": {"required": ["m"], "properties": {"m": {"type": "integer", "minimum": 1}, "sign": _SIGN}},
                },
                {
                    "if": {"properties": {"kind": {"const": "product"}}},
                    "then": {
                        "required": ["factors"],
                        "properties": {"factors": {"type": "array", "minItems": 2, "items": {"$ref": "#/$defs/desc"}}},
                    },
                },
            ],
        }
    },
    "$ref": "#/$defs/desc",
}

_FACTOR = {
    "oneOf": [
        {"const": "vertex"},
        {
            "type": "object",
            "required": ["n", "betti_min", "betti_max"],
            "properties": {"n": {"type": "integer", "minimum": 1}, "betti_min": _BETTI, "betti_max": _BETTI},
            "additionalProperties": False,
        },
    ]
}

POINTS_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["m_plus", "m_minus", "plus", "minus"],
        "properties": {"m_plus": _NNINT, "m_minus": _NNINT, "plus": _FACTOR, "minus": _FACTOR},
    },
}


def pointer(path) -> str:
    """RFC 6901 pointer for a sequence of keys and indices."""
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate(doc: Any, schema: dict) -> None:
    """Validate ``doc`` and raise :class:`SchemaError` at the deepest failure."""
    validator = jsonschema.Draft202012Validator(schema)
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        raise SchemaError(err.message, pointer(err.absolute_path))


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _semantic(fn, doc, where=""):
    # turn constructor ValueErrors into pointered schema errors
    try:
        return fn(doc)
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc), where) from None


# -- link spectra ---------------------------------------------------------------


def link_from_dict(doc: dict, where: str = "") -> LinkSpectrum:
    validate(doc, LINK_SCHEMA)

    def build(d):
        n = d["dim"]
        for i, p in enumerate(d["pairs"]):
            if p["r"] > n:
                raise SchemaError(f"pair degree {p['r']} exceeds link dimension {n}", f"{where}/pairs/{i}/r")
        for key in ("harmonic_min", "harmonic_max"):
            if len(d[key]) != n + 1:
                raise SchemaError(f"expected {n + 1} entries", f"{where}/{key}")
        return LinkSpectrum(
            n_link=n,
            harmonic_min=d["harmonic_min"],
            harmonic_max=d["harmonic_max"],
            pairs=tuple(LinkPair(float(p["mu"]), p["r"], p["mult"]) for p in d["pairs"]),
            mu_max=d.get("mu_max"),
            source=d.get("oracle", ""),
        )

    return _semantic(build, doc, where)


def link_to_dict(link: LinkSpectrum) -> dict:
    out = {
        "dim": link.n_link,
        "harmonic_min": list(link.harmonic_min),
        "harmonic_max": list(link.harmonic_max),
        "pairs": [{"mu": p.mu, "r": p.r, "mult": p.mult} for p in link.pairs],
    }
    if link.mu_max is not None:
        out["mu_max"] = link.mu_max
    return out


# -- descriptors ------------------------------------------------------------------


def desc_from_dict(doc: dict):
    validate(doc, DESC_SCHEMA)
    return _desc(doc, "")


def _desc(d: dict, where: str):
    kind = d["kind"]
    if kind == "closed":
        spec = link_from_dict(d["spectrum"], where + "/spectrum") if "spectrum" in d else None
        return _semantic(lambda x: ClosedManifold(x["dim"], x.get("betti_min"), x.get("betti_max"), spec), d, where)
    if kind == "compact":
        return _semantic(lambda x: CompactStratum(x["dim"], x["betti_min"], x["betti_max"]), d, where)
    if kind == "cone":
        sign = Sign.parse(d["sign"]) if "sign" in d else None
        return ConeStratum(_desc(d["link"], where + "/link"), sign)
    if kind == "vertex":
        return VertexStratum(d.get("link_dim", 0))
    if kind == "euclidean":
        return EuclideanFactor(d["m"], Sign.parse(d["sign"]) if "sign" in d else None)
    return Product(tuple(_desc(f, f"{where}/factors/{i}") for i, f in enumerate(d["factors"])))


def desc_to_dict(desc) -> dict:
    if isinstance(desc, ClosedManifold):
        out = {"kind": "closed", "dim": desc.dim}
        if desc.betti_min is not None:
            out["betti_min"] = list(desc.betti_min)
            out["betti_max"] = list(desc.betti_max)
        if desc.spectrum is not None:
            out["spectrum"] = link_to_dict(desc.spectrum)
        return out
    if isinstance(desc, CompactStratum):
        return {"kind": "compact", "dim": desc.dim, "betti_min": list(desc.betti_min), "betti_max": list(desc.betti_max)}
    if isinstance(desc, ConeStratum):
        out = {"kind": "cone", "link": desc_to_dict(desc.link)}
        if desc.sign is not None:
            out["sign"] = str(desc.sign)
        return out
    if isinstance(desc, VertexStratum):
        return {"kind": "vertex", "link_dim": desc.link_dim}
    if isinstance(desc, EuclideanFactor):
        out = {"kind": "euclidean", "m": desc.m}
        if desc.sign is not None:
            out["sign"] = str(desc.sign)
        return out
    if isinstance(desc, Product):
        return {"kind": "product", "factors": [desc_to_dict(f) for f in desc.factors]}
    raise TypeError(f"not a descriptor: {desc!r}")


# -- critical points ----------------------------------------------------------------


def points_from_list(doc: list) -> list[CriticalPointModel]:
    validate(doc, POINTS_SCHEMA)
    out = []
    for i, d in enumerate(doc):
        factors = []
        for key in ("plus", "minus"):
            f = d[key]
            if f == "vertex":
                factors.append(None)
            else:
                factors.append(
                    _semantic(lambda x: LinkFactor(x["n"], x["betti_min"], x["betti_max"]), f, f"/{i}/{key}")
                )
        out.append(CriticalPointModel(d["m_plus"], d["m_minus"], *factors))
    return out


def point_to_dict(cp: CriticalPointModel) -> dict:
    def fac(f):
        if f is None:
            return "vertex"
        return {"n": f.n, "betti_min": list(f.betti_min), "betti_max": list(f.betti_max)}

    return {"m_plus": cp.m_plus, "m_minus": cp.m_minus, "plus": fac(cp.plus), "minus": fac(cp.minus)}


# -- spectra ----------------------------------------------------------------------


def spectrum_to_dict(sp: AssembledSpectrum) -> dict:
    degrees = []
    for d in sorted(sp.per_degree):
        rows = [
            {"value": v, "mult": m, "branch": "+".join(b)}
            for (v, m), b in zip(sp.per_degree[d], sp.branches.get(d, [()] * len(sp.per_degree[d])))
        ]
        degrees.append({"degree": d, "eigenvalues": rows})
    out = {"s": sp.s, "cutoff": sp.cutoff, "kernel_dims": list(sp.kernel_dims), "degrees": degrees}
    if sp.ladders:
        out["ladders"] = [
            {"degree": l.degree, "base": l.expr, "base_value": l.base, "mult": l.mult, "branch": l.provenance}
            for l in sorted(sp.ladders, key=lambda l: (l.degree, l.base, l.provenance))
        ]
    return out


def spectrum_from_dict(doc: dict) -> AssembledSpectrum:
    per_degree, branches = {}, {}
    for entry in doc["degrees"]:
        d = entry["degree"]
        per_degree[d] = [(float(e["value"]), int(e["mult"])) for e in entry["eigenvalues"]]
        branches[d] = [tuple(e["branch"].split("+")) if e["branch"] else () for e in entry["eigenvalues"]]
    return AssembledSpectrum(
        s=float(doc["s"]),
        per_degree=per_degree,
        kernel_dims=list(doc["kernel_dims"]),
        cutoff=float(doc["cutoff"]),
        branches=branches,
    )


# -- emission ---------------------------------------------------------------------


def round_floats(obj: Any, digits: int = 12) -> Any:
    """Round every float to ``digits`` significant digits, recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("non-finite float in output")
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {str(k): round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, 12 significant digits, trailing newline."""
    return json.dumps(round_floats(obj), sort_keys=True, indent=2) + "\n"


def spectrum_csv(sp: AssembledSpectrum) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "eigenvalue", "multiplicity", "branch"])
    for d in sorted(sp.per_degree):
        tags = sp.branches.get(d, [()] * len(sp.per_degree[d]))
        for (v, m), b in zip(sp.per_degree[d], tags):
            w.writerow([d, f"{v:.12g}", m, "+".join(b)])
    return buf.getvalue()


def spectrum_table(sp: AssembledSpectrum) -> str:
    lines = [f"{'degree':>6}  {'eigenvalue':>18}  {'mult':>6}  branch"]
    for d in sorted(sp.per_degree):
        tags = sp.branches.get(d, [()] * len(sp.per_degree[d]))
        for (v, m), b in zip(sp.per_degree[d], tags):
            lines.append(f"{d:>6}  {v:>18.12g}  {m:>6}  {'+'.join(b)}")
    lines.append(f"kernel_dims: {list(sp.kernel_dims)}")
    return "\n".join(lines) + "\n"
