"""One JSON document holding a walk, its compatibility table and its equations.

Documents are byte-stable: every list follows the canonical label order and
dict keys are emitted in a fixed order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .cluster_engine import ar_walk, dual_data, label_str, parse_label
from .compatibility import compatibility_table
from .dynkin import DynkinType, Orientation, default_orientation, parse_orientation, parse_type
from .symbolic import LaurentPolynomial
from .u_system import (
    UEquation,
    extended_equations_family,
    extended_equations_universal,
    f_gamma,
    local_equations,
    primitive_equations,
)

SCHEMA_VERSION = "1"


def load_schema(name: str = "export") -> dict:
    text = resources.files("clusterconf").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _alphabet_json(m) -> dict:
    return {
        "y": list(m.y_exponents),
        "factors": {label_str(k): m.factor_exponents[k] for k in sorted(m.factor_exponents)},
    }


def _equations_json(eqs) -> list:
    return [eq.to_json() for eq in eqs]


def export_document(dtype: DynkinType, orientation: Orientation | None = None) -> dict:
    if orientation is None:
        orientation = default_orientation(dtype)
    walk = ar_walk(dtype, orientation)
    dual = dual_data(dtype, orientation)
    table = compatibility_table(walk)
    try:
        family = extended_equations_family(dtype, orientation)
    except NotImplementedError:
        family = None
    variables = []
    for g in walk.pi:
        rec = walk.records[g]
        variables.append(
            {
                "label": label_str(g),
                "tau": label_str(walk.tau[g]),
                "f_polynomial": rec.f_poly.to_json(),
                "g_vector": list(rec.g_vector),
                "g_vector_dual": list(dual.records[g].g_vector),
                "f_gamma": _alphabet_json(f_gamma(g, walk)),
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "type": str(dtype),
        "orientation": str(orientation),
        "exchange_matrix": [list(r) for r in walk.b],
        "pi": [label_str(g) for g in walk.pi],
        "tau_order": walk.tau_order(),
        "variables": variables,
        "compatibility": table.rows(),
        "equations": {
            "primitive": _equations_json(primitive_equations(table)),
            "universal": _equations_json(extended_equations_universal(walk, table)),
            "family": None if family is None else _equations_json(family),
            "local": [eq.to_json() for eq in local_equations(walk)],
        },
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


@dataclass
class ExportedData:
    dtype: DynkinType
    orientation: Orientation
    exchange_matrix: list
    pi: list
    tau: dict
    f_polys: dict
    g_vectors: dict
    g_vectors_dual: dict
    compatibility: dict
    primitive: list
    universal: list
    family: list | None

    @classmethod
    def from_live(cls, dtype: DynkinType, orientation: Orientation | None = None) -> "ExportedData":
        return load_export(export_document(dtype, orientation))


def _parse_equation(doc: dict, provenance: str) -> UEquation:
    left = {parse_label(k): v for k, v in doc["left"].items()}
    right = {parse_label(k): v for k, v in doc["right"].items()}
    return UEquation.make(left, right, provenance)


def load_export(doc: dict) -> ExportedData:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    dtype = parse_type(doc["type"])
    orientation = parse_orientation(doc["orientation"], dtype)
    pi = [parse_label(s) for s in doc["pi"]]
    rows = doc["compatibility"]
    eqs = doc["equations"]
    return ExportedData(
        dtype=dtype,
        orientation=orientation,
        exchange_matrix=doc["exchange_matrix"],
        pi=pi,
        tau={parse_label(v["label"]): parse_label(v["tau"]) for v in doc["variables"]},
        f_polys={parse_label(v["label"]): LaurentPolynomial.from_json(v["f_polynomial"]) for v in doc["variables"]},
        g_vectors={parse_label(v["label"]): tuple(v["g_vector"]) for v in doc["variables"]},
        g_vectors_dual={parse_label(v["label"]): tuple(v["g_vector_dual"]) for v in doc["variables"]},
        compatibility={(w, g): rows[a][b] for a, w in enumerate(pi) for b, g in enumerate(pi)},
        primitive=[_parse_equation(e, "primitive") for e in eqs["primitive"]],
        universal=[_parse_equation(e, "universal") for e in eqs["universal"]],
        family=None if eqs["family"] is None else [_parse_equation(e, "family") for e in eqs["family"]],
    )
