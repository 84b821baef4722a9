"""Self-contained JSON instance files for two-sided multiplier bialgebroids."""
from __future__ import annotations

import json
from typing import Any

from sympy.polys.matrices import DomainMatrix

from . import linalg as la
from .algebra import AlgebraError, MultiplierPair, algebra_from_json, algebra_to_json, make_base_embedding
from .hopf import MultiplierBialgebroid

INSTANCE_SCHEMA = "mhalgebroid.instance/1"

__all__ = ["INSTANCE_SCHEMA", "InstanceError", "instance_to_json", "instance_from_json", "dumps", "load_instance",
           "matrix_input"]


class InstanceError(ValueError):
    pass


def _pair_json(p: MultiplierPair) -> dict:
    return {"left": la.matrix_to_json(p.left), "right": la.matrix_to_json(p.right)}


def instance_to_json(M: MultiplierBialgebroid) -> dict:
    """Everything needed to rebuild M; lifts are stored as ambient representatives."""
    sL, sR = M.QL.q.section.matrix, M.QR.q.section.matrix
    meta = {k: v for k, v in M.meta.items() if k != "certificate"}
    return {
        "schema": INSTANCE_SCHEMA,
        "name": M.name,
        "kind": meta.pop("kind", "custom"),
        "field": la.field_tag(M.K),
        "A": algebra_to_json(M.A),
        "B": algebra_to_json(M.B),
        "C": algebra_to_json(M.C),
        "iota_B": [_pair_json(p) for p in M.iota_B.images],
        "iota_C": [_pair_json(p) for p in M.iota_C.images],
        "S_B": la.matrix_to_json(M.S_B),
        "S_C": la.matrix_to_json(M.S_C),
        "lifts": {
            "T_lambda": la.matrix_to_json(sL * M.left.Tl),
            "T_rho": la.matrix_to_json(sL * M.left.Tr),
            "lambda_T": la.matrix_to_json(sR * M.right.lT),
            "rho_T": la.matrix_to_json(sR * M.right.rT),
        },
        "meta": meta,
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def matrix_input(d, K, shape=None) -> DomainMatrix:
    """A matrix given as a list of rows or as {shape, entries}."""
    if isinstance(d, dict):
        M = la.matrix_from_json(d, K)
    elif isinstance(d, list):
        if not d:
            raise InstanceError("empty matrix")
        M = la.from_rows([[la.scalar(x, K) for x in row] for row in d], K)
    else:
        raise InstanceError("matrix must be a list of rows or {shape, entries}")
    if shape is not None and tuple(M.shape) != tuple(shape):
        raise InstanceError(f"matrix has shape {tuple(M.shape)}, expected {tuple(shape)}")
    return M


def instance_from_json(d: dict) -> MultiplierBialgebroid:
    """Rebuild without certification; structural validation errors raise InstanceError."""
    if not isinstance(d, dict) or d.get("schema") != INSTANCE_SCHEMA:
        raise InstanceError(f"not an instance file (expected schema {INSTANCE_SCHEMA!r})")
    try:
        K = la.field(d.get("field", "q"))
        A = algebra_from_json(d["A"], K, "A")
        B = algebra_from_json(d["B"], K, "B")
        C = algebra_from_json(d["C"], K, "C")
        n = A.dim
        pairs = lambda key: [MultiplierPair(matrix_input(p["left"], K, (n, n)), matrix_input(p["right"], K, (n, n)))
                             for p in d[key]]
        iB = make_base_embedding(A, B, pairs("iota_B"), "hom")
        iC = make_base_embedding(A, C, pairs("iota_C"), "hom")
        S_B = matrix_input(d["S_B"], K, (C.dim, B.dim))
        S_C = matrix_input(d["S_C"], K, (B.dim, C.dim))
        lifts = {k: matrix_input(d["lifts"][k], K, (n * n, n * n))
                 for k in ("T_lambda", "T_rho", "lambda_T", "rho_T")}
    except InstanceError:
        raise
    except (KeyError, TypeError, IndexError) as e:
        raise InstanceError(f"malformed instance: missing or invalid {e}") from None
    except (AlgebraError, la.LinalgError, ValueError) as e:
        raise InstanceError(f"invalid instance: {e}") from None
    meta = dict(d.get("meta", {}))
    meta["kind"] = d.get("kind", "custom")
    return MultiplierBialgebroid(A, B, C, iB, iC, S_B, S_C, lifts["T_lambda"], lifts["T_rho"],
                                 lifts["lambda_T"], lifts["rho_T"], d.get("name", ""), meta)


def load_instance(path: str) -> MultiplierBialgebroid:
    try:
        with open(path, encoding="utf-8") as f:
            d = json.load(f)
    except json.JSONDecodeError as e:
        raise InstanceError(f"invalid JSON: {e}") from None
    return instance_from_json(d)
