"""JSON artifacts: canonical serialization, hashing, and validated loading."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .codes import AdditiveCode, DistanceCertificate, code_from_json
from .design import DesignCertificate
from .errors import CodeForgeError, ParseError
from .gf import field_create
from .graphs import BipartiteGraph, SpectralCertificate
from .linalg import Subspace, matrix_from_json


def dumps(obj) -> str:
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def code_digest(code: AdditiveCode) -> str:
    return digest(code.to_json())


def write_json(path, obj) -> str:
    """Write canonically; returns the sha256 of the bytes written."""
    text = dumps(obj)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)
    return hashlib.sha256(text.encode()).hexdigest()


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ParseError(str(path), "file not found") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc


def fraction_from_json(obj) -> Fraction:
    if isinstance(obj, dict):
        return Fraction(obj["num"], obj["den"])
    return Fraction(obj)


# --- typed loaders ---------------------------------------------------------------


def _guard(location: str, fn, *args):
    try:
        return fn(*args)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, CodeForgeError) as exc:
        detail = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        raise ParseError(location, detail) from exc


def load_code(obj: dict, location: str = "<code>") -> AdditiveCode:
    return _guard(location, code_from_json, obj)


def load_graph(obj: dict, location: str = "<graph>") -> BipartiteGraph:
    return _guard(location, BipartiteGraph.from_json, obj)


def graph_to_json(graph: BipartiteGraph, spectral: SpectralCertificate | None = None) -> dict:
    out = graph.to_json()
    if spectral is not None:
        out["spectral"] = spectral.to_json()
    return out


def load_spectral(obj: dict) -> SpectralCertificate | None:
    return SpectralCertificate.from_json(obj["spectral"]) if "spectral" in obj else None


def certificate_to_json(cert: DesignCertificate, code: AdditiveCode) -> dict:
    return {"kind": "design_certificate", "code_sha256": code_digest(code), **cert.to_json()}


def _certificate_from_json(obj: dict, code: AdditiveCode) -> DesignCertificate:
    field = code.field
    tau = {int(r): fraction_from_json(v) for r, v in obj["tau_hat"].items()}
    wit = {int(r): Subspace(field, code.k, matrix_from_json(m)) for r, m in obj["witness"].items()}
    cert = DesignCertificate(int(obj["r_max"]), tau, wit, int(obj["subspaces_scanned"]))
    if set(tau) != set(range(1, cert.r_max + 1)):
        raise ValueError("tau_hat must have an entry for every r in 1..r_max")
    return cert


def load_certificate(obj: dict, code: AdditiveCode, location: str = "<certificate>",
                     verify: bool = True) -> DesignCertificate:
    """Load a design certificate bound to ``code``; the hash and every witness are re-checked."""
    if obj.get("code_sha256") != code_digest(code):
        raise ParseError(location, "certificate refers to a different code (sha256 mismatch)")
    cert = _guard(location, _certificate_from_json, obj, code)
    if verify and not cert.verify_witnesses(code):
        raise ParseError(location, "a witness does not reproduce its tau value")
    return cert


def distance_to_json(dist: DistanceCertificate, code: AdditiveCode) -> dict:
    return {"kind": "distance_certificate", "code_sha256": code_digest(code), **dist.to_json()}


def load_distance(obj: dict, code: AdditiveCode, location: str = "<distance>") -> DistanceCertificate:
    if obj.get("code_sha256") != code_digest(code):
        raise ParseError(location, "distance certificate refers to a different code (sha256 mismatch)")
    dist = _guard(location, lambda o: DistanceCertificate(fraction_from_json(o["delta"]), tuple(o["message"]),
                                                          tuple(tuple(b) for b in o["codeword"]),
                                                          o["messages_scanned"]), obj)
    cw = code.encode(dist.message)
    if [list(b) for b in cw.tolist()] != [list(b) for b in dist.codeword] or \
            Fraction(dist.weight, code.n) != dist.delta:
        raise ParseError(location, "witness codeword does not re-encode to the reported weight")
    return dist


def detect_kind(obj: dict) -> str:
    if not isinstance(obj, dict):
        return "unknown"
    if "kind" in obj and obj["kind"] in ("design_certificate", "distance_certificate", "manifest", "report"):
        return obj["kind"]
    if "encoders" in obj:
        return "code"
    if "left_adj" in obj:
        return "graph"
    if {"p", "m"} <= set(obj):
        return "field"
    return "unknown"


def roundtrip(path, code_path=None):
    """Load and validate an artifact; returns (value, canonical JSON object).

    Loading canonicalizes (subspaces are re-reduced, keys sorted), so
    serializing the canonical object and loading again is the identity.
    Certificates need the code they refer to (``code_path``).
    """
    path = str(path)
    obj = read_json(path)
    kind = detect_kind(obj)
    if kind == "code":
        value = load_code(obj, path)
        again = value.to_json()
    elif kind == "graph":
        value = load_graph(obj, path)
        again = graph_to_json(value, _guard(path, load_spectral, obj))
    elif kind == "field":
        value = _guard(path, field_create, obj["p"], obj["m"])
        if list(obj.get("modulus", value.modulus)) != list(value.modulus):
            raise ParseError(path, f"modulus {obj['modulus']} is not the canonical {list(value.modulus)}")
        again = value.to_json()
    elif kind in ("design_certificate", "distance_certificate"):
        if code_path is None:
            raise ParseError(path, "a certificate needs its code file to be checked")
        code = load_code(read_json(code_path), str(code_path))
        if kind == "design_certificate":
            value = load_certificate(obj, code, path)
            again = certificate_to_json(value, code)
        else:
            value = load_distance(obj, code, path)
            again = distance_to_json(value, code)
    else:
        raise ParseError(path, "unrecognized artifact")
    return value, again
