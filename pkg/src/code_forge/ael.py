"""AEL composition of an outer code, an inner code and a bipartite graph, plus certification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .codes import AdditiveCode, DistanceCertificate, min_distance, rs_outer_additive
from .design import DesignCertificate, search_inner_code, tau_profile
from .errors import BudgetExceeded, CodeForgeError, ShapeMismatch
from .gf import GF
from .graphs import BipartiteGraph, SpectralCertificate, complete_bipartite, random_regular_bipartite, sigma2

# Relative margin subtracted from the floating-point right-hand side of the
# spectral hypothesis, so that a reported pass survives rounding.
ROUNDING_MARGIN = 1e-12


@dataclass
class AELParams:
    outer: AdditiveCode
    inner: AdditiveCode
    graph: BipartiteGraph
    r: int
    epsilon: Fraction
    delta_out: Fraction
    inner_certificate: DesignCertificate | None = None
    spectral: SpectralCertificate | None = None
    outer_distance: DistanceCertificate | None = None

    def __post_init__(self):
        self.epsilon = Fraction(self.epsilon)
        self.delta_out = Fraction(self.delta_out)
        self.check()

    def check(self) -> None:
        if self.inner.k != self.outer.s:
            raise ShapeMismatch(f"inner.k = {self.inner.k} must equal outer.s = {self.outer.s}")
        if self.inner.n != self.graph.d:
            raise ShapeMismatch(f"inner.n = {self.inner.n} must equal graph.d = {self.graph.d}")
        if self.outer.n != self.graph.n:
            raise ShapeMismatch(f"outer.n = {self.outer.n} must equal graph.n = {self.graph.n}")
        if self.inner.field != self.outer.field:
            raise ShapeMismatch("inner and outer codes live over different fields")
        if self.outer_distance is not None and self.delta_out != self.outer_distance.delta:
            raise ValueError(f"delta_out = {self.delta_out} disagrees with the certified {self.outer_distance.delta}")


def ael_compose(params: AELParams) -> AdditiveCode:
    """Right vertex j, slot l carries inner band l2 of left vertex i, where right_adj[j][l] = (i, l2)."""
    params.check()
    outer, inner, G = params.outer, params.inner, params.graph
    field = outer.field
    # inner_left[i][l2] = Enc_in,l2 . Enc_out,i  (an s x k matrix)
    inner_left = [[field.matmul(E_in, E_out) for E_in in inner.encoders] for E_out in outer.encoders]
    encoders = [np.concatenate([inner_left[i][l2] for i, l2 in row], axis=0) for row in G.right_adj]
    meta = {"kind": "ael", "outer": outer.meta.get("kind"), "inner": inner.meta.get("kind")}
    return AdditiveCode(field, outer.k, inner.s * G.d, G.n, encoders, meta)


def ael_encode_route(params: AELParams, x) -> np.ndarray:
    """Operational path: outer-encode, inner-encode every block, move symbols along edges."""
    outer, inner, G = params.outer, params.inner, params.graph
    y = outer.encode(x)
    z = [inner.encode(blk) for blk in y]  # z[i][l2] is the band written at left slot l2
    out = np.zeros((G.n, G.d * inner.s), dtype=np.int64)
    for i, row in enumerate(G.left_adj):
        for l2, (j, l) in enumerate(row):
            out[j, l * inner.s:(l + 1) * inner.s] = z[i][l2]
    return out


@dataclass
class TheoremReport:
    lambda_bound: float
    rhs: float
    hypothesis_holds: bool
    conclusion: dict[int, dict] | None
    conclusion_holds: bool | None
    corollary: dict | None
    rate: Fraction
    rate_out: Fraction
    rate_in: Fraction
    notes: list[str] = dc_field(default_factory=list)
    certificate: DesignCertificate | None = None

    @property
    def hypothesis_verdict(self) -> str:
        return "HOLDS" if self.hypothesis_holds else "NotApplicable"

    @property
    def ok(self) -> bool:
        """No certified claim failed (an inapplicable hypothesis is not a failure)."""
        return self.conclusion_holds is not False and (self.corollary is None or self.corollary["holds"])

    def to_json(self) -> dict:
        conc = None
        if self.conclusion is not None:
            conc = {str(r): {k: str(v) if isinstance(v, Fraction) else v for k, v in row.items()}
                    for r, row in self.conclusion.items()}
        cor = None if self.corollary is None else {k: str(v) if isinstance(v, Fraction) else v
                                                   for k, v in self.corollary.items()}
        return {"hypothesis": {"lambda_bound": self.lambda_bound, "rhs": self.rhs,
                               "verdict": self.hypothesis_verdict},
                "conclusion": conc, "conclusion_holds": self.conclusion_holds, "corollary": cor,
                "rate": str(self.rate), "rate_out": str(self.rate_out), "rate_in": str(self.rate_in),
                "notes": self.notes}


def spectral_hypothesis(lambda_bound: float, q: int, r: int, epsilon, delta_out) -> tuple[bool, float]:
    """lambda < eps * q^(-r^2/2) * sqrt(delta_out), with the right side shrunk for rounding."""
    rhs = float(epsilon) * q ** (-(r * r) / 2) * math.sqrt(float(delta_out))
    rhs_low = math.nextafter(rhs * (1 - ROUNDING_MARGIN), 0.0)
    return lambda_bound < rhs_low, rhs_low


def ael_certify(params: AELParams, budget: int | None = None, code: AdditiveCode | None = None,
                workers: int = 1) -> TheoremReport:
    """Check the spectral hypothesis, then (budget permitting) the design conclusion exhaustively."""
    code = code or ael_compose(params)
    field = code.field
    spectral = params.spectral or sigma2(params.graph)
    holds, rhs = spectral_hypothesis(spectral.lambda_bound, field.q, params.r, params.epsilon, params.delta_out)
    inner_cert = params.inner_certificate
    if inner_cert is None or inner_cert.r_max < params.r:
        inner_cert = tau_profile(params.inner, params.r, budget)
    report = TheoremReport(spectral.lambda_bound, rhs, holds, None, None, None, code.rate,
                           params.outer.rate, params.inner.rate)
    if params.outer_distance is None:
        report.notes.append("delta_out taken as given (no distance certificate attached)")
    try:
        cert = tau_profile(code, params.r, budget, workers)
    except BudgetExceeded as exc:
        report.notes.append(f"conclusion not checked: {exc}")
        return report
    rows = {}
    for r in range(1, params.r + 1):
        allowed = inner_cert.tau_hat[r] + params.epsilon
        rows[r] = {"tau_ael": cert.tau_hat[r], "tau_inner": inner_cert.tau_hat[r], "allowed": allowed,
                   "holds": cert.tau_hat[r] <= allowed}
    report.conclusion = rows
    report.conclusion_holds = all(row["holds"] for row in rows.values())
    report.certificate = cert
    try:
        dist = min_distance(code, workers=workers)
        report.corollary = {"delta_ael": dist.delta, "lower": 1 - cert.tau_hat[1],
                            "holds": dist.delta >= 1 - cert.tau_hat[1]}
    except BudgetExceeded as exc:
        report.notes.append(f"corollary not checked: {exc}")
    return report


@dataclass
class EndToEndBundle:
    code: AdditiveCode
    params: AELParams
    report: TheoremReport
    outer_distance: DistanceCertificate
    inner_certificate: DesignCertificate
    spectral: SpectralCertificate
    settings: dict
    deviations: list[str]


_END_TO_END_DEFAULTS = {"k_in": 2, "s": 16, "d": 4, "K": 2, "graph": "complete", "graph_seed": 0,
                   "inner_epsilon": None, "inner_seed": 0, "max_attempts": 200, "budget": None}


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CodeForgeError as exc:
        exc.stage = name
        raise


def instantiate_ael(field: GF, R, r: int, epsilon, n: int, overrides: dict | None = None) -> EndToEndBundle:
    """Outer RS code, searched inner code, graph, composition and certification in one run.

    Desk-scale defaults replace the asymptotic recipe; every departure from
    it is listed in ``deviations``.  Errors carry the failing stage name.
    """
    R, epsilon = Fraction(R), Fraction(epsilon)
    cfg = dict(_END_TO_END_DEFAULTS)
    unknown = set(overrides or {}) - set(cfg)
    if unknown:
        raise ValueError(f"unknown overrides: {sorted(unknown)}")
    cfg.update(overrides or {})
    if cfg["inner_epsilon"] is None:
        cfg["inner_epsilon"] = epsilon / 4
    cfg["inner_epsilon"] = Fraction(cfg["inner_epsilon"])
    k_in, s, d, K = cfg["k_in"], cfg["s"], cfg["d"], cfg["K"]

    outer = _stage("outer", rs_outer_additive, field, k_in, n, K)
    dist = _stage("outer", min_distance, outer)
    search = _stage("inner", search_inner_code, field, k_in, s, d, r, cfg["inner_epsilon"],
                    cfg["max_attempts"], cfg["inner_seed"], cfg["budget"])
    if cfg["graph"] == "complete":
        if d != n:
            raise ShapeMismatch("the complete bipartite graph needs d = n")
        graph = _stage("graph", complete_bipartite, n)
    elif cfg["graph"] == "random":
        graph = _stage("graph", random_regular_bipartite, n, d, cfg["graph_seed"])
    else:
        raise ValueError(f"unknown graph kind {cfg['graph']!r}")
    spectral = _stage("graph", sigma2, graph)
    params = _stage("compose", AELParams, outer, search.code, graph, r, epsilon, dist.delta,
                    search.certificate, spectral, dist)
    code = _stage("compose", ael_compose, params)
    report = _stage("certify", ael_certify, params, cfg["budget"], code)

    deviations = []
    recipe = {"R_out": 1 - epsilon / 4, "delta_out": epsilon / 8, "R_in": R + epsilon / 2}
    actual = {"R_out": outer.rate, "delta_out": dist.delta, "R_in": search.code.rate}
    for key, want in recipe.items():
        if actual[key] != want:
            deviations.append(f"{key} = {actual[key]} (recipe: {want})")
    if code.rate < R:
        deviations.append(f"composed rate {code.rate} is below the target R = {R}")
    if cfg["graph"] == "complete":
        deviations.append("complete bipartite graph (lambda = 0) instead of an explicit expander family")
    cfg["inner_epsilon"] = str(cfg["inner_epsilon"])
    settings = {**cfg, "R": str(R), "r": r, "epsilon": str(epsilon), "n": n, "attempts": search.attempts}
    return EndToEndBundle(code, params, report, dist, search.certificate, spectral, settings, deviations)


# Name used by the operation contract.
instantiate_thm11 = instantiate_ael
