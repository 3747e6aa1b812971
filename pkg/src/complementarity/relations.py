"""Complementarity relations evaluated as residuals with per-term reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionError, partial_trace, qubit_count
from .measures import (
    concurrence_pure,
    hs_to_spinflip,
    i_tangle_pure,
    indistinguishability,
    mixedness,
    qubit_properties,
    residual_tangle,
    separable_uncertainty,
    single_qubit_properties,
    tangle,
    tr_rho_rhotilde,
)
from .states import MAX_QUBITS, Form15Params, PureState, density_of, form15_state, ket_of

IDENTITY_TOL = 1e-9
SPECTRAL_TOL = 1e-8


@dataclass(frozen=True)
class RelationReport:
    """Outcome of one relation check.

    Equalities pass when ``|residual| <= tolerance``; inequalities
    (``kind == "inequality"``, relation ``lhs >= rhs``) pass when
    ``residual >= -tolerance``.
    """

    relation_id: str
    terms: dict[str, float]
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    kind: str = "equality"
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.kind == "inequality":
            ok = self.residual >= -self.tolerance
        else:
            ok = abs(self.residual) <= self.tolerance
        object.__setattr__(self, "passed", bool(ok))

    @property
    def base_id(self) -> str:
        return self.relation_id.split(":")[0]

    @property
    def violation(self) -> float:
        """Distance from satisfying the relation exactly (equalities) or at all
        (inequalities)."""
        if self.kind == "inequality":
            return max(0.0, -self.residual)
        return abs(self.residual)

    def as_dict(self) -> dict:
        return {
            "relation_id": self.relation_id,
            "kind": self.kind,
            "terms": dict(self.terms),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RelationReport":
        rep = cls(
            relation_id=d["relation_id"],
            terms={k: float(v) for k, v in d["terms"].items()},
            lhs=float(d["lhs"]),
            rhs=float(d["rhs"]),
            residual=float(d["residual"]),
            tolerance=float(d["tolerance"]),
            kind=d.get("kind", "equality"),
        )
        if rep.passed != bool(d["pass"]):
            raise ValueError(f"inconsistent pass flag for {rep.relation_id}")
        return rep


def _report(rid, terms, lhs, rhs, tol, kind="equality") -> RelationReport:
    return RelationReport(rid, {k: float(v) for k, v in terms.items()},
                          float(lhs), float(rhs), float(lhs - rhs), tol, kind)



def summarize(reports) -> dict:
    """Batch summary; inequality slack does not count as residual."""
    reports = list(reports)
    return {
        "total": len(reports),
        "passed": sum(r.passed for r in reports),
        "max_abs_residual": max((r.violation for r in reports), default=0.0),
    }


def reports_to_json(reports, indent: int | None = None) -> str:
    reports = list(reports)
    doc = {"reports": [r.as_dict() for r in reports], "summary": summarize(reports)}
    return json.dumps(doc, indent=indent)


def reports_from_json(text: str) -> list[RelationReport]:
    return [RelationReport.from_dict(d) for d in json.loads(text)["reports"]]


def verify_pure(psi, tol: float | None = None) -> list[RelationReport]:
    """Relations that hold for every pure state of ``n`` qubits.

    Always reports ``eq6`` (marginal mixedness plus single-particle
    information sums to ``n/2``) and ``eq7`` (one-vs-rest tangles plus twice
    the single-particle information sums to ``n``). Two-qubit inputs add one
    ``eq1`` report per qubit and three-qubit inputs add ``eq12``.
    """
    v = ket_of(psi)
    n = qubit_count(v.size)
    if not 1 <= n <= MAX_QUBITS:
        raise DimensionError(f"pure-state relations need 1..{MAX_QUBITS} qubits, got {n}")
    t_id = IDENTITY_TOL if tol is None else tol
    t_sp = SPECTRAL_TOL if tol is None else tol
    rho = np.outer(v, v.conj())
    props = qubit_properties(rho)
    marg = [mixedness(partial_trace(rho, n, {k})) for k in range(n)]
    s2 = [p.s2bar for p in props]
    out = []

    terms = {f"M{k}": marg[k] for k in range(n)} | {f"S2_{k}": s2[k] for k in range(n)}
    out.append(_report("eq6", terms, sum(marg) + sum(s2), n / 2, t_id))

    itang = [i_tangle_pure(v, k) for k in range(n)]
    terms = {f"tau_{k}R": itang[k] for k in range(n)} | {f"S2_{k}": s2[k] for k in range(n)}
    out.append(_report("eq7", terms, sum(itang) + 2 * sum(s2), n, t_id))

    if n == 2:
        c2 = concurrence_pure(v) ** 2
        for k, p in enumerate(props):
            terms = {"C2": c2, "nu2": p.coherence**2, "p2": p.predictability**2}
            out.append(_report(f"eq1:q{k}", terms, sum(terms.values()), 1.0, t_id))
    if n == 3:
        rt = residual_tangle(v)
        pair = rt.tau_12 + rt.tau_13 + rt.tau_23
        terms = {
            "tau_123": rt.tau_123,
            "tau_12": rt.tau_12,
            "tau_13": rt.tau_13,
            "tau_23": rt.tau_23,
        } | {f"S2_{k}": s2[k] for k in range(3)}
        lhs = rt.tau_123 + 2 / 3 * (pair + sum(s2))
        out.append(_report("eq12", terms, lhs, 1.0, t_sp))
    return out


def verify_two_qubit(rho, tol: float | None = None) -> list[RelationReport]:
    """Relations that hold for every two-qubit state, pure or mixed."""
    m = density_of(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a two-qubit state, got shape {m.shape}")
    t_id = IDENTITY_TOL if tol is None else tol
    t_sp = SPECTRAL_TOL if tol is None else tol
    trt = tr_rho_rhotilde(m)
    mix = mixedness(m)
    m1 = mixedness(partial_trace(m, 2, {0}))
    m2 = mixedness(partial_trace(m, 2, {1}))
    s1, s2 = (p.s2bar for p in qubit_properties(m))
    ind = indistinguishability(m)
    dhs = hs_to_spinflip(m)
    tau = tangle(m)
    eta = separable_uncertainty(m)

    return [
        _report("eq13", {"tr_rho_rhotilde": trt, "M": mix, "M1": m1, "M2": m2},
                trt + mix, m1 + m2, t_id),
        _report("eq14", {"tr_rho_rhotilde": trt, "M": mix, "S2_1": s1, "S2_2": s2},
                trt + mix + s1 + s2, 1.0, t_id),
        _report("eq17", {"tr_rho_rhotilde": trt, "M": mix, "I": ind},
                trt + mix, ind, t_id),
        _report("eq19", {"I": ind, "S2_1": s1, "S2_2": s2}, ind + s1 + s2, 1.0, t_id),
        _report("eq20", {"D_HS": dhs, "S2_1": s1, "S2_2": s2},
                dhs, math.sqrt(max(0.0, s1 + s2)), t_id),
        _report("eq27", {"eta": eta, "M1": m1, "M2": m2, "tau": tau},
                eta, m1 + m2 - tau, t_sp),
        _report("eq28", {"eta": eta, "tau": tau, "S2_1": s1, "S2_2": s2},
                eta + tau + s1 + s2, 1.0, t_sp),
    ]


def verify_monogamy(psi, tol: float = SPECTRAL_TOL) -> RelationReport:
    """Monogamy slack ``tau_k{ij} - tau_ki - tau_kj`` for all three pivots.

    The report carries every pivot's terms; ``lhs``/``rhs`` and the residual
    belong to the pivot with the smallest slack.
    """
    v = ket_of(psi)
    if v.size != 8:
        raise DimensionError(f"expected a three-qubit ket, got {v.size} amplitudes")
    rt = residual_tangle(v)
    pivots = [
        (rt.tau_1_23, rt.tau_12 + rt.tau_13),
        (rt.tau_2_13, rt.tau_12 + rt.tau_23),
        (rt.tau_3_12, rt.tau_13 + rt.tau_23),
    ]
    terms = {
        "tau_1_23": rt.tau_1_23, "tau_2_13": rt.tau_2_13, "tau_3_12": rt.tau_3_12,
        "tau_12": rt.tau_12, "tau_13": rt.tau_13, "tau_23": rt.tau_23,
    }
    slacks = [a - b for a, b in pivots]
    for k, s in enumerate(slacks):
        terms[f"slack_{k + 1}"] = s
    worst = int(np.argmin(slacks))
    lhs, rhs = pivots[worst]
    return _report("eq8", terms, lhs, rhs, tol, kind="inequality")


@dataclass(frozen=True)
class Eq16Report:
    """Both sides of the variance/covariance decomposition for a canonical state.

    ``lhs`` is measured on the constructed density matrix; ``rhs`` comes from
    the parameters alone.
    """

    variances: tuple[float, float, float, float]
    covariances: dict[str, float]
    mean_sq_coherence: float
    lhs: float
    rhs: float
    coherences: tuple[float, float]
    coherence_expected: float
    tolerance: float = 1e-10

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs

    @property
    def coherence_residual(self) -> float:
        return max(abs(c - self.coherence_expected) for c in self.coherences)

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.tolerance and self.coherence_residual <= self.tolerance


def verify_eq16(params: Form15Params, tol: float = 1e-10) -> Eq16Report:
    """Evaluate the variance/covariance form of ``Tr(rho rho~) + M(rho)``.

    ``variances`` are ``w_i (1 - w_i)``, the covariances ``C14 = -w1 w4`` and
    ``C23 = -w2 w3``; the right-hand side is
    ``sum(variances) - 2 C14 - 2 C23 - (nu_1^2 + nu_2^2) / 2`` with both
    coherences fixed to ``4|a|`` by the parameters.
    """
    rho = form15_state(params).matrix
    w = params.omega
    variances = tuple(x * (1 - x) for x in w)
    c14, c23 = -w[0] * w[3], -w[1] * w[2]
    nu_expected = 4 * abs(params.a)
    # half the sum of both qubits' squared coherences, each (4|a|)^2
    mean_sq = nu_expected**2
    rhs = sum(variances) - 2 * c14 - 2 * c23 - mean_sq
    lhs = tr_rho_rhotilde(rho) + mixedness(rho)
    nus = tuple(single_qubit_properties(partial_trace(rho, 2, {k})).coherence for k in range(2))
    return Eq16Report(variances, {"C14": c14, "C23": c23}, mean_sq, lhs, rhs,
                      nus, nu_expected, tol)


def verify_spin_flip_identity(rho, tol: float = IDENTITY_TOL) -> RelationReport:
    """``Tr(rho rho~) + M(rho) = I(rho, rho~)``, valid for any qubit count."""
    m = density_of(rho)
    trt, mix, ind = tr_rho_rhotilde(m), mixedness(m), indistinguishability(m)
    return _report("eq17", {"tr_rho_rhotilde": trt, "M": mix, "I": ind}, trt + mix, ind, tol)


def verify_mems(rho, tol: float = SPECTRAL_TOL) -> RelationReport:
    """``eta = M`` for the maximally entangled mixed states at fixed marginals."""
    m = density_of(rho)
    eta, mix = separable_uncertainty(m), mixedness(m)
    return _report("eq26", {"eta": eta, "M": mix}, eta, mix, tol)


def verify_state(state, tol: float | None = None) -> list[RelationReport]:
    """Every applicable relation for ``state``.

    Pure states get the pure-state relations, plus the two-qubit relations
    when ``n == 2`` and the monogamy check when ``n == 3``. Two-qubit density
    matrices get the two-qubit relations; other density matrices get the
    spin-flip identity only.
    """
    m = density_of(state)
    n = qubit_count(m.shape[0])
    pure = isinstance(state, PureState) or np.ndim(state) == 1
    out = []
    if pure:
        out += verify_pure(state, tol)
        if n == 3:
            out.append(verify_monogamy(state) if tol is None else verify_monogamy(state, tol))
    if n == 2:
        out += verify_two_qubit(m, tol)
    elif not pure:
        out.append(verify_spin_flip_identity(m) if tol is None else verify_spin_flip_identity(m, tol))
    return out
