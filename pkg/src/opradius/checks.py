"""Executable registry of radius inequalities and identities.

Every check pairs an applicability predicate (norm flags, input class, fixed
norm ids) with lhs/rhs evaluators over a shared ``CheckContext``.  Radius
values are certified lower estimates, so an apparent violation of a bound
first escalates the grids (doubling, up to ``escalation_rounds``) before the
verdict says so.  Identities are classified by two-sided slack.

Verdict JSON lines follow the wire contract
``{"check", "norm", "lhs", "rhs", "slack", "status"}``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import matrices
from .norms import NormDescriptor, parse_norm
from .radius import RadiusOptions, w2_closed_form, w_N_multi, w_Ne_multi
from .sampling import FAMILIES, SamplerSpec, SplitMix64, sample, sample_pair

VIOL_TOL = 1e-6
SHARP_TOL = 1e-3

_HERM_REL_TOL = 1e-12

RT2 = math.sqrt(2.0)

INPUT_TAGS = ("any", "hermitian_pair", "single_operator", "pair_with_adjoint")

STATUS_PASS = "pass"
STATUS_VIOLATION = "violation"
STATUS_SHARP = "sharp"
STATUS_SKIPPED = "skipped"


@dataclass(frozen=True)
class InequalityCheck:
    id: str
    description: str
    kind: str  # "bound" (lhs <= rhs) or "identity" (lhs = rhs)
    input_tag: str
    lhs: Callable
    rhs: Callable
    requires_flags: frozenset = frozenset()
    norm_ids: frozenset | None = None  # None: applies to every norm
    reference: str = ""


@dataclass(frozen=True)
class Verdict:
    check_id: str
    norm_id: str
    lhs: float
    rhs: float
    slack: float
    status: str
    escalations_used: int = 0
    description: str = ""

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "check": self.check_id,
                "norm": self.norm_id,
                "lhs": self.lhs,
                "rhs": self.rhs,
                "slack": self.slack,
                "status": self.status,
            }
        )


class CheckContext:
    """Shared lazy cache of derived matrices and radius values for one pair.

    Radius caches are keyed by escalation level; exact norm evaluations are
    level-independent.  ``fuse_norms`` lists the descriptors each fused grid
    pass should serve (one sphere scan covers all of them).
    """

    def __init__(self, B, C, opts=None, unitary_seed: int = 0, fuse_norms=()):
        B = matrices.as_matrix(B)
        C = matrices.as_matrix(C)
        if B.shape != C.shape:
            raise ValueError(f"dimension mismatch: {B.shape} vs {C.shape}")
        self.opts0 = opts or RadiusOptions()
        self.level = 0
        self.unitary_seed = unitary_seed
        self.fuse_norms = [parse_norm(nd) for nd in fuse_norms]
        self._mats = {"B": B, "C": C}
        self._wn: dict = {}
        self._wne: dict = {}
        self._nrm: dict = {}

    # ---- derived matrices

    def matrix(self, name: str) -> np.ndarray:
        if name not in self._mats:
            self._mats[name] = self._build(name)
        return self._mats[name]

    def _build(self, name: str) -> np.ndarray:
        B = self._mats["B"]
        C = self._mats["C"]
        adj = matrices.adjoint
        if name == "B*":
            return adj(B)
        if name == "C*":
            return adj(C)
        if name == "B+C":
            return B + C
        if name == "B-C":
            return B - C
        if name == "ReB":
            return matrices.cartesian_parts(B)[0]
        if name == "ImB":
            return matrices.cartesian_parts(B)[1]
        if name == "ReB+ImB":
            return self.matrix("ReB") + self.matrix("ImB")
        if name == "ReB-ImB":
            return self.matrix("ReB") - self.matrix("ImB")
        if name == "B+B*":
            return B + adj(B)
        if name == "B-B*":
            return B - adj(B)
        if name == "B+e45C":
            return B + np.exp(1j * math.pi / 4.0) * C
        if name == "B+e90C":
            return B + 1j * C
        if name == "B+e45B*":
            return B + np.exp(1j * math.pi / 4.0) * adj(B)
        if name == "B+e90B*":
            return B + 1j * adj(B)
        if name == "B*B+C*C":
            return adj(B) @ B + adj(C) @ C
        if name == "BB*+CC*":
            return B @ adj(B) + C @ adj(C)
        if name == "B*B+BB*":
            return adj(B) @ B + B @ adj(B)
        if name == "B2+C2":
            return B @ B + C @ C
        if name in ("UB", "UC"):
            n = B.shape[0]
            U = self._mats.get("_U")
            if U is None:
                U = sample(SamplerSpec("unitary", n, self.unitary_seed))
                self._mats["_U"] = U
            T = B if name == "UB" else C
            return U.conj().T @ T @ U
        raise KeyError(f"unknown derived matrix {name!r}")

    # ---- cached evaluations

    def opts(self) -> RadiusOptions:
        return self.opts0 if self.level == 0 else self.opts0.scaled(2**self.level)

    def _fused(self, nd: NormDescriptor):
        if any(other.id == nd.id for other in self.fuse_norms):
            return self.fuse_norms
        return self.fuse_norms + [nd]

    def w_N(self, name: str, nd: NormDescriptor) -> float:
        key = (name, nd.id, self.level)
        if key not in self._wn:
            results = w_N_multi(self.matrix(name), self._fused(nd), self.opts())
            for norm_id, res in results.items():
                self._wn[(name, norm_id, self.level)] = res.value
        return self._wn[key]

    def w_Ne(self, name_b: str, name_c: str, nd: NormDescriptor) -> float:
        key = (name_b, name_c, nd.id, self.level)
        if key not in self._wne:
            results = w_Ne_multi(
                self.matrix(name_b), self.matrix(name_c), self._fused(nd), self.opts()
            )
            for norm_id, res in results.items():
                self._wne[(name_b, name_c, norm_id, self.level)] = res.value
        return self._wne[key]

    def nrm(self, name: str, nd: NormDescriptor) -> float:
        from .norms import norm_evaluate

        key = (name, nd.id)
        if key not in self._nrm:
            self._nrm[key] = norm_evaluate(nd, self.matrix(name))
        return self._nrm[key]

    # ---- input classification

    def is_hermitian_pair(self) -> bool:
        return self._hermitian("B") and self._hermitian("C")

    def _hermitian(self, name: str) -> bool:
        M = self.matrix(name)
        scale = float(np.linalg.norm(M))
        return float(np.linalg.norm(M - M.conj().T)) <= _HERM_REL_TOL * max(scale, 1e-300)

    def is_pair_with_adjoint(self) -> bool:
        B = self.matrix("B")
        C = self.matrix("C")
        scale = max(float(np.linalg.norm(B)), 1e-300)
        return float(np.linalg.norm(C - B.conj().T)) <= _HERM_REL_TOL * scale


# ---------------------------------------------------------------------------
# evaluators


def _tr(M) -> complex:
    return complex(np.trace(M))


def _fro_sq(M) -> float:
    return float(np.linalg.norm(M)) ** 2


def _hs_lower_terms(ctx: CheckContext) -> float:
    B = ctx.matrix("B")
    C = ctx.matrix("C")
    quad = abs(_tr(B @ B) + _tr(C @ C) + 2.0 * _tr(B @ C))
    mixed = _fro_sq(B) + _fro_sq(C) + 2.0 * (_tr(B @ C.conj().T)).real
    return 0.25 * quad + 0.25 * mixed


def _hs_lower_sum_diff(ctx: CheckContext) -> float:
    s = ctx.matrix("B+C")
    d = ctx.matrix("B-C")
    quad = abs(_tr(s @ s) + _tr(d @ d) + 2.0 * _tr(s @ d))
    return (
        0.125 * quad
        + 0.125 * (_fro_sq(s) + _fro_sq(d))
        + 0.25 * (_tr(s @ d.conj().T)).real
    )


def _hs_upper_terms(ctx: CheckContext) -> float:
    B = ctx.matrix("B")
    C = ctx.matrix("C")
    return 0.5 * (
        max(abs(_tr(B @ B)), abs(_tr(C @ C)))
        + abs(_tr(B @ C))
        + max(_fro_sq(B), _fro_sq(C))
        + abs(_tr(B @ C.conj().T))
    )


_REGISTRY: list[InequalityCheck] | None = None


def _bound(id_, desc, tag, lhs, rhs, flags=(), norm_ids=None, reference=""):
    return InequalityCheck(
        id_, desc, "bound", tag, lhs, rhs,
        requires_flags=frozenset(flags),
        norm_ids=frozenset(norm_ids) if norm_ids else None,
        reference=reference,
    )


def _identity(id_, desc, tag, lhs, rhs, flags=(), norm_ids=None, reference=""):
    return InequalityCheck(
        id_, desc, "identity", tag, lhs, rhs,
        requires_flags=frozenset(flags),
        norm_ids=frozenset(norm_ids) if norm_ids else None,
        reference=reference,
    )


def _build_registry() -> list[InequalityCheck]:
    checks: list[InequalityCheck] = []
    add = checks.append

    # classical single-operator radius bounds (operator norm)
    add(_bound(
        "eq11.lower", "half the operator norm bounds the radius below",
        "single_operator",
        lambda ctx, nd: 0.5 * ctx.nrm("B", nd),
        lambda ctx, nd: ctx.w_N("B", nd),
        norm_ids=("op",), reference="classical radius bounds",
    ))
    add(_bound(
        "eq11.upper", "the radius is bounded by the operator norm",
        "single_operator",
        lambda ctx, nd: ctx.w_N("B", nd),
        lambda ctx, nd: ctx.nrm("B", nd),
        norm_ids=("op",), reference="classical radius bounds",
    ))
    add(_bound(
        "eq12.lower", "quarter of ||T*T+TT*|| bounds the squared radius below",
        "single_operator",
        lambda ctx, nd: 0.25 * ctx.nrm("B*B+BB*", nd),
        lambda ctx, nd: ctx.w_N("B", nd) ** 2,
        norm_ids=("op",), reference="classical radius bounds",
    ))
    add(_bound(
        "eq12.upper", "the squared radius is at most half of ||T*T+TT*||",
        "single_operator",
        lambda ctx, nd: ctx.w_N("B", nd) ** 2,
        lambda ctx, nd: 0.5 * ctx.nrm("B*B+BB*", nd),
        norm_ids=("op",), reference="classical radius bounds",
    ))

    # classical pair-radius bounds (operator norm)
    add(_bound(
        "eq13.lower", "(sqrt2/4) ||B*B+C*C||^(1/2) bounds the pair radius below",
        "any",
        lambda ctx, nd: (RT2 / 4.0) * math.sqrt(ctx.nrm("B*B+C*C", nd)),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        norm_ids=("op",), reference="classical pair-radius bounds",
    ))
    add(_bound(
        "eq13.upper", "the pair radius is at most ||B*B+C*C||^(1/2)",
        "any",
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        lambda ctx, nd: math.sqrt(ctx.nrm("B*B+C*C", nd)),
        norm_ids=("op",), reference="classical pair-radius bounds",
    ))
    add(_bound(
        "eq15.lower", "half the radius of B^2+C^2 bounds the squared pair radius",
        "any",
        lambda ctx, nd: 0.5 * ctx.w_N("B2+C2", nd),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        norm_ids=("op",), reference="classical pair-radius bounds",
    ))
    add(_bound(
        "eq15.upper", "the squared pair radius is at most ||B*B+C*C||",
        "any",
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        lambda ctx, nd: ctx.nrm("B*B+C*C", nd),
        norm_ids=("op",), reference="classical pair-radius bounds",
    ))

    # pair-norm structural identities
    add(_identity(
        "prop.a", "pair radius equals (1/sqrt2) of the radius of (B+C, B-C)",
        "any",
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        lambda ctx, nd: ctx.w_Ne("B+C", "B-C", nd) / RT2,
        reference="pair-norm properties",
    ))
    add(_identity(
        "prop.b1", "the (Re B, Im B) radius equals (1/sqrt2) of the (B, B*) radius",
        "single_operator",
        lambda ctx, nd: ctx.w_Ne("ReB", "ImB", nd),
        lambda ctx, nd: ctx.w_Ne("B", "B*", nd) / RT2,
        flags=("self_adjoint",), reference="pair-norm properties",
    ))
    add(_identity(
        "prop.b2", "(1/sqrt2) of the (B, B*) radius equals the radius of B",
        "single_operator",
        lambda ctx, nd: ctx.w_Ne("B", "B*", nd) / RT2,
        lambda ctx, nd: ctx.w_N("B", nd),
        flags=("self_adjoint",), reference="pair-norm properties",
    ))
    add(_identity(
        "prop.c", "the (B, B) radius equals sqrt2 times the radius of B",
        "single_operator",
        lambda ctx, nd: ctx.w_Ne("B", "B", nd),
        lambda ctx, nd: RT2 * ctx.w_N("B", nd),
        reference="pair-norm properties",
    ))
    add(_identity(
        "prop.d", "the pair radius is invariant under taking adjoints",
        "any",
        lambda ctx, nd: ctx.w_Ne("B*", "C*", nd),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        flags=("self_adjoint",), reference="pair-norm properties",
    ))
    add(_identity(
        "prop.e", "the pair radius is weakly unitarily invariant",
        "any",
        lambda ctx, nd: ctx.w_Ne("UB", "UC", nd),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        flags=("unitarily_invariant",), reference="pair-norm properties",
    ))

    # componentwise bounds
    add(_bound(
        "thm24.lower", "max of the componentwise radii bounds the pair radius",
        "any",
        lambda ctx, nd: max(ctx.w_N("B", nd), ctx.w_N("C", nd)),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        reference="componentwise bounds",
    ))
    add(_bound(
        "thm24.upper", "the pair radius is at most the quadrature of the radii",
        "any",
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        lambda ctx, nd: math.hypot(ctx.w_N("B", nd), ctx.w_N("C", nd)),
        reference="componentwise bounds",
    ))
    add(_bound(
        "thm26.lower", "(1/sqrt2) max radius of B+-C bounds the pair radius",
        "any",
        lambda ctx, nd: max(ctx.w_N("B+C", nd), ctx.w_N("B-C", nd)) / RT2,
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        reference="componentwise bounds",
    ))
    add(_bound(
        "thm26.upper", "the pair radius is at most (1/sqrt2) quadrature over B+-C",
        "any",
        lambda ctx, nd: ctx.w_Ne("B", "C", nd),
        lambda ctx, nd: math.hypot(ctx.w_N("B+C", nd), ctx.w_N("B-C", nd)) / RT2,
        reference="componentwise bounds",
    ))
    add(_bound(
        "cor28.lower", "half the max radius of T+-T* bounds the radius of T",
        "single_operator",
        lambda ctx, nd: 0.5 * max(ctx.w_N("B+B*", nd), ctx.w_N("B-B*", nd)),
        lambda ctx, nd: ctx.w_N("B", nd),
        reference="componentwise bounds",
    ))
    add(_bound(
        "cor28.upper", "the radius of T is at most half the quadrature over T+-T*",
        "single_operator",
        lambda ctx, nd: ctx.w_N("B", nd),
        lambda ctx, nd: 0.5 * math.hypot(ctx.w_N("B+B*", nd), ctx.w_N("B-B*", nd)),
        reference="componentwise bounds",
    ))

    # phase-shifted lower bounds, spot-checked on a fixed phase set
    for tag, combo in (("th0", "B+C"), ("th45", "B+e45C"), ("th90", "B+e90C"), ("th180", "B-C")):
        add(_bound(
            f"thm210.{tag}",
            "half the radius of B+e^(i theta)C plus the radius gap bounds the pair radius",
            "any",
            lambda ctx, nd, combo=combo: 0.5 * ctx.w_N(combo, nd)
            + 0.5 * abs(ctx.w_N("B", nd) - ctx.w_N("C", nd)),
            lambda ctx, nd: ctx.w_Ne("B", "C", nd),
            reference="phase-shifted bounds",
        ))
    for tag, combo in (
        ("th0", "B+B*"), ("th45", "B+e45B*"), ("th90", "B+e90B*"), ("th180", "B-B*"),
    ):
        add(_bound(
            f"eq214.{tag}",
            "the radius of T dominates the radius of T+e^(i theta)T* over 2 sqrt2",
            "single_operator",
            lambda ctx, nd, combo=combo: ctx.w_N(combo, nd) / (2.0 * RT2),
            lambda ctx, nd: ctx.w_N("B", nd),
            reference="phase-shifted bounds",
        ))

    # gram-term lower bounds (algebra + self-adjoint norms)
    def _radius_gap_term(ctx, nd):
        return 0.5 * max(ctx.w_N("B", nd), ctx.w_N("C", nd)) * abs(
            ctx.w_N("B+C", nd) - ctx.w_N("B-C", nd)
        )

    add(_bound(
        "thm213", "gram term N(C*C+B*B)/8 plus radius-gap term bounds the squared pair radius",
        "any",
        lambda ctx, nd: 0.125 * ctx.nrm("B*B+C*C", nd) + _radius_gap_term(ctx, nd),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        flags=("algebra", "self_adjoint"), reference="gram-term bounds",
    ))
    add(_bound(
        "thm213.alt", "gram term N(BB*+CC*)/8 plus radius-gap term bounds the squared pair radius",
        "any",
        lambda ctx, nd: 0.125 * ctx.nrm("BB*+CC*", nd) + _radius_gap_term(ctx, nd),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        flags=("algebra", "self_adjoint"), reference="gram-term bounds",
    ))
    add(_bound(
        "cor214", "hermitian pair: N(C^2+B^2)/8 plus norm-gap term bounds the squared pair radius",
        "hermitian_pair",
        lambda ctx, nd: 0.125 * ctx.nrm("B2+C2", nd)
        + 0.5 * max(ctx.nrm("B", nd), ctx.nrm("C", nd))
        * abs(ctx.nrm("B+C", nd) - ctx.nrm("B-C", nd)),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        flags=("algebra", "self_adjoint"), reference="gram-term bounds",
    ))
    add(_bound(
        "cor215", "N(T*T+TT*)/16 plus cartesian norm-gap term bounds the squared radius",
        "single_operator",
        lambda ctx, nd: ctx.nrm("B*B+BB*", nd) / 16.0
        + 0.5 * max(ctx.nrm("ReB", nd), ctx.nrm("ImB", nd))
        * abs(ctx.nrm("ReB+ImB", nd) - ctx.nrm("ReB-ImB", nd)),
        lambda ctx, nd: ctx.w_N("B", nd) ** 2,
        flags=("algebra", "self_adjoint"), reference="gram-term bounds",
    ))
    add(_bound(
        "cor216", "N(T*T+TT*)/16 plus radius-weighted cartesian gap bounds the squared radius",
        "single_operator",
        lambda ctx, nd: ctx.nrm("B*B+BB*", nd) / 16.0
        + 0.5 * ctx.w_N("B", nd) * abs(ctx.nrm("ReB", nd) - ctx.nrm("ImB", nd)),
        lambda ctx, nd: ctx.w_N("B", nd) ** 2,
        flags=("algebra", "self_adjoint"), reference="gram-term bounds",
    ))
    add(_bound(
        "cor217", "gram term N(C*C+B*B)/8 plus swapped radius-gap term bounds the squared pair radius",
        "any",
        lambda ctx, nd: 0.125 * ctx.nrm("B*B+C*C", nd)
        + 0.5 * max(ctx.w_N("B+C", nd), ctx.w_N("B-C", nd))
        * abs(ctx.w_N("B", nd) - ctx.w_N("C", nd)),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        flags=("algebra", "self_adjoint"), reference="gram-term bounds",
    ))

    # cartesian-part bounds
    add(_bound(
        "remark24.lower", "max cartesian-part norm bounds the radius below",
        "single_operator",
        lambda ctx, nd: max(ctx.nrm("ReB", nd), ctx.nrm("ImB", nd)),
        lambda ctx, nd: ctx.w_N("B", nd),
        flags=("self_adjoint",), reference="cartesian-part bounds",
    ))
    add(_bound(
        "remark24.upper", "the radius is at most the quadrature of cartesian-part norms",
        "single_operator",
        lambda ctx, nd: ctx.w_N("B", nd),
        lambda ctx, nd: math.hypot(ctx.nrm("ReB", nd), ctx.nrm("ImB", nd)),
        flags=("self_adjoint",), reference="cartesian-part bounds",
    ))
    add(_bound(
        "remark27.lower", "(1/sqrt2) max norm of Re T +- Im T bounds the radius below",
        "single_operator",
        lambda ctx, nd: max(ctx.nrm("ReB+ImB", nd), ctx.nrm("ReB-ImB", nd)) / RT2,
        lambda ctx, nd: ctx.w_N("B", nd),
        flags=("self_adjoint",), reference="cartesian-part bounds",
    ))
    add(_bound(
        "remark27.upper", "the radius is at most (1/sqrt2) quadrature over Re T +- Im T",
        "single_operator",
        lambda ctx, nd: ctx.w_N("B", nd),
        lambda ctx, nd: math.hypot(ctx.nrm("ReB+ImB", nd), ctx.nrm("ReB-ImB", nd)) / RT2,
        flags=("self_adjoint",), reference="cartesian-part bounds",
    ))

    # trace-form bounds, hs norm only
    add(_bound(
        "thm31", "trace-form expression bounds the squared hs pair radius below",
        "any",
        lambda ctx, nd: _hs_lower_terms(ctx),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        norm_ids=("hs",), reference="trace-form bounds",
    ))
    add(_bound(
        "cor32p", "trace-form expression over (B+C, B-C) bounds the squared hs pair radius",
        "any",
        lambda ctx, nd: _hs_lower_sum_diff(ctx),
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        norm_ids=("hs",), reference="trace-form bounds",
    ))
    add(_bound(
        "thm34", "the squared hs pair radius is at most the halved trace-form sum",
        "any",
        lambda ctx, nd: ctx.w_Ne("B", "C", nd) ** 2,
        lambda ctx, nd: _hs_upper_terms(ctx),
        norm_ids=("hs",), reference="trace-form bounds",
    ))
    add(_identity(
        "id.w2", "squared hs radius equals ||T||_2^2/2 + |tr T^2|/2",
        "single_operator",
        lambda ctx, nd: ctx.w_N("B", nd) ** 2,
        lambda ctx, nd: w2_closed_form(ctx.matrix("B")) ** 2,
        norm_ids=("hs",), reference="trace-form bounds",
    ))
    return checks


def registry() -> list[InequalityCheck]:
    """The full check list, built once, deterministic order."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    return list(_REGISTRY)


def lookup(check_id: str) -> InequalityCheck | None:
    for check in registry():
        if check.id == check_id:
            return check
    return None


# ---------------------------------------------------------------------------
# verdicts


def _applicable(check: InequalityCheck, ctx: CheckContext, nd: NormDescriptor):
    if check.norm_ids is not None and nd.id not in check.norm_ids:
        return False, f"requires norm in {sorted(check.norm_ids)}"
    for flag in check.requires_flags:
        if not nd.has_flag(flag):
            return False, f"norm lacks {flag}"
    if check.input_tag == "hermitian_pair" and not ctx.is_hermitian_pair():
        return False, "inputs are not a hermitian pair"
    if check.input_tag == "pair_with_adjoint" and not ctx.is_pair_with_adjoint():
        return False, "second input is not the adjoint of the first"
    return True, ""


def _classify(kind: str, lhs: float, rhs: float) -> str:
    slack = rhs - lhs
    scale = max(1.0, abs(rhs))
    if kind == "identity":
        return STATUS_VIOLATION if abs(slack) > VIOL_TOL * scale else STATUS_SHARP
    if slack < -VIOL_TOL * scale:
        return STATUS_VIOLATION
    if abs(slack) <= SHARP_TOL * scale:
        return STATUS_SHARP
    return STATUS_PASS


def _run_with_context(check: InequalityCheck, ctx: CheckContext, nd: NormDescriptor) -> Verdict:
    ok, why = _applicable(check, ctx, nd)
    if not ok:
        return Verdict(check.id, nd.id, 0.0, 0.0, 0.0, STATUS_SKIPPED, description=why)
    level = 0
    try:
        while True:
            ctx.level = level
            lhs = float(check.lhs(ctx, nd))
            rhs = float(check.rhs(ctx, nd))
            status = _classify(check.kind, lhs, rhs)
            if status != STATUS_VIOLATION or level >= ctx.opts0.escalation_rounds:
                break
            level += 1
    except (matrices.ConvergenceError, RuntimeError) as exc:
        return Verdict(
            check.id, nd.id, 0.0, 0.0, 0.0, STATUS_SKIPPED,
            description=f"error: {exc}",
        )
    finally:
        ctx.level = 0
    return Verdict(check.id, nd.id, lhs, rhs, rhs - lhs, status, escalations_used=level)


def run_check(check, B, C, norm, opts=None, unitary_seed: int = 0) -> Verdict:
    """Evaluate one check on one pair under one norm (with escalation)."""
    if isinstance(check, str):
        found = lookup(check)
        if found is None:
            raise ValueError(f"unknown check id {check!r}")
        check = found
    nd = parse_norm(norm)
    ctx = CheckContext(B, C, opts, unitary_seed, fuse_norms=[nd])
    return _run_with_context(check, ctx, nd)


def run_suite(B, C, norms, opts=None, unitary_seed: int = 0) -> list[Verdict]:
    """Run every registry check against every norm; one shared cache.

    Verdict order is deterministic: registry order outer, norm order inner.
    """
    descriptors = [parse_norm(nd) for nd in norms]
    ctx = CheckContext(B, C, opts, unitary_seed, fuse_norms=descriptors)
    out: list[Verdict] = []
    for check in registry():
        for nd in descriptors:
            out.append(_run_with_context(check, ctx, nd))
    return out


def suite_exit_code(verdicts) -> int:
    return 2 if any(v.status == STATUS_VIOLATION for v in verdicts) else 0


# ---------------------------------------------------------------------------
# sharpness search


@dataclass
class SharpnessResult:
    check_id: str
    norm_id: str
    family: str
    iters: int
    seed: int
    min_relative_slack: float
    best_B: np.ndarray = field(repr=False, default=None)
    best_C: np.ndarray = field(repr=False, default=None)
    evaluated: int = 0


def _parse_family_arg(family: str, n: int | None):
    if ":" in family:
        name, n_s = family.split(":", 1)
        return name, int(n_s)
    return family, (n or 2)


def search_sharpness(
    check_id: str, norm, family: str, iters: int, seed: int,
    n: int | None = None, opts=None, polish_steps: int = 64,
) -> SharpnessResult:
    """Random-restart search for near-equality instances of a check.

    Samples ``iters`` pairs from the family, tracks the smallest relative
    slack |rhs - lhs| / max(1, |rhs|), then polishes the best pair with
    entrywise gaussian perturbation hill-climbing (step halving).  Never
    claims optimality; the returned slack is simply the best found.
    """
    check = lookup(check_id)
    if check is None:
        raise ValueError(f"unknown check id {check_id!r}")
    nd = parse_norm(norm)
    fam, dim = _parse_family_arg(family, n)
    if fam not in FAMILIES:
        raise ValueError(f"unknown family {fam!r}; choose from {FAMILIES}")
    if iters < 1:
        raise ValueError("iters must be >= 1")

    def rel_slack(B, C):
        verdict = run_check(check, B, C, nd, opts)
        if verdict.status == STATUS_SKIPPED:
            return None
        return abs(verdict.slack) / max(1.0, abs(verdict.rhs))

    best = None
    best_pair = None
    evaluated = 0
    for i in range(iters):
        B, C = sample_pair(fam, dim, seed + i)
        value = rel_slack(B, C)
        if value is None:
            continue
        evaluated += 1
        if best is None or value < best:
            best, best_pair = value, (B, C)
    if best_pair is None:
        raise ValueError(f"no applicable sample for {check_id} in family {fam!r}")

    rng = SplitMix64((seed << 8) ^ 0xA5A5A5A5)
    B, C = best_pair
    hermitian_inputs = check.input_tag == "hermitian_pair"
    sigma = 0.25 * max(1.0, float(np.linalg.norm(B)))
    for _ in range(polish_steps):
        if sigma < 1e-12:
            break
        G1 = rng.complex_gaussians(dim * dim).reshape(dim, dim)
        G2 = rng.complex_gaussians(dim * dim).reshape(dim, dim)
        if hermitian_inputs:
            G1 = (G1 + G1.conj().T) / 2.0
            G2 = (G2 + G2.conj().T) / 2.0
        Bp = B + sigma * G1
        Cp = C if check.input_tag == "single_operator" else C + sigma * G2
        value = rel_slack(Bp, Cp)
        if value is not None and value < best:
            best, B, C = value, Bp, Cp
        else:
            sigma *= 0.5
    return SharpnessResult(
        check.id, nd.id, fam, iters, seed, float(best), B, C, evaluated
    )
