"""Pluggable norm evaluators with declared capability flags.

Each descriptor carries three statically declared flags that gate which
registry checks apply: ``self_adjoint`` (N(T*) = N(T)), ``algebra``
(N(AB) <= N(A) N(B)) and ``unitarily_invariant`` (N(U* T U) = N(T)).
``check_flags`` audits the declared flags on random inputs; it never
discovers or overrides them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import matrices
from .sampling import SamplerSpec, sample

SCHATTEN_P_MAX = 64.0

FLAG_NAMES = ("self_adjoint", "algebra", "unitarily_invariant")

_AUDIT_REL_TOL = 1e-9


@dataclass(frozen=True)
class NormDescriptor:
    id: str
    self_adjoint: bool
    algebra: bool
    unitarily_invariant: bool
    p: float | None = None

    def has_flag(self, name: str) -> bool:
        return bool(getattr(self, name))


OP = NormDescriptor("op", True, True, True)
HS = NormDescriptor("hs", True, True, True)
TRACE = NormDescriptor("trace", True, True, True)
# the numerical radius is a norm but not submultiplicative
WNUM = NormDescriptor("wnum", True, False, True)


def schatten(p: float) -> NormDescriptor:
    p = float(p)
    if not p >= 1.0:
        raise ValueError(f"schatten exponent must satisfy p >= 1, got {p}")
    if p > SCHATTEN_P_MAX:
        raise ValueError(
            f"schatten exponent {p} exceeds the cap {SCHATTEN_P_MAX:g}; use 'op' instead"
        )
    return NormDescriptor(f"schatten:{p:g}", True, True, True, p=p)


def parse_norm(selector) -> NormDescriptor:
    """Parse a norm selector: op | hs | trace | schatten:<p> | wnum."""
    if isinstance(selector, NormDescriptor):
        return selector
    text = str(selector).strip().lower()
    fixed = {"op": OP, "hs": HS, "trace": TRACE, "wnum": WNUM}
    if text in fixed:
        return fixed[text]
    if text.startswith("schatten:"):
        try:
            p = float(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad schatten exponent in {selector!r}") from None
        return schatten(p)
    raise ValueError(f"unknown norm selector {selector!r}")


def kernel_code(nd: NormDescriptor) -> tuple[int, float]:
    """Kernel (code, p) for a descriptor.

    The grid kernels only ever evaluate norms of Hermitian pencils, and the
    numerical radius of a Hermitian matrix equals its operator norm, so
    ``wnum`` maps to the op code inside scans.
    """
    if nd.id in ("op", "wnum"):
        return 0, 0.0
    if nd.id == "hs":
        return 1, 0.0
    if nd.id == "trace":
        return 2, 0.0
    return 3, float(nd.p)


def norm_evaluate(norm, T) -> float:
    """Evaluate N(T) for a general (not necessarily Hermitian) matrix."""
    nd = parse_norm(norm)
    T = matrices.as_matrix(T)
    if nd.id == "hs":
        return matrices.frobenius_norm(T)
    if nd.id == "wnum":
        from .radius import w_N

        return w_N(T, OP).value
    sv = matrices.singular_values(T)
    if nd.id == "op":
        return float(sv[0])
    if nd.id == "trace":
        return float(sv.sum())
    return float((sv**nd.p).sum() ** (1.0 / nd.p))


@dataclass
class FlagAudit:
    """Result of a randomized audit of a descriptor's declared flags."""

    norm_id: str
    samples: int
    seed: int
    checked: tuple[str, ...]
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_flags(norm, samples: int, seed: int) -> FlagAudit:
    """Audit declared flags on ``samples`` seeded random inputs.

    Only flags declared true are asserted; a false flag is never exercised
    (the numerical radius's missing algebra property is not a failure).
    Failures name the offending flag and sample seed.
    """
    nd = parse_norm(norm)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    checked = tuple(name for name in FLAG_NAMES if nd.has_flag(name))
    audit = FlagAudit(nd.id, samples, seed, checked)
    for i in range(samples):
        n = 2 + (i % 3)
        base = seed + 4 * i
        T = sample(SamplerSpec("ginibre", n, base))
        value = norm_evaluate(nd, T)
        scale = max(1.0, value)
        if nd.self_adjoint:
            gap = abs(norm_evaluate(nd, T.conj().T) - value)
            if gap > _AUDIT_REL_TOL * scale:
                audit.failures.append(f"self_adjoint sample seed {base}: gap {gap:.3e}")
        if nd.algebra:
            A = sample(SamplerSpec("ginibre", n, base + 1))
            B = sample(SamplerSpec("ginibre", n, base + 2))
            bound = norm_evaluate(nd, A) * norm_evaluate(nd, B)
            excess = norm_evaluate(nd, A @ B) - bound
            if excess > _AUDIT_REL_TOL * max(1.0, bound):
                audit.failures.append(f"algebra sample seed {base}: excess {excess:.3e}")
        if nd.unitarily_invariant:
            U = sample(SamplerSpec("unitary", n, base + 3))
            gap = abs(norm_evaluate(nd, U.conj().T @ T @ U) - value)
            if gap > _AUDIT_REL_TOL * scale:
                audit.failures.append(
                    f"unitarily_invariant sample seed {base}: gap {gap:.3e}"
                )
    return audit
