"""Left-invariant CR structures on Lie groups and their extended frames.

A structure of type (n, k) is a real Lie algebra g of dimension 2n+k with a
complex subspace h of g_C (the (0,1) directions), closed under the bracket
and meeting its conjugate trivially.  Kept basis vectors xi_a (a < l) are
transverse to D_C = h + conj(h); the extended frame on G x R^l is

    Y_a = lam_a^g(t) xi_g + i d/dt^a,     a < l,

and the extension is of type (n+l, k-l).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .continuation import lambda_values
from .errors import (CRStructureError, InputError, IntersectsConjugate, NotIntegrable,
                     RankDeficient, StageFailure, TargetUnreachable)
from .fd import FDSpec, jacobian
from .lie_core import LieAlgebra
from .linalg import RANK_RTOL, numerical_rank, orthonormal_basis
from .mc_engine import R_MAX, CoordinatePoint
from .reports import ResidualTensor, point_json

COMMUTATION_TOL = 1e-8
CERTIFICATE_SAMPLES = 50
CERTIFICATE_RADIUS_FRACTION = 0.3


@dataclass(frozen=True, eq=False)
class GroupCRStructure:
    algebra: LieAlgebra
    h_basis: np.ndarray
    n: int
    k: int
    name: str | None = None

    def __post_init__(self):
        h = np.asarray(self.h_basis, dtype=complex).reshape(self.algebra.dim, -1)
        object.__setattr__(self, "h_basis", h)
        if self.n < 0 or self.k < 0 or 2 * self.n + self.k != self.algebra.dim:
            raise InputError(f"type ({self.n},{self.k}) needs dimension {2 * self.n + self.k}, "
                             f"algebra has {self.algebra.dim}")
        if h.shape[1] != self.n:
            raise InputError(f"h_basis has {h.shape[1]} columns, expected n={self.n}")
        if not self.algebra.is_real:
            raise InputError("a group CR structure needs real structure constants")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def permuted(self, perm) -> "GroupCRStructure":
        return GroupCRStructure(self.algebra.permuted(perm), self.h_basis[list(perm), :],
                                self.n, self.k, self.name)


@dataclass
class ValidationReport:
    valid: bool
    rank_h: int
    rank_h_conj: int
    integrability_defect: float
    violation: str | None = None
    witness: dict | None = None

    def __bool__(self):
        return self.valid

    def to_json(self) -> dict:
        return {"stage": "validate", "passed": self.valid, "rank_h": self.rank_h,
                "rank_h_plus_conj": self.rank_h_conj,
                "integrability_defect": self.integrability_defect,
                "violation": self.violation, "witness": self.witness}


def _rank_atol(m: np.ndarray) -> float:
    return RANK_RTOL * max(1.0, float(np.max(np.abs(m)))) if m.size else 0.0


def validate_cr_structure(structure: GroupCRStructure) -> ValidationReport:
    """Check rank n, h cap conj(h) = 0 and [h, h] in h.

    Raises RankDeficient, IntersectsConjugate or NotIntegrable (in that
    order of checking); the exception carries the report.
    """
    h = structure.h_basis
    n = structure.n
    rank_h = numerical_rank(h, atol=_rank_atol(h))
    both = np.hstack([h, h.conj()])
    rank_both = numerical_rank(both, atol=_rank_atol(both))

    defect, witness = 0.0, None
    q = orthonormal_basis(h, atol=_rank_atol(h))
    scale = max(1.0, structure.algebra.scale)
    for i in range(n):
        for j in range(i + 1, n):
            u, v = h[:, i], h[:, j]
            w = structure.algebra.bracket(u, v)
            r = w - q @ (q.conj().T @ w)
            d = float(np.linalg.norm(r)) / (scale * np.linalg.norm(u) * np.linalg.norm(v))
            if d > defect:
                defect, witness = d, {"columns": [i + 1, j + 1]}

    report = ValidationReport(True, rank_h, rank_both, defect)
    if rank_h != n:
        report.valid, report.violation = False, "rank"
        raise RankDeficient(f"h_basis has rank {rank_h}, expected n={n}", report)
    if rank_both != 2 * n:
        report.valid, report.violation = False, "h-cap-conj(h)"
        raise IntersectsConjugate(
            f"[h | conj(h)] has rank {rank_both} < 2n={2 * n}: h meets its conjugate", report)
    if defect > RANK_RTOL * 100:
        report.valid, report.violation, report.witness = False, "integrability", witness
        raise NotIntegrable(f"[h, h] leaves h: relative defect {defect:.3e} at {witness}", report)
    return report


@dataclass(frozen=True)
class BasisSelection:
    """``permutation[i]`` is the original index of the new i-th basis vector;
    the first ``ell`` of them are the kept transverse directions."""

    permutation: tuple[int, ...]
    ell: int

    @property
    def kept(self) -> tuple[int, ...]:
        return self.permutation[: self.ell]

    def to_json(self) -> dict:
        return {"permutation": [p + 1 for p in self.permutation], "ell": self.ell,
                "kept": [p + 1 for p in self.kept]}


def select_transverse_basis(structure: GroupCRStructure, target_ell: int | None = None) -> BasisSelection:
    """Greedy pivoted scan of xi_1..xi_s for directions transverse to D.

    xi_a is kept when it enlarges ``h + conj(h) + span(kept)``; this is
    stronger than enlarging ``h + span(kept)`` and is what makes the
    extended (0,1) space meet its conjugate trivially.  The direct sum
    ``h + span(kept)`` then has dimension n + ell as well.
    """
    s, n, k = structure.dim, structure.n, structure.k
    h = structure.h_basis
    if target_ell is not None and (target_ell < 0 or target_ell > k):
        raise TargetUnreachable(f"target l={target_ell} outside 0..k={k}")
    span = np.hstack([h, h.conj()])
    base_rank = numerical_rank(span, atol=_rank_atol(span)) if n else 0
    kept: list[int] = []
    for a in range(s):
        if target_ell is not None and len(kept) == target_ell:
            break
        trial = np.hstack([span, np.eye(s)[:, [a]]])
        if numerical_rank(trial, atol=_rank_atol(trial)) > base_rank + len(kept):
            kept.append(a)
            span = trial
    if target_ell is not None and len(kept) < target_ell:
        raise TargetUnreachable(f"only {len(kept)} transverse directions available, target {target_ell}")
    rest = [a for a in range(s) if a not in kept]
    return BasisSelection(tuple(kept + rest), len(kept))


@dataclass
class NotImaginaryReport:
    ok: bool
    witness: dict | None = None
    real_part_rank: int = 0

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"stage": "not_purely_imaginary", "passed": self.ok,
                "real_part_rank": self.real_part_rank, "witness": self.witness}


def _frame_matrix(structure: GroupCRStructure, selection: BasisSelection, frame):
    """Columns X_0..X_{s-1} in original coordinates, ordered as the permuted basis."""
    if frame is None:
        return np.eye(structure.dim)[:, list(selection.permutation)]
    frame = np.asarray(frame, dtype=complex)
    if frame.shape[0] != structure.dim:
        raise InputError("frame vectors must live in g_C")
    if frame.shape[1] < selection.ell:
        raise InputError("frame has fewer vectors than the selection keeps")
    return frame


def check_not_purely_imaginary(structure: GroupCRStructure, selection: BasisSelection,
                               frame=None) -> NotImaginaryReport:
    """Kept frame vectors X_j need ``X_j + conj(X_j) != 0`` and independent real parts.

    Independence is tested modulo D_C = h + conj(h), i.e. real parts must be
    transverse to D.  ``frame`` (s x m, columns in original coordinates)
    defaults to the kept basis vectors, which are real.
    """
    x = _frame_matrix(structure, selection, frame)[:, : selection.ell]
    re = x.real
    tol = _rank_atol(x)
    for j in range(selection.ell):
        if np.max(np.abs(re[:, j]), initial=0.0) <= tol:
            return NotImaginaryReport(False, {"vector": j + 1, "reason": "purely imaginary"})
    h = structure.h_basis
    d = np.hstack([h, h.conj()])
    full = np.hstack([d, re.astype(complex)])
    r_d = numerical_rank(d, atol=_rank_atol(d)) if structure.n else 0
    r_full = numerical_rank(full, atol=_rank_atol(full))
    rank_re = r_full - r_d
    if rank_re < selection.ell:
        return NotImaginaryReport(False, {"reason": "real parts dependent modulo D",
                                          "rank": rank_re, "expected": selection.ell}, rank_re)
    return NotImaginaryReport(True, None, rank_re)


@dataclass(frozen=True, eq=False)
class ExtendedFramePoint:
    """``vectors`` is ``(s + ell) x ell``; column a is ``lam_a ⊕ i e_a``
    with the g_C part in original coordinates."""

    base: np.ndarray
    vectors: np.ndarray

    @property
    def ell(self) -> int:
        return self.vectors.shape[1]


def _active_point(point, ell: int, s: int, r_max: float) -> np.ndarray:
    t = CoordinatePoint(point if point is not None else np.zeros(ell)).t
    if t.size == ell:
        t = np.concatenate([t, np.zeros(s - ell)])
    elif t.size != s or np.any(t[ell:]):
        raise InputError(f"point needs {ell} active coordinates")
    if np.any(np.iscomplex(t)):
        raise InputError("frame points are real")
    t = np.real(t).astype(float)
    if np.max(np.abs(t), initial=0.0) > r_max:
        raise InputError(f"point {t} outside validity radius {r_max}")
    return t


def build_extended_frame(structure: GroupCRStructure, selection: BasisSelection, point=None,
                         frame=None, r_max: float = R_MAX, lambda_fn=None) -> ExtendedFramePoint:
    """Frame vectors at ``point`` (the ell active coordinates, zero padded).

    ``lambda_fn(algebra, t)`` overrides the continued coefficients (used to
    inject deliberately wrong coefficients in negative controls).
    """
    s, ell = structure.dim, selection.ell
    t = _active_point(point, ell, s, r_max)
    alg = structure.algebra.permuted(selection.permutation)
    lam = (lambda_fn or lambda_values)(alg, t)
    x = _frame_matrix(structure, selection, frame)
    top = x @ lam[:, :ell]
    bottom = 1j * np.eye(ell)
    return ExtendedFramePoint(t[:ell], np.vstack([top, bottom]))


def commutation_residual(algebra: LieAlgebra, point, fd: FDSpec = FDSpec(), r_max: float = R_MAX,
                         lambda_fn=None, active: int | None = None) -> ResidualTensor:
    """Coefficient of xi_g in [Y_a, Y_b] for a, b < ``active`` (default: all s):

        C = lam_a^m lam_b^n c_mn^g + i (d_a lam_b^g - d_b lam_a^g).

    ``point`` has ``active`` coordinates (zero padded) or all s of them.
    ``lambda_fn(algebra, t)`` replaces the continued coefficients.
    """
    s = algebra.dim
    ell = s if active is None else active
    t = _active_point(point, ell, s, r_max)
    if fd.mode == "exact_polynomial" and lambda_fn is None:
        from .exact_poly import evaluate_with_derivatives
        lam, dlam = evaluate_with_derivatives(algebra, "lambda", t)
        dlam = dlam[:ell]
    else:
        fn = lambda_fn or lambda_values
        lam = np.asarray(fn(algebra, t))

        def restricted(x):
            return np.asarray(fn(algebra, np.concatenate([x, t[ell:]])))
        dlam, _ = jacobian(restricted, t[:ell], fd)
    lam_l = lam[:, :ell]
    deriv = np.einsum("agb->abg", dlam[:, :, :ell]) - np.einsum("bga->abg", dlam[:, :, :ell])
    brk = np.einsum("ma,nb,mng->abg", lam_l, lam_l, algebra.c)
    return ResidualTensor.from_upper(t, brk + 1j * deriv)


def verify_commutation(structure: GroupCRStructure, selection: BasisSelection, point=None,
                       fd: FDSpec = FDSpec(), r_max: float = R_MAX, lambda_fn=None) -> ResidualTensor:
    """Commutation residual of the extended frame, components in the permuted basis."""
    alg = structure.algebra.permuted(selection.permutation)
    return commutation_residual(alg, point, fd, r_max, lambda_fn, active=selection.ell)


@dataclass
class CRConditionReport:
    ok: bool
    rank: int
    expected: int
    at: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"passed": self.ok, "rank": self.rank, "expected": self.expected, "at": self.at}


def verify_cr_condition(structure: GroupCRStructure, frame: ExtendedFramePoint) -> CRConditionReport:
    """Rank of ``[h⊕0 | Y | conj(h)⊕0 | conj(Y)]`` must be ``2(n + ell)``."""
    ell = frame.ell
    h = structure.h_basis
    lifted = np.vstack([h, np.zeros((ell, structure.n))])
    m = np.hstack([lifted, frame.vectors, lifted.conj(), frame.vectors.conj()])
    r = numerical_rank(m, atol=_rank_atol(m))
    expected = 2 * (structure.n + ell)
    return CRConditionReport(r == expected, r, expected, point_json(frame.base))


@dataclass
class EmbeddingCertificate:
    structure_name: str | None
    n: int
    k: int
    ell: int | None = None
    stages: dict = field(default_factory=dict)
    failed_stage: str | None = None

    @property
    def passed(self) -> bool:
        return self.failed_stage is None and self.ell is not None

    @property
    def extension_type(self) -> tuple[int, int] | None:
        if self.ell is None:
            return None
        return (self.n + self.ell, self.k - self.ell)

    @property
    def complex_structure(self) -> bool:
        return self.passed and self.extension_type[1] == 0

    def to_json(self) -> dict:
        return {"structure": self.structure_name, "type": [self.n, self.k], "ell": self.ell,
                "extension_type": list(self.extension_type) if self.extension_type else None,
                "complex_structure": self.complex_structure, "passed": self.passed,
                "failed_stage": self.failed_stage, "stages": self.stages,
                "normalising_hypothesis": "automatic for group structures; not checked"}


def corollary_pipeline(structure: GroupCRStructure, fd: FDSpec = FDSpec(), r_max: float = R_MAX,
                       samples: int = CERTIFICATE_SAMPLES, seed: int = 0,
                       tol: float = COMMUTATION_TOL, target_ell: int | None = None) -> EmbeddingCertificate:
    """validate -> select (l = k) -> not-purely-imaginary -> commutation -> CR condition.

    Raises StageFailure carrying the partial certificate at the first failing stage.
    """
    cert = EmbeddingCertificate(structure.name, structure.n, structure.k)

    def fail(stage, msg, payload=None):
        cert.failed_stage = stage
        if payload is not None:
            cert.stages[stage] = payload
        raise StageFailure(stage, msg, cert)

    try:
        cert.stages["validate"] = validate_cr_structure(structure).to_json()
    except CRStructureError as exc:
        fail("validate", str(exc), exc.report.to_json() if exc.report else {"error": str(exc)})

    target = structure.k if target_ell is None else target_ell
    try:
        sel = select_transverse_basis(structure, target)
    except TargetUnreachable as exc:
        fail("select", str(exc), {"stage": "select", "passed": False, "error": str(exc)})
    cert.ell = sel.ell
    cert.stages["select"] = dict(sel.to_json(), stage="select", passed=True)

    npi = check_not_purely_imaginary(structure, sel)
    cert.stages["not_purely_imaginary"] = npi.to_json()
    if not npi:
        fail("not_purely_imaginary", str(npi.witness))

    rng = np.random.default_rng(seed)
    radius = CERTIFICATE_RADIUS_FRACTION * r_max
    pts = [np.zeros(sel.ell)] + [rng.uniform(-radius, radius, sel.ell) for _ in range(samples)]

    worst, witness = 0.0, None
    for p in pts:
        res = verify_commutation(structure, sel, p, fd, r_max)
        m = res.max_abs()
        if witness is None or m > worst:
            idx = res.argmax()
            worst, witness = m, {"point": point_json(p), "indices": [i + 1 for i in idx] if idx else None}
    commutation = {"stage": "commutation", "passed": worst <= tol, "max_residual": worst,
                   "tolerance": tol, "n_points": len(pts), "witness": witness}
    cert.stages["commutation"] = commutation
    if worst > tol:
        fail("commutation", f"max residual {worst:.3e} > {tol:.1e}")

    ranks = []
    bad = None
    for p in pts:
        rep = verify_cr_condition(structure, build_extended_frame(structure, sel, p, r_max=r_max))
        ranks.append(rep.rank)
        if not rep and bad is None:
            bad = rep.to_json()
    cr = {"stage": "cr_condition", "passed": bad is None, "expected_rank": 2 * (structure.n + sel.ell),
          "rank_at_origin": ranks[0], "min_rank": min(ranks), "max_rank": max(ranks),
          "n_points": len(pts), "witness": bad}
    cert.stages["cr_condition"] = cr
    if bad is not None:
        fail("cr_condition", f"rank {bad['rank']} != {bad['expected']} at t={bad['at']}")
    return cert
