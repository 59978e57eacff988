"""One checker per inequality, each returning a :class:`Verdict`.

Determinantal checks are evaluated on a trace-normalized copy of the input.
Every compared quantity is homogeneous of the same degree, so the truth value
is unchanged; ``Verdict.scale`` and ``Verdict.degree`` let callers recover the
unnormalized numbers (see :meth:`Verdict.rescaled`).

A failed hypothesis raises :class:`~partrace.errors.HypothesisError`; it is
never reported as a violated inequality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from partrace.blockops import (
    BlockMatrix,
    assemble,
    block_at,
    embed_left,
    embed_right,
    partial_trace_1,
    partial_trace_2,
)
from partrace.cones import cartesian_parts, is_ppt, is_psd, loewner_ge, sector_margin
from partrace.errors import DomainError, HypothesisError
from partrace.matkernel import eigvalsh, fro_norm, lu_det, schatten_norm, singular_values

SCALAR_REL = 1e-9
LOEWNER_REL = 1e-8
# Slack when comparing a requested sector angle with the measured one.
ALPHA_SLACK = 1e-9


@dataclass(frozen=True)
class Verdict:
    id: str
    terms: dict
    lhs: float
    rhs: float
    gap: float
    tolerance: float
    holds: bool
    scale_note: str = ""
    scale: float = 1.0
    degree: int = 0
    extras: dict = field(default_factory=dict)

    def rescaled(self) -> tuple[float, float, float]:
        """``(lhs, rhs, gap)`` in the units of the unnormalized input."""
        f = self.scale ** self.degree
        return self.lhs * f, self.rhs * f, self.gap * f


def _scalar(id_, terms, lhs, rhs, *, scale=1.0, degree=0, note="", extras=None):
    gap = lhs - rhs
    tol = SCALAR_REL * max(1.0, abs(lhs), abs(rhs))
    return Verdict(id_, {k: float(v) for k, v in terms.items()}, float(lhs), float(rhs),
                   float(gap), tol, bool(gap >= -tol), note, float(scale), degree, dict(extras or {}))


def _loewner(id_, diff, a_fro, *, scale=1.0, note="", extras=None, spectrum=None):
    w = eigvalsh(0.5 * (diff + diff.conj().T)) if spectrum is None else spectrum
    terms = {f"lambda_{i + 1}": float(x) for i, x in enumerate(w)}
    lmin = float(w[-1])
    tol = LOEWNER_REL * max(1.0, a_fro)
    return Verdict(id_, terms, lmin, 0.0, lmin, tol, bool(lmin >= -tol), note, float(scale), 1,
                   dict(extras or {}))


def _require_psd(data, what="A"):
    try:
        v = is_psd(data)
    except DomainError as exc:
        raise HypothesisError(f"{what} is not Hermitian", {"reason": str(exc)}) from None
    if not v:
        raise HypothesisError(f"{what} is not positive semidefinite",
                              {f"lambda_min({what})": v.lambda_min, "tolerance": v.tolerance_used})
    return v


def _normalize(a: BlockMatrix):
    t = float(np.trace(a.data).real)
    if t > 0:
        return a.with_data(a.data / t), t, f"divided by tr A = {t!r}"
    return a, 1.0, "tr A = 0, not normalized"


def _det_real(x) -> float:
    return lu_det(x).real


def _partial_trace_dets(a: BlockMatrix):
    """``(tr A)^{mn}, det A, det(tr1 A)^m, det(tr2 A)^n``."""
    m, n = a.m, a.n
    mn = m * n
    t = float(np.trace(a.data).real)
    return (
        t ** mn,
        _det_real(a.data),
        _det_real(partial_trace_1(a)) ** m,
        _det_real(partial_trace_2(a)) ** n,
    )


def _psd_normalized(a: BlockMatrix):
    _require_psd(a.data)
    return _normalize(a)


def check_schatten(a: BlockMatrix, q) -> Verdict:
    """``tr A + |A|_q >= |tr1 A|_q + |tr2 A|_q`` for PSD ``A``."""
    b, scale, note = _psd_normalized(a)
    q = float(q)
    terms = {
        "tr_A": float(np.trace(b.data).real),
        "norm_A": schatten_norm(b.data, q),
        "norm_tr1": schatten_norm(partial_trace_1(b), q),
        "norm_tr2": schatten_norm(partial_trace_2(b), q),
    }
    return _scalar("schatten", terms, terms["tr_A"] + terms["norm_A"], terms["norm_tr1"] + terms["norm_tr2"],
                   scale=scale, degree=1, note=note, extras={"inv_q": 0.0 if math.isinf(q) else 1.0 / q})


def ando_difference(a: BlockMatrix) -> np.ndarray:
    """``(tr A) I + A - I (x) tr1 A - tr2 A (x) I``."""
    d = a.dim
    return (np.trace(a.data).real * np.eye(d) + a.data
            - embed_left(partial_trace_1(a), a.m).data - embed_right(partial_trace_2(a), a.n).data)


def complement_difference(a: BlockMatrix) -> np.ndarray:
    """``(tr A) I + I (x) tr1 A - A - tr2 A (x) I``."""
    d = a.dim
    return (np.trace(a.data).real * np.eye(d) + embed_left(partial_trace_1(a), a.m).data
            - a.data - embed_right(partial_trace_2(a), a.n).data)


def check_ando_loewner(a: BlockMatrix) -> Verdict:
    b, scale, note = _psd_normalized(a)
    return _loewner("ando", ando_difference(b), fro_norm(b.data), scale=scale, note=note)


def check_complement_loewner(a: BlockMatrix) -> Verdict:
    b, scale, note = _psd_normalized(a)
    return _loewner("complement", complement_difference(b), fro_norm(b.data), scale=scale, note=note)


def phi(x) -> np.ndarray:
    """``X -> (tr X) I + X``."""
    x = np.asarray(x, dtype=np.complex128)
    return np.trace(x) * np.eye(x.shape[0]) + x


def phi_image(a: BlockMatrix, swapped: bool = False) -> BlockMatrix:
    """``[phi(A_ij)]``, or ``[phi(A_ji)]`` when ``swapped``."""
    m = a.m
    grid = [[phi(block_at(a, j, i) if swapped else block_at(a, i, j)) for j in range(m)] for i in range(m)]
    return assemble(grid)


def check_ppt_map(a: BlockMatrix) -> Verdict:
    """Positivity of ``[phi(A_ij)]`` and ``[phi(A_ji)]`` for PSD ``A``; gap is the smaller lambda_min."""
    b, scale, note = _psd_normalized(a)
    direct = eigvalsh(phi_image(b).data)
    swapped = eigvalsh(phi_image(b, swapped=True).data)
    tol = LOEWNER_REL * max(1.0, fro_norm(b.data))
    lmin = float(min(direct[-1], swapped[-1]))
    terms = {"lambda_min_positive": float(direct[-1]), "lambda_min_copositive": float(swapped[-1]),
             "lambda_max_positive": float(direct[0]), "lambda_max_copositive": float(swapped[0])}
    return Verdict("ppt_map", terms, lmin, 0.0, lmin, tol, bool(lmin >= -tol), note, scale, 1, {})


def complement_certificate(a: BlockMatrix) -> np.ndarray:
    """The ``2 x 2`` block matrix whose positivity proves the complement inequality at ``m = 2``.

    It is ``J M J*`` with ``M = [phi(A_ji)]`` and ``J = [[0, -I], [I, 0]]``.
    """
    if a.m != 2:
        raise DomainError("certificate is defined for m = 2 only")
    a11, a12, a21, a22 = (block_at(a, i, j) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
    return assemble([[phi(a22), -phi(a12)], [-phi(a21), phi(a11)]]).data


def check_lin(a: BlockMatrix) -> Verdict:
    """``(tr A)^{mn} + det A >= det(tr1 A)^m + det(tr2 A)^n``."""
    b, scale, note = _psd_normalized(a)
    t, da, d1, d2 = _partial_trace_dets(b)
    terms = {"tr_pow": t, "det_A": da, "det_tr1_pow": d1, "det_tr2_pow": d2}
    return _scalar("lin", terms, t + da, d1 + d2, scale=scale, degree=b.dim, note=note)


def check_main(a: BlockMatrix) -> Verdict:
    """``(tr A)^{mn} - det(tr2 A)^n >= |det A - det(tr1 A)^m|``.

    ``extras["branch"]`` is +1 when ``det A >= det(tr1 A)^m`` and -1 otherwise.
    """
    b, scale, note = _psd_normalized(a)
    t, da, d1, d2 = _partial_trace_dets(b)
    terms = {"tr_pow": t, "det_A": da, "det_tr1_pow": d1, "det_tr2_pow": d2}
    return _scalar("main", terms, t - d2, abs(da - d1), scale=scale, degree=b.dim, note=note,
                   extras={"branch": 1.0 if da >= d1 else -1.0})


def check_swapped(a: BlockMatrix) -> Verdict:
    """``(tr A)^{mn} + det(tr1 A)^m >= det A + det(tr2 A)^n``."""
    b, scale, note = _psd_normalized(a)
    t, da, d1, d2 = _partial_trace_dets(b)
    terms = {"tr_pow": t, "det_A": da, "det_tr1_pow": d1, "det_tr2_pow": d2}
    return _scalar("swapped", terms, t + d1, da + d2, scale=scale, degree=b.dim, note=note)


def require_ppt(a: BlockMatrix):
    try:
        direct, partial = is_ppt(a)
    except DomainError as exc:
        raise HypothesisError("A is not Hermitian", {"reason": str(exc)}) from None
    if not (direct and partial):
        raise HypothesisError("A is not PPT", {"lambda_min(A)": direct.lambda_min,
                                               "lambda_min(A^tau)": partial.lambda_min})
    return direct, partial


def check_ppt_reversal(a: BlockMatrix, *, require=True) -> Verdict:
    """``(tr A)^{mn} + det(tr2 A)^n >= det A + det(tr1 A)^m`` for PPT ``A``.

    ``require=False`` skips the PPT test (exploration only).
    """
    if require:
        require_ppt(a)
    b, scale, note = _normalize(a)
    t, da, d1, d2 = _partial_trace_dets(b)
    terms = {"tr_pow": t, "det_A": da, "det_tr1_pow": d1, "det_tr2_pow": d2}
    return _scalar("ppt_reversal", terms, t + d2, da + d1, scale=scale, degree=b.dim, note=note)


def check_det_four(x, y, w, z) -> Verdict:
    """``det X + det Y >= det W + det Z`` given ``X+Y >= W+Z``, ``X >= W``, ``X >= Z``."""
    mats = [np.asarray(v, dtype=np.complex128) for v in (x, y, w, z)]
    failed = {}
    try:
        for name, mat in zip("XYWZ", mats):
            v = is_psd(mat)
            if not v:
                failed[f"{name} >= 0"] = v.lambda_min
        x, y, w, z = mats
        for name, (p, q) in {"X+Y >= W+Z": (x + y, w + z), "X >= W": (x, w), "X >= Z": (x, z)}.items():
            v = loewner_ge(p, q)
            if not v:
                failed[name] = v.lambda_min
    except DomainError as exc:
        raise HypothesisError("operands must be Hermitian", {"reason": str(exc)}) from None
    if failed:
        raise HypothesisError(f"preconditions fail: {', '.join(failed)}", failed)
    t = float(np.trace(x).real)
    scale = t if t > 0 else 1.0
    dx, dy, dw, dz = (_det_real(v / scale) for v in (x, y, w, z))
    terms = {"det_X": dx, "det_Y": dy, "det_W": dw, "det_Z": dz}
    return _scalar("det_four", terms, dx + dy, dw + dz, scale=scale, degree=x.shape[0],
                   note=f"divided by tr X = {scale!r}")


def check_three_term(a, b, c) -> Verdict:
    """``det(A+B+C) + det C >= det(A+C) + det(B+C)`` for PSD ``A, B, C``."""
    mats = [np.asarray(v, dtype=np.complex128) for v in (a, b, c)]
    for name, mat in zip("ABC", mats):
        _require_psd(mat, name)
    a, b, c = mats
    t = float(np.trace(a + b + c).real)
    scale = t if t > 0 else 1.0
    a, b, c = a / scale, b / scale, c / scale
    terms = {"det_ABC": _det_real(a + b + c), "det_C": _det_real(c),
             "det_AC": _det_real(a + c), "det_BC": _det_real(b + c)}
    return _scalar("three_term", terms, terms["det_ABC"] + terms["det_C"], terms["det_AC"] + terms["det_BC"],
                   scale=scale, degree=a.shape[0], note=f"divided by tr(A+B+C) = {scale!r}")


def _sector_angle(data, alpha):
    margin, re_pd = sector_margin(data)
    if not re_pd:
        raise HypothesisError("real part is not positive definite", {"alpha_min": margin})
    if alpha is None:
        return margin
    if not (0.0 <= alpha < math.pi / 2):
        raise DomainError(f"alpha must lie in [0, pi/2), got {alpha}")
    if margin > alpha + ALPHA_SLACK:
        raise HypothesisError(f"numerical range not inside the sector of half-angle {alpha}",
                              {"alpha_min": margin, "alpha": alpha})
    return alpha


def _abs_trace_normalized(data):
    t = float(singular_values(data).sum())
    if t > 0:
        return data / t, t, f"divided by tr|A| = {t!r}"
    return data, 1.0, "tr|A| = 0, not normalized"


def check_sector_det(a, alpha=None) -> Verdict:
    """``|det A| <= (sec alpha)^d det(Re A)``; ``alpha`` defaults to the measured half-angle."""
    a = np.asarray(a.data if isinstance(a, BlockMatrix) else a, dtype=np.complex128)
    alpha = _sector_angle(a, alpha)
    b, scale, note = _abs_trace_normalized(a)
    d = b.shape[0]
    re, _ = cartesian_parts(b)
    sec_pow = (1.0 / math.cos(alpha)) ** d
    det_re = _det_real(re)
    abs_det = abs(lu_det(b))
    terms = {"sec_pow": sec_pow, "det_re": det_re, "abs_det": abs_det}
    return _scalar("sector_det", terms, sec_pow * det_re, abs_det, scale=scale, degree=d, note=note,
                   extras={"alpha": alpha})


def check_re_singular(a) -> Verdict:
    """``lambda_i(Re A) <= s_i(A)`` and, when ``Re A > 0``, ``det Re A + |det Im A| <= |det A|``.

    The reported lhs/rhs belong to whichever part is closer to failing; both
    part gaps are in ``terms``.
    """
    a = np.asarray(a.data if isinstance(a, BlockMatrix) else a, dtype=np.complex128)
    b, scale, note = _abs_trace_normalized(a)
    d = b.shape[0]
    s = singular_values(b)
    re, im = cartesian_parts(b)
    lam = eigvalsh(re)
    diffs = s - lam
    i = int(np.argmin(diffs))
    parts = [(float(s[i]), float(lam[i]), 1)]
    terms = {"gap_singular": float(diffs[i]), "argmin_index": float(i)}
    extras = {"det_part": 0.0}
    if lam[-1] > SCALAR_REL * max(1.0, float(lam[0])):
        abs_det = abs(lu_det(b))
        det_re = _det_real(re)
        abs_det_im = abs(lu_det(im))
        parts.append((abs_det, det_re + abs_det_im, d))
        terms.update({"abs_det": abs_det, "det_re": det_re, "abs_det_im": abs_det_im,
                      "gap_det": abs_det - det_re - abs_det_im})
        extras["det_part"] = 1.0
    slack = [(lhs - rhs + SCALAR_REL * max(1.0, abs(lhs), abs(rhs)), lhs, rhs, deg) for lhs, rhs, deg in parts]
    _, lhs, rhs, deg = min(slack, key=lambda p: p[0])
    return _scalar("re_singular", terms, lhs, rhs, scale=scale, degree=deg, note=note, extras=extras)


def check_sector_main(a: BlockMatrix, alpha=None) -> Verdict:
    """Sector version of the swapped inequality.

    ``(tr|A|)^{mn} + |det tr1 A|^m >= cos^{mn}(alpha) (|det A| + |det tr2 A|^n)``
    for ``W(A)`` inside the sector of half-angle ``alpha``.
    """
    alpha = _sector_angle(a.data, alpha)
    data, scale, note = _abs_trace_normalized(a.data)
    b = a.with_data(data)
    m, n = b.m, b.n
    mn = m * n
    cos_pow = math.cos(alpha) ** mn
    terms = {
        "tr_abs_pow": float(singular_values(b.data).sum()) ** mn,
        "abs_det_tr1_pow": abs(lu_det(partial_trace_1(b))) ** m,
        "abs_det": abs(lu_det(b.data)),
        "abs_det_tr2_pow": abs(lu_det(partial_trace_2(b))) ** n,
        "cos_pow": cos_pow,
    }
    lhs = terms["tr_abs_pow"] + terms["abs_det_tr1_pow"]
    rhs = cos_pow * terms["abs_det"] + cos_pow * terms["abs_det_tr2_pow"]
    # Partial traces of a sector matrix should stay in the sector; record their
    # half-angles so reports expose any instance where they do not.
    extras = {"alpha": alpha,
              "alpha_tr1": sector_margin(partial_trace_1(b))[0],
              "alpha_tr2": sector_margin(partial_trace_2(b))[0]}
    return _scalar("sector_main", terms, lhs, rhs, scale=scale, degree=mn, note=note, extras=extras)


BLOCK_CHECKS = {
    "schatten": check_schatten,
    "ando": check_ando_loewner,
    "complement": check_complement_loewner,
    "ppt_map": check_ppt_map,
    "lin": check_lin,
    "main": check_main,
    "swapped": check_swapped,
    "ppt_reversal": check_ppt_reversal,
    "sector_det": check_sector_det,
    "re_singular": check_re_singular,
    "sector_main": check_sector_main,
}
