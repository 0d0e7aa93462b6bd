"""Per-output-time diagnostics: mass, norms, and the coupled monitor functional.

The central monitored quantity is y_p = int(u^p) + (chi^2/gamma)^p * int(|grad v|^(2p)),
whose boundedness along a run is the numerical shadow of the analytical
boundedness mechanism. Gradient magnitudes at cells come from axis-wise
central differences (one-sided at boundaries, consistent with the reflecting
ghost convention of the operators).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import grid, kinetics
from .grid import ScalarField

__all__ = ["DiagRecord", "default_p_diag", "y_functional", "record", "write_csv"]


def default_p_diag(n: int) -> float:
    """Monitor exponent: must exceed max(1, n/2) for the L^p bound to matter."""
    return 2.0 if n <= 3 else n / 2.0 + 0.5


def _cell_grad_sq(values: np.ndarray, spacing: tuple[float, ...]) -> np.ndarray:
    """|grad f|^2 at cell centers from central differences on an edge-padded array."""
    total = np.zeros_like(values)
    nd = values.ndim
    for axis, h in enumerate(spacing):
        pad = [(1, 1) if ax == axis else (0, 0) for ax in range(nd)]
        padded = np.pad(values, pad, mode="edge")
        hi = padded[grid._axslice(nd, axis, slice(2, None))]
        lo = padded[grid._axslice(nd, axis, slice(None, -2))]
        g = (hi - lo) / (2.0 * h)
        total += g * g
    return total


def y_functional(u: ScalarField, v: ScalarField, p: float, chi: float, gamma: float) -> float:
    """int(u^p) + (chi^2/gamma)^p * int(|grad v|^(2p))."""
    if p <= 1.0:
        raise ValueError(f"p must be > 1, got {p}")
    vol = u.spec.cell_volume
    first = float(np.sum(u.values**p)) * vol
    grad_sq = _cell_grad_sq(v.values, v.spec.spacing)
    second = (chi * chi / gamma) ** p * float(np.sum(grad_sq**p)) * vol
    return first + second


@dataclass(frozen=True)
class DiagRecord:
    """One diagnostics row; all quantities refer to a single output time."""

    t: float
    mass: float
    sup_u: float
    sup_v: float
    sup_w: float
    lp_u: float
    grad_v_sq: float
    y_p: float
    dt_current: float
    clipped_mass: float
    w_residual: float

    def is_finite(self) -> bool:
        return all(np.isfinite(v) for v in dataclasses.astuple(self))


def record(state, config, dt_current: float | None = None, w_source=None) -> DiagRecord:
    """Assemble a :class:`DiagRecord` from the current state.

    ``w_source`` overrides the right-hand side used for the repellent
    residual check (runs with manufactured forcing need this); by default it
    is the production rate of the current u. The residual is recomputed here
    rather than trusted from the solver.
    """
    params = config.params
    p = config.p_diag if config.p_diag is not None else default_p_diag(params.n)
    u, v, w = state.u, state.v, state.w
    spacing = u.spec.spacing

    if w_source is None:
        w_source = kinetics.g_of(u.values, params)
    resid = np.linalg.norm(
        (params.delta * w.values - grid.laplacian_values(w.values, spacing) - w_source).ravel()
    )
    src_norm = float(np.linalg.norm(np.asarray(w_source).ravel()))
    w_residual = float(resid / src_norm) if src_norm > 0.0 else float(resid)

    if dt_current is None:
        from .stepper import stable_dt  # local import to avoid a cycle

        dt_current = stable_dt(state, params)

    return DiagRecord(
        t=state.t,
        mass=grid.integrate(u),
        sup_u=grid.sup_norm(u),
        sup_v=grid.sup_norm(v),
        sup_w=grid.sup_norm(w),
        lp_u=grid.lp_norm(u, p),
        grad_v_sq=grid.grad_sq_integral(v),
        y_p=y_functional(u, v, p, params.chi, params.gamma),
        dt_current=float(dt_current),
        clipped_mass=state.clipped_mass,
        w_residual=w_residual,
    )


_FIELDS = [f.name for f in dataclasses.fields(DiagRecord)]


def write_csv(records, path, metadata: dict | None = None) -> None:
    """Write records as CSV, full double precision, metadata as '#' comments."""
    with open(path, "w") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key} = {value}\n")
        fh.write(",".join(_FIELDS) + "\n")
        for rec in records:
            fh.write(",".join(f"{v:.17g}" for v in dataclasses.astuple(rec)) + "\n")
