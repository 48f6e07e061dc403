"""Intrusive checks linking the indicator to residual and error.

Two facts are probed numerically on systems small enough for dense state
samples:

  1. rho(G~, z) * |Q(z)| is a z-independent constant gamma, equal to
     ||sum_j q_j E G(z_j)||_F / ||B||_F, where G~ reuses the surrogate's
     coefficients with state samples G(z_j).
  2. eps(H~, z) * |Q(z)| = Delta(z) with
     Delta(z) = ||C (zE-A)^{-1} Btilde||_F / (||H(z)||_F + delta) and
     Btilde = E sum_j q_j G(z_j).

Delta is the frequency-dependent factor separating the computable
indicator from the true output error; it cannot be observed without the
system matrices, which is why these diagnostics ship as a module.
"""
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .barycentric import BarycentricSurrogate
from .greedy import adjusted_relative_error

# Random probe frequencies this close (relatively) to a support node are
# rejected and redrawn.
NODE_REJECT = 1e-6


def state_surrogate(sur, sys):
    """Surrogate over n-by-m state blocks with the same support and coefficients."""
    values = np.array([sys.eval_state_transfer(z) for z in sur.support])
    return BarycentricSurrogate(sur.support, values, sur.coeffs)


def residual_norm(sys, gsur, z):
    """rho = ||(zE - A) G~(z) - B||_F / ||B||_F."""
    G = gsur.eval(z)
    r = (z * sys.E - sys.A) @ G - sys.B
    return float(np.linalg.norm(r) / np.linalg.norm(sys.B))


def draw_probe_points(sur, f_min, f_max, count, seed=0):
    """Log-uniform random frequencies i*f, redrawn away from support nodes."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        z = 1j * math.exp(rng.uniform(math.log(f_min), math.log(f_max)))
        d = np.abs(z - sur.support) / (1.0 + np.abs(sur.support))
        if d.min() > NODE_REJECT:
            out.append(z)
    return out


@dataclass
class Prop1Report:
    gamma_estimate: float
    gamma_formula: float
    max_relative_spread: float
    max_identity_residual: float
    points: list = field(default_factory=list)
    rho_absq: list = field(default_factory=list)


@dataclass
class Prop2Report:
    delta: list
    identity_residuals: list
    delta_max: float
    points: list = field(default_factory=list)


def _coeff_state_sum(sys, sur, gsur):
    """E * sum_j q_j G(z_j), the constant residual numerator."""
    acc = np.tensordot(sur.coeffs, gsur.values, axes=1)
    return sys.E @ acc


def check_prop1(sys, sur, zs, gsur=None):
    """Constancy of rho * |Q| plus the underlying vector identity."""
    gsur = gsur or state_surrogate(sur, sys)
    rhs = _coeff_state_sum(sys, sur, gsur)
    rhs_norm = np.linalg.norm(rhs)
    prods = []
    ident = []
    for z in zs:
        q = sur.eval_denominator(z)
        rho = residual_norm(sys, gsur, z)
        prods.append(rho * abs(q))
        r = (z * sys.E - sys.A) @ gsur.eval(z) - sys.B
        ident.append(np.linalg.norm(q * r - rhs) / rhs_norm)
    prods = np.array(prods)
    mean = float(prods.mean())
    spread = float(np.max(np.abs(prods - mean)) / mean) if mean > 0 else 0.0
    return Prop1Report(
        gamma_estimate=mean,
        gamma_formula=float(rhs_norm / np.linalg.norm(sys.B)),
        max_relative_spread=spread,
        max_identity_residual=float(np.max(ident)),
        points=list(zs),
        rho_absq=prods.tolist(),
    )


def check_prop2(sys, sur, zs, delta, gsur=None):
    """eps * |Q| = Delta pointwise; also reports max Delta over zs."""
    gsur = gsur or state_surrogate(sur, sys)
    btilde = _coeff_state_sum(sys, sur, gsur)
    deltas = []
    residuals = []
    for z in zs:
        H = sys.eval_transfer(z)
        phi_btilde = sys.C @ sys.solve_pencil(z, btilde)
        d = float(np.linalg.norm(phi_btilde) / (np.linalg.norm(H) + delta))
        eps = adjusted_relative_error(H, sur.eval(z), delta)
        lhs = eps * abs(sur.eval_denominator(z))
        denom = max(abs(d), 1e-300)
        deltas.append(d)
        residuals.append(abs(lhs - d) / denom)
    return Prop2Report(
        delta=deltas,
        identity_residuals=residuals,
        delta_max=float(np.max(deltas)),
        points=list(zs),
    )


def write_report_csv(path, sys, sur, zs, delta, header_lines=()):
    """Per-point CSV with columns f, rho, absQ, rho_absQ, eps, Delta."""
    gsur = state_surrogate(sur, sys)
    p1 = check_prop1(sys, sur, zs, gsur=gsur)
    p2 = check_prop2(sys, sur, zs, delta, gsur=gsur)
    with open(path, "w", newline="") as f:
        for line in header_lines:
            f.write(f"# {line}\n")
        w = csv.writer(f)
        w.writerow(["f", "rho", "absQ", "rho_absQ", "eps", "Delta"])
        for z, ra, d in zip(zs, p1.rho_absq, p2.delta):
            absq = abs(sur.eval_denominator(z))
            rho = ra / absq
            eps = adjusted_relative_error(sys.eval_transfer(z), sur.eval(z), delta)
            w.writerow([z.imag, rho, absq, ra, eps, d])
    return p1, p2
