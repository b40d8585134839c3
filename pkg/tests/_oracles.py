"""Index-by-index reference implementations used only by the tests.

Everything here is written with explicit loops over grid points and
shares no code with the package, so agreement is a genuine cross-check.
"""

from __future__ import annotations

import numpy as np


def strains(xi, eta, h):
    """Backward differences p_i, q_i for i = 1..N, stored at index i-1."""
    N = len(xi) - 1
    p = np.zeros(N)
    q = np.zeros((N, 2))
    for i in range(1, N + 1):
        p[i - 1] = (xi[i] - xi[i - 1]) / h
        for c in range(2):
            q[i - 1, c] = (eta[i, c] - eta[i - 1, c]) / h
    return p, q


def stresses(scheme, alpha, levels, h):
    """phi_i and psi_i on strain points for one scheme.

    ``levels`` holds (xi, eta) at n-1, n and n+1; the n+1 level is the
    current guess when iterating.
    """
    (xp, ep), (xc, ec), (xn, en) = levels
    pp, qp = strains(xp, ep, h)
    pc, qc = strains(xc, ec, h)
    pn, qn = strains(xn, en, h)
    c = (1.0 - alpha) / 2.0
    N = len(pc)
    phi = np.zeros(N)
    psi = np.zeros((N, 2))
    for i in range(N):
        q, qa = qc[i], 0.5 * (qn[i] + qp[i])
        qq = q[0] * q[0] + q[1] * q[1]
        q_qa = q[0] * qa[0] + q[1] * qa[1]
        qq_avg = 0.5 * (qn[i] @ qn[i] + qp[i] @ qp[i])
        p, pa = pc[i], 0.5 * (pn[i] + pp[i])
        pmm = 0.25 * (pn[i] + 2.0 * pc[i] + pp[i])
        for k in range(2):
            if scheme == "s_a":
                phi[i] = p + c * qq
                psi[i, k] = alpha * q[k] + c * (qq + 2.0 * p) * q[k]
            elif scheme == "s_b":
                phi[i] = p + c * qq
                psi[i, k] = alpha * q[k] + c * (qq + 2.0 * p) * qa[k]
            elif scheme == "s_c":
                phi[i] = p + c * q_qa
                psi[i, k] = alpha * q[k] + c * (qq * qa[k] + 2.0 * pmm * q[k])
            elif scheme == "s_d":
                phi[i] = p + c * q_qa
                psi[i, k] = alpha * q[k] + c * (q_qa * q[k] + 2.0 * pmm * q[k])
            elif scheme == "s_e":
                phi[i] = p + c * qq_avg
                psi[i, k] = alpha * q[k] + c * (qq_avg + 2.0 * pa) * qa[k]
            else:
                raise ValueError(scheme)
    return phi, psi


def stencil_residual(scheme, alpha, levels, h, ht):
    """Residual of the second-difference equations at interior nodes."""
    (xp, ep), (xc, ec), (xn, en) = levels
    phi, psi = stresses(scheme, alpha, levels, h)
    N = len(xc) - 1
    rx = np.zeros(N - 1)
    re = np.zeros((N - 1, 2))
    for i in range(1, N):
        rx[i - 1] = (xn[i] - 2 * xc[i] + xp[i]) / ht**2 - (phi[i] - phi[i - 1]) / h
        for k in range(2):
            re[i - 1, k] = (en[i, k] - 2 * ec[i, k] + ep[i, k]) / ht**2 - (psi[i, k] - psi[i - 1, k]) / h
    return rx, re


def stencil_step(scheme, alpha, xp, xc, ep, ec, h, ht, tol=1e-17, max_iter=500):
    """Next level from the pointwise stencils by fixed-point iteration."""
    xn = 2 * xc - xp
    en = 2 * ec - ep
    for _ in range(max_iter):
        phi, psi = stresses(scheme, alpha, ((xp, ep), (xc, ec), (xn, en)), h)
        x_new = np.zeros_like(xc)
        e_new = np.zeros_like(ec)
        for i in range(1, len(xc) - 1):
            x_new[i] = 2 * xc[i] - xp[i] + ht**2 * (phi[i] - phi[i - 1]) / h
            for k in range(2):
                e_new[i, k] = 2 * ec[i, k] - ep[i, k] + ht**2 * (psi[i, k] - psi[i - 1, k]) / h
        change = max(np.max(np.abs(x_new - xn)), np.max(np.abs(e_new - en)))
        xn, en = x_new, e_new
        if change <= tol * max(1.0, np.max(np.abs(en))):
            break
    return xn, en


def energy_loop(scheme, alpha, xp, xc, ep, ec, h, ht):
    """Kinetic plus potential energy from plain sums over grid points."""
    N = len(xc) - 1
    kin = 0.0
    for i in range(N + 1):
        kin += (xc[i] - xp[i]) ** 2 + (ec[i, 0] - ep[i, 0]) ** 2 + (ec[i, 1] - ep[i, 1]) ** 2
    kin *= 0.5 * h / ht**2
    pp, qp = strains(xp, ep, h)
    pc, qc = strains(xc, ec, h)
    c = 1.0 - alpha
    pot = 0.0
    for i in range(N):
        qcp = qc[i, 0] * qp[i, 0] + qc[i, 1] * qp[i, 1]
        zc = qc[i, 0] ** 2 + qc[i, 1] ** 2
        zp = qp[i, 0] ** 2 + qp[i, 1] ** 2
        if scheme == "s_b":
            term = (alpha / 2 * pc[i] * pp[i] + alpha / 2 * qcp
                    + c / 2 * (pc[i] + zc / 2) * (pp[i] + zp / 2))
        elif scheme in ("s_c", "s_d"):
            m = (pc[i] + pp[i]) / 2
            term = pc[i] * pp[i] / 2 + alpha / 2 * qcp + c / 2 * ((m + qcp / 2) ** 2 - m * m)
            if scheme == "s_c":
                cross = -qc[i, 1] * qp[i, 0] + qc[i, 0] * qp[i, 1]
                term += c / 8 * cross**2
        elif scheme == "s_e":
            term = (pc[i] * pp[i] / 2 + alpha / 2 * qcp
                    + c / 4 * ((pc[i] + zc / 2) ** 2 - pc[i] ** 2 + (pp[i] + zp / 2) ** 2 - pp[i] ** 2))
        else:
            raise ValueError(scheme)
        pot += h * term
    return kin + pot


def momentum_loop(ep, ec, h, ht, extra_alpha=None):
    """Angular momentum sum; ``extra_alpha`` adds the strain correction term."""
    N = len(ec) - 1
    total = 0.0
    for i in range(N + 1):
        m1 = 0.5 * (ec[i, 0] + ep[i, 0])
        m2 = 0.5 * (ec[i, 1] + ep[i, 1])
        d1 = (ec[i, 0] - ep[i, 0]) / ht
        d2 = (ec[i, 1] - ep[i, 1]) / ht
        total += h * (-m2 * d1 + m1 * d2)
    if extra_alpha is not None:
        _, qp = strains(np.zeros(N + 1), ep, h)
        _, qc = strains(np.zeros(N + 1), ec, h)
        for i in range(N):
            total += extra_alpha * ht / 2 * h * (-qc[i, 1] * qp[i, 0] + qc[i, 0] * qp[i, 1])
    return total
