"""Pure numpy Jost propagator, vectorised over the spectral points.

The modified Jost matrix m = psi exp(i zeta x sigma3) solves

    m_x = L(x) m + i zeta m sigma3,    L = i [[-lam, conj(q)], [-q, lam]].

Each grid interval is advanced with the two-point Gauss 4th-order Magnus
step for psi, followed by the exact diagonal phase for the column factors.
Same arithmetic as the compiled kernel in ``_jost_ext.pyx``.
"""

from __future__ import annotations

import numpy as np

SQRT3_12 = np.sqrt(3.0) / 12.0


def _sinhc_cosh(mu2):
    """(cosh mu, sinh(mu)/mu) as even functions of mu**2."""
    mu = np.sqrt(mu2)
    small = np.abs(mu2) < 1e-6
    safe_mu = np.where(small, 1.0, mu)
    ch = np.where(small, 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0, np.cosh(safe_mu))
    sc = np.where(small, 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0, np.sinh(safe_mu) / safe_mu)
    return ch, sc


def _magnus_step(qa, qb, lam, h):
    """Entries (a, b, c) of the trace-free Magnus exponent [[a, b], [c, -a]]."""
    # A(x) = i [[-lam, qbar], [-q, lam]];  Omega = h/2 (A1 + A2) + sqrt3/12 h^2 [A2, A1]
    sa = qa + qb
    a = -1j * lam * h
    b = 0.5j * h * np.conj(sa)
    c = -0.5j * h * sa
    # [A2, A1] for A_k = [[p, u_k], [w_k, -p]] (common diagonal p = -i lam):
    # [[u2 w1 - u1 w2, 2 p (u1 - u2)], [2 p (w2 - w1), u1 w2 - u2 w1]]
    u1, u2 = 1j * np.conj(qa), 1j * np.conj(qb)
    w1, w2 = -1j * qa, -1j * qb
    p = -1j * lam
    k = SQRT3_12 * h * h
    a = a + k * (u2 * w1 - u1 * w2)
    b = b + k * 2.0 * p * (u1 - u2)
    c = c + k * 2.0 * p * (w2 - w1)
    return a, b, c


def propagate(qa, qb, h, z, m0):
    """Advance m from the left end of the grid to the right end.

    qa, qb : complex arrays (nsteps,) of q at the two Gauss nodes of each step
    h      : step length
    z      : complex array (nz,) of spectral points
    m0     : complex array (nz, 2, 2) initial values
    returns complex array (nz, 2, 2)
    """
    z = np.asarray(z, dtype=complex)
    lam = 0.5 * (z + 1.0 / z)
    zet = 0.5 * (z - 1.0 / z)
    e1 = np.exp(1j * zet * h)
    e2 = np.exp(-1j * zet * h)
    m = np.array(m0, dtype=complex, copy=True)
    m11, m12, m21, m22 = m[:, 0, 0], m[:, 0, 1], m[:, 1, 0], m[:, 1, 1]
    for n in range(len(qa)):
        a, b, c = _magnus_step(qa[n], qb[n], lam, h)
        ch, sc = _sinhc_cosh(a * a + b * c)
        f11 = ch + sc * a
        f22 = ch - sc * a
        f12 = sc * b
        f21 = sc * c
        n11 = (f11 * m11 + f12 * m21) * e1
        n21 = (f21 * m11 + f22 * m21) * e1
        n12 = (f11 * m12 + f12 * m22) * e2
        n22 = (f21 * m12 + f22 * m22) * e2
        m11, m12, m21, m22 = n11, n12, n21, n22
    out = np.empty_like(m)
    out[:, 0, 0], out[:, 0, 1], out[:, 1, 0], out[:, 1, 1] = m11, m12, m21, m22
    return out


def propagate_path(qa, qb, h, z, m0):
    """Same as :func:`propagate` for a single z, keeping every grid value."""
    nsteps = len(qa)
    path = np.empty((nsteps + 1, 2, 2), dtype=complex)
    path[0] = m0
    zz = np.array([complex(z)])
    m = np.asarray(m0, dtype=complex).reshape(1, 2, 2)
    for n in range(nsteps):
        m = propagate(qa[n:n + 1], qb[n:n + 1], h, zz, m)
        path[n + 1] = m[0]
    return path
