"""Hot trajectory-integration kernels in two interchangeable builds.

The guidance velocity of a two-Gaussian wave is evaluated from the
analytic complex logarithmic derivative; all normalization prefactors
cancel in the ratio, and the node criterion reduces to the weight
|c1*E1 + c2*E2| with E_j the unit-peak packet envelopes.

Both builds advance each particle with classic RK4 on dx/dt = v(x, t),
halving the step (2x or 4x substeps) when the weight drops near a node,
and freezing particles whose weight falls below 1e-12 (reported as
aborted).  The numba build loops particles in compiled code; the numpy
build vectorizes over the ensemble with identical per-element arithmetic.
"""

import numpy as np

from ._backend import HAS_NUMBA, active_backend

ABORT_WEIGHT = 1e-12
FINE_WEIGHT = 5e-3    # 4 substeps below this
COARSE_WEIGHT = 5e-2  # 2 substeps below this


# ---------------------------------------------------------------- numpy build

def _vel_np(x, t, x1, x2, s2, b, hm, c1, c2):
    alpha = 1.0 + 1j * (b * t)
    d1 = x - x1
    d2 = x - x2
    e1 = np.exp(-d1 * d1 / (4.0 * s2 * alpha))
    e2 = np.exp(-d2 * d2 / (4.0 * s2 * alpha))
    num = -(c1 * d1 * e1 + c2 * d2 * e2)
    den = 2.0 * s2 * alpha * (c1 * e1 + c2 * e2)
    return hm * np.imag(num / den)


def _weight_np(x, t, x1, x2, s2, b, c1, c2):
    alpha = 1.0 + 1j * (b * t)
    d1 = x - x1
    d2 = x - x2
    e1 = np.exp(-d1 * d1 / (4.0 * s2 * alpha))
    e2 = np.exp(-d2 * d2 / (4.0 * s2 * alpha))
    return np.abs(c1 * e1 + c2 * e2)


def _rk4_np(x, t, h, m, x1, x2, s2, b, hm, c1, c2):
    for s in range(m):
        ts = t + s * h
        k1 = _vel_np(x, ts, x1, x2, s2, b, hm, c1, c2)
        k2 = _vel_np(x + 0.5 * h * k1, ts + 0.5 * h, x1, x2, s2, b, hm, c1, c2)
        k3 = _vel_np(x + 0.5 * h * k2, ts + 0.5 * h, x1, x2, s2, b, hm, c1, c2)
        k4 = _vel_np(x + h * k3, ts + h, x1, x2, s2, b, hm, c1, c2)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


def ensemble_rk4_numpy(x0, t0, dt, n_steps, x1, x2, s2, b, hm, c1, c2):
    x = np.asarray(x0, dtype=float).copy()
    n = x.size
    pos = np.empty((n_steps + 1, n))
    pos[0] = x
    aborted = np.zeros(n, dtype=bool)
    for k in range(n_steps):
        t = t0 + k * dt
        active = ~aborted
        w = np.zeros(n)
        w[active] = _weight_np(x[active], t, x1, x2, s2, b, c1, c2)
        aborted |= active & (w < ABORT_WEIGHT)
        active = ~aborted
        subs = np.where(w < FINE_WEIGHT, 4, np.where(w < COARSE_WEIGHT, 2, 1))
        for m in (1, 2, 4):
            sel = active & (subs == m)
            if sel.any():
                x[sel] = _rk4_np(x[sel], t, dt / m, m, x1, x2, s2, b, hm, c1, c2)
        pos[k + 1] = x
    return pos, aborted


# ---------------------------------------------------------------- numba build

if HAS_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _vel_nb(x, t, x1, x2, s2, b, hm, c1, c2):
        alpha = 1.0 + 1j * (b * t)
        d1 = x - x1
        d2 = x - x2
        e1 = np.exp(-d1 * d1 / (4.0 * s2 * alpha))
        e2 = np.exp(-d2 * d2 / (4.0 * s2 * alpha))
        num = -(c1 * d1 * e1 + c2 * d2 * e2)
        den = 2.0 * s2 * alpha * (c1 * e1 + c2 * e2)
        return hm * (num / den).imag

    @njit(cache=True)
    def _weight_nb(x, t, x1, x2, s2, b, c1, c2):
        alpha = 1.0 + 1j * (b * t)
        d1 = x - x1
        d2 = x - x2
        e1 = np.exp(-d1 * d1 / (4.0 * s2 * alpha))
        e2 = np.exp(-d2 * d2 / (4.0 * s2 * alpha))
        return abs(c1 * e1 + c2 * e2)

    @njit(cache=True)
    def ensemble_rk4_numba(x0, t0, dt, n_steps, x1, x2, s2, b, hm, c1, c2):
        n = x0.size
        pos = np.empty((n_steps + 1, n))
        aborted = np.zeros(n, dtype=np.bool_)
        for p in range(n):
            x = x0[p]
            pos[0, p] = x
            ab = False
            for k in range(n_steps):
                if ab:
                    pos[k + 1, p] = x
                    continue
                t = t0 + k * dt
                w = _weight_nb(x, t, x1, x2, s2, b, c1, c2)
                if w < ABORT_WEIGHT:
                    ab = True
                    pos[k + 1, p] = x
                    continue
                m = 1
                if w < FINE_WEIGHT:
                    m = 4
                elif w < COARSE_WEIGHT:
                    m = 2
                h = dt / m
                for s in range(m):
                    ts = t + s * h
                    k1 = _vel_nb(x, ts, x1, x2, s2, b, hm, c1, c2)
                    k2 = _vel_nb(x + 0.5 * h * k1, ts + 0.5 * h, x1, x2, s2, b, hm, c1, c2)
                    k3 = _vel_nb(x + 0.5 * h * k2, ts + 0.5 * h, x1, x2, s2, b, hm, c1, c2)
                    k4 = _vel_nb(x + h * k3, ts + h, x1, x2, s2, b, hm, c1, c2)
                    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                pos[k + 1, p] = x
            aborted[p] = ab
        return pos, aborted


def integrate_ensemble_kernel(x0, t0, dt, n_steps, x1, x2, s2, b, hm, c1, c2,
                              backend=None):
    """Dispatch to the backend selected by INTERFEROX_BACKEND (or override)."""
    name = backend or active_backend()
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    args = (x0, float(t0), float(dt), int(n_steps), float(x1), float(x2),
            float(s2), float(b), float(hm), complex(c1), complex(c2))
    if name == "numba":
        return ensemble_rk4_numba(*args)
    return ensemble_rk4_numpy(*args)
