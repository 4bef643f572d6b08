# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Jost propagator (same scheme as ``_jost_py``, scalar loops)."""

import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex csqrt(double complex)
    double complex ccosh(double complex)
    double complex csinh(double complex)
    double complex conj(double complex)
    double cabs(double complex)

cnp.import_array()

cdef double SQRT3_12 = 0.14433756729740643  # sqrt(3)/12


cdef inline void _step(double complex qa, double complex qb, double complex lam,
                       double h, double complex* f) noexcept nogil:
    cdef double complex sa = qa + qb
    cdef double complex p = -1j * lam
    cdef double complex u1 = 1j * conj(qa)
    cdef double complex u2 = 1j * conj(qb)
    cdef double complex w1 = -1j * qa
    cdef double complex w2 = -1j * qb
    cdef double k = SQRT3_12 * h * h
    cdef double complex a = p * h + k * (u2 * w1 - u1 * w2)
    cdef double complex b = 0.5j * h * conj(sa) + k * 2.0 * p * (u1 - u2)
    cdef double complex c = -0.5j * h * sa + k * 2.0 * p * (w2 - w1)
    cdef double complex mu2 = a * a + b * c
    cdef double complex ch, sc, mu
    if cabs(mu2) < 1e-6:
        ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0
        sc = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0
    else:
        mu = csqrt(mu2)
        ch = ccosh(mu)
        sc = csinh(mu) / mu
    f[0] = ch + sc * a
    f[1] = sc * b
    f[2] = sc * c
    f[3] = ch - sc * a


def propagate(const double complex[::1] qa, const double complex[::1] qb, double h,
              z, m0):
    zarr = np.ascontiguousarray(np.asarray(z, dtype=np.complex128).ravel())
    out = np.array(m0, dtype=np.complex128, copy=True, order="C").reshape(zarr.shape[0], 2, 2)
    cdef double complex[::1] zv = zarr
    cdef double complex[:, :, ::1] m = out
    cdef Py_ssize_t nz = zv.shape[0]
    cdef Py_ssize_t ns = qa.shape[0]
    cdef Py_ssize_t i, n
    cdef double complex zz, lam, zet, e1, e2, m11, m12, m21, m22, n11, n12, n21, n22
    cdef double complex f[4]
    with nogil:
        for i in range(nz):
            zz = zv[i]
            lam = 0.5 * (zz + 1.0 / zz)
            zet = 0.5 * (zz - 1.0 / zz)
            e1 = cexp(1j * zet * h)
            e2 = cexp(-1j * zet * h)
            m11 = m[i, 0, 0]
            m12 = m[i, 0, 1]
            m21 = m[i, 1, 0]
            m22 = m[i, 1, 1]
            for n in range(ns):
                _step(qa[n], qb[n], lam, h, f)
                n11 = (f[0] * m11 + f[1] * m21) * e1
                n21 = (f[2] * m11 + f[3] * m21) * e1
                n12 = (f[0] * m12 + f[1] * m22) * e2
                n22 = (f[2] * m12 + f[3] * m22) * e2
                m11 = n11
                m12 = n12
                m21 = n21
                m22 = n22
            m[i, 0, 0] = m11
            m[i, 0, 1] = m12
            m[i, 1, 0] = m21
            m[i, 1, 1] = m22
    return out


def propagate_path(const double complex[::1] qa, const double complex[::1] qb, double h,
                   z, m0):
    cdef Py_ssize_t ns = qa.shape[0]
    path_arr = np.empty((ns + 1, 2, 2), dtype=np.complex128)
    path_arr[0] = np.asarray(m0, dtype=np.complex128).reshape(2, 2)
    cdef double complex[:, :, ::1] path = path_arr
    cdef double complex zz = complex(z)
    cdef double complex lam = 0.5 * (zz + 1.0 / zz)
    cdef double complex zet = 0.5 * (zz - 1.0 / zz)
    cdef double complex e1 = cexp(1j * zet * h)
    cdef double complex e2 = cexp(-1j * zet * h)
    cdef double complex f[4]
    cdef Py_ssize_t n
    with nogil:
        for n in range(ns):
            _step(qa[n], qb[n], lam, h, f)
            path[n + 1, 0, 0] = (f[0] * path[n, 0, 0] + f[1] * path[n, 1, 0]) * e1
            path[n + 1, 1, 0] = (f[2] * path[n, 0, 0] + f[3] * path[n, 1, 0]) * e1
            path[n + 1, 0, 1] = (f[0] * path[n, 0, 1] + f[1] * path[n, 1, 1]) * e2
            path[n + 1, 1, 1] = (f[2] * path[n, 0, 1] + f[3] * path[n, 1, 1]) * e2
    return path_arr
