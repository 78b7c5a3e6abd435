# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled solver kernels.

Exploits the structure of a BIHT step: ``A @ s`` only touches the ``k``
support columns, and the gradient only touches rows whose sign disagrees
with ``b``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs
from libc.string cimport memcpy

cnp.import_array()


cdef inline bint _worse(const double[::1] v, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    # True when entry i ranks below entry j: smaller magnitude, or equal and later
    cdef double ai = fabs(v[i]), aj = fabs(v[j])
    return ai < aj or (ai == aj and i > j)


cdef void _sift_down(const double[::1] v, Py_ssize_t[::1] heap, Py_ssize_t start,
                     Py_ssize_t size) noexcept nogil:
    cdef Py_ssize_t pos = start, child, tmp
    while True:
        child = 2 * pos + 1
        if child >= size:
            break
        if child + 1 < size and _worse(v, heap[child + 1], heap[child]):
            child += 1
        if _worse(v, heap[child], heap[pos]):
            tmp = heap[pos]
            heap[pos] = heap[child]
            heap[child] = tmp
            pos = child
        else:
            break


cdef Py_ssize_t _select(const double[::1] v, Py_ssize_t k, Py_ssize_t[::1] heap) noexcept nogil:
    """Fill heap[:k] with the indices of the k largest |v|, lower index winning ties."""
    cdef Py_ssize_t n = v.shape[0], i
    for i in range(k):
        heap[i] = i
    i = k // 2
    while i > 0:
        i -= 1
        _sift_down(v, heap, i, k)
    for i in range(k, n):
        # a later index only displaces the root on strictly larger magnitude
        if fabs(v[i]) > fabs(v[heap[0]]):
            heap[0] = i
            _sift_down(v, heap, 0, k)
    return k


def hard_threshold(const double[::1] v, Py_ssize_t k):
    cdef Py_ssize_t n = v.shape[0], i
    out = np.zeros(n)
    cdef double[::1] o = out
    cdef Py_ssize_t[::1] heap = np.empty(k, dtype=np.intp)
    with nogil:
        _select(v, k, heap)
        for i in range(k):
            o[heap[i]] = v[heap[i]]
    return out


def hamming(const double[:, ::1] a, const double[::1] s, const signed char[::1] b):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], i, j
    cdef Py_ssize_t count = 0
    cdef double acc
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(n):
                acc += a[i, j] * s[j]
            if (acc >= 0) != (b[i] > 0):
                count += 1
    return count


def biht_loop(const double[:, ::1] a, const signed char[::1] b, Py_ssize_t k,
              Py_ssize_t max_iters, double tau):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t i, j, t, h, best_h = 0, iterations = 0, nviol
    cdef double acc, bi
    cdef bint same

    s_arr = np.zeros(n)
    new_arr = np.zeros(n)
    best_arr = np.zeros(n)
    cdef double[::1] s = s_arr
    cdef double[::1] s_new = new_arr
    cdef double[::1] best = best_arr
    cdef double[::1] u = np.empty(n)
    cdef double[::1] step = np.zeros(n)
    cdef Py_ssize_t[::1] heap = np.empty(k, dtype=np.intp)
    cdef Py_ssize_t[::1] viol = np.empty(m, dtype=np.intp)
    cdef double[::1] tmp

    with nogil:
        for i in range(m):
            if b[i] < 0:
                best_h += 1
        # zero start: residual is b itself
        for i in range(m):
            bi = 0.5 * tau * b[i]
            for j in range(n):
                step[j] += bi * a[i, j]

        for t in range(max_iters):
            for j in range(n):
                u[j] = s[j] + step[j]
                s_new[j] = 0.0
            _select(u, k, heap)
            for j in range(k):
                s_new[heap[j]] = u[heap[j]]
            iterations += 1

            nviol = 0
            for i in range(m):
                acc = 0.0
                for j in range(k):
                    acc += a[i, heap[j]] * s_new[heap[j]]
                if (acc >= 0) != (b[i] > 0):
                    viol[nviol] = i
                    nviol += 1
            h = nviol
            if h <= best_h:
                best_h = h
                memcpy(&best[0], &s_new[0], n * sizeof(double))
            same = True
            for j in range(n):
                if s_new[j] != s[j]:
                    same = False
                    break
            if h == 0 or same:
                break
            tmp = s
            s = s_new
            s_new = tmp
            for j in range(n):
                step[j] = 0.0
            for i in range(nviol):
                bi = tau * b[viol[i]]
                for j in range(n):
                    step[j] += bi * a[viol[i], j]

    return np.asarray(best).copy(), best_h, iterations
