# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled annealing hot loops.

Mirror of ``_pure.py`` operation for operation: same random-number
consumption and the same floating-point expression order, so both
backends produce bit-identical trajectories from identical inputs.
The build disables FP contraction to keep double arithmetic aligned
with the interpreter.
"""

from libc.math cimport exp

import numpy as np


cdef long long _tour_length(const int[:, ::1] dist,
                            const long long[::1] tour) nogil:
    cdef Py_ssize_t n = tour.shape[0]
    cdef Py_ssize_t p
    cdef long long total = 0
    for p in range(n - 1):
        total += dist[tour[p], tour[p + 1]]
    total += dist[tour[n - 1], tour[0]]
    return total


def tour_length(dist, tour):
    return int(_tour_length(dist, tour))


cdef void _apply_path_move(long long[::1] arr, int kind,
                           Py_ssize_t p, Py_ssize_t q) nogil:
    cdef Py_ssize_t i, lo, hi
    cdef long long elem, tmp
    if kind == 0:
        if p == q:
            return
        elem = arr[p]
        if p < q:
            for i in range(p, q):
                arr[i] = arr[i + 1]
        else:
            for i in range(p, q, -1):
                arr[i] = arr[i - 1]
        arr[q] = elem
    elif kind == 1:
        tmp = arr[p]
        arr[p] = arr[q]
        arr[q] = tmp
    else:
        if p <= q:
            lo = p; hi = q
        else:
            lo = q; hi = p
        while lo < hi:
            tmp = arr[lo]
            arr[lo] = arr[hi]
            arr[hi] = tmp
            lo += 1
            hi -= 1


def tsp_level(dist, tour, cur_len, best_tour, best_len, temperature, rand):
    cdef const int[:, ::1] d = dist
    cdef long long[::1] t = tour
    cdef long long[::1] bt = best_tour
    cdef const double[:, ::1] r = rand
    cdef long long cl = cur_len
    cdef long long bl = best_len
    cdef double temp = temperature
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t n_tries = r.shape[0]
    cdef Py_ssize_t i, ri
    cdef int kind
    cdef Py_ssize_t p, q
    cdef long long new_len, delta
    cdef long long n_accept = 0
    scratch_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] scratch = scratch_arr
    with nogil:
        for ri in range(n_tries):
            kind = <int> (r[ri, 0] * 3.0)
            p = <Py_ssize_t> (r[ri, 1] * n)
            q = <Py_ssize_t> (r[ri, 2] * n)
            for i in range(n):
                scratch[i] = t[i]
            _apply_path_move(scratch, kind, p, q)
            new_len = _tour_length(d, scratch)
            delta = new_len - cl
            if delta <= 0 or r[ri, 3] < exp(-(<double> delta) / temp):
                for i in range(n):
                    t[i] = scratch[i]
                cl = new_len
                n_accept += 1
                if cl < bl:
                    for i in range(n):
                        bt[i] = t[i]
                    bl = cl
    return int(cl), int(bl), int(n_accept)


cdef double _interp(const double[:, :, :, ::1] costs,
                    const double[::1] taxis, const double[::1] daxis,
                    double sentinel, double t, double dt,
                    Py_ssize_t j, Py_ssize_t k) nogil:
    cdef Py_ssize_t nt = taxis.shape[0]
    cdef Py_ssize_t nd = daxis.shape[0]
    cdef Py_ssize_t i, d
    cdef double u, v, c00, c10, c01, c11
    cdef double w00, w10, w01, w11, total
    if t <= taxis[0]:
        i = 0; u = 0.0
    elif t >= taxis[nt - 1]:
        i = nt - 2; u = 1.0
    else:
        i = 0
        while taxis[i + 1] <= t:
            i += 1
        u = (t - taxis[i]) / (taxis[i + 1] - taxis[i])
    if dt <= daxis[0]:
        d = 0; v = 0.0
    elif dt >= daxis[nd - 1]:
        d = nd - 2; v = 1.0
    else:
        d = 0
        while daxis[d + 1] <= dt:
            d += 1
        v = (dt - daxis[d]) / (daxis[d + 1] - daxis[d])
    c00 = costs[i, d, j, k]
    c10 = costs[i + 1, d, j, k]
    c01 = costs[i, d + 1, j, k]
    c11 = costs[i + 1, d + 1, j, k]
    w00 = (1.0 - u) * (1.0 - v)
    w10 = u * (1.0 - v)
    w01 = (1.0 - u) * v
    w11 = u * v
    # only corners actually weighted in can poison the query; this
    # keeps node-aligned queries exact next to infeasible cells
    if (w00 > 0.0 and c00 >= sentinel) or (w10 > 0.0 and c10 >= sentinel) \
            or (w01 > 0.0 and c01 >= sentinel) \
            or (w11 > 0.0 and c11 >= sentinel):
        return sentinel
    total = 0.0
    if w00 > 0.0:
        total += w00 * c00
    if w10 > 0.0:
        total += w10 * c10
    if w01 > 0.0:
        total += w01 * c01
    if w11 > 0.0:
        total += w11 * c11
    return total


cdef double _evaluate(const double[:, :, :, ::1] costs,
                      const double[::1] taxis, const double[::1] daxis,
                      const double[::1] op_add, const double[::1] weights,
                      const long long[::1] order, const double[::1] dates,
                      Py_ssize_t m, Py_ssize_t n, double sentinel,
                      double[::1] k_out) nogil:
    cdef Py_ssize_t mi, p, start, j, k
    cdef double worst = 0.0
    cdef double cost, c
    for mi in range(m):
        start = mi * n
        cost = weights[order[start]] * op_add[order[start]]
        for p in range(start, start + n - 1):
            j = order[p]
            k = order[p + 1]
            c = _interp(costs, taxis, daxis, sentinel,
                        dates[p], dates[p + 1] - dates[p], j, k)
            if c >= sentinel:
                cost += sentinel
            else:
                cost += weights[k] * (c + op_add[k])
        k_out[mi] = cost
        if cost > worst:
            worst = cost
    return worst


def evaluate_path(costs, taxis, daxis, op_add, weights, order, dates,
                  m, n, sentinel, k_out):
    return float(_evaluate(costs, taxis, daxis, op_add, weights,
                           order, dates, m, n, sentinel, k_out))


def sdc_level(costs, taxis, daxis, op_add, weights, m, n, sentinel,
              t_lo, t_hi, order, dates, cur_cost,
              best_order, best_dates, best_cost, temperature, rand):
    cdef const double[:, :, :, ::1] c = costs
    cdef const double[::1] ta = taxis
    cdef const double[::1] da = daxis
    cdef const double[::1] oa = op_add
    cdef const double[::1] w = weights
    cdef long long[::1] o = order
    cdef double[::1] dt = dates
    cdef long long[::1] bo = best_order
    cdef double[::1] bd = best_dates
    cdef const double[:, ::1] r = rand
    cdef Py_ssize_t mm = m, nn = n
    cdef double sent = sentinel
    cdef double tlo = t_lo, thi = t_hi
    cdef double cc = cur_cost, bc = best_cost
    cdef double temp = temperature
    cdef Py_ssize_t big = o.shape[0]
    cdef Py_ssize_t n_tries = r.shape[0]
    cdef Py_ssize_t ri, i, p, q, pd
    cdef int kind
    cdef double lo, hi, cand, new_cost, delta
    cdef long long n_accept = 0
    s_order_arr = np.empty(big, dtype=np.int64)
    s_dates_arr = np.empty(big, dtype=np.float64)
    k_tmp_arr = np.empty(mm, dtype=np.float64)
    cdef long long[::1] s_order = s_order_arr
    cdef double[::1] s_dates = s_dates_arr
    cdef double[::1] k_tmp = k_tmp_arr
    with nogil:
        for ri in range(n_tries):
            kind = <int> (r[ri, 0] * 3.0)
            p = <Py_ssize_t> (r[ri, 1] * big)
            q = <Py_ssize_t> (r[ri, 2] * big)
            for i in range(big):
                s_order[i] = o[i]
                s_dates[i] = dt[i]
            _apply_path_move(s_order, kind, p, q)
            pd = <Py_ssize_t> (r[ri, 3] * big)
            lo = s_dates[pd - 1] if pd > 0 else tlo
            hi = s_dates[pd + 1] if pd < big - 1 else thi
            cand = lo + r[ri, 4] * (hi - lo)
            if lo < cand < hi:
                s_dates[pd] = cand
            new_cost = _evaluate(c, ta, da, oa, w, s_order, s_dates,
                                 mm, nn, sent, k_tmp)
            delta = new_cost - cc
            if delta <= 0.0 or r[ri, 5] < exp(-delta / temp):
                for i in range(big):
                    o[i] = s_order[i]
                    dt[i] = s_dates[i]
                cc = new_cost
                n_accept += 1
                if cc < bc:
                    for i in range(big):
                        bo[i] = o[i]
                        bd[i] = dt[i]
                    bc = cc
    return float(cc), float(bc), int(n_accept)
