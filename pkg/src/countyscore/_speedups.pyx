# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row scanner and exact-sum accumulator.

Mirrors ``_purepy`` exactly; see that module for the contract.
"""

import math
from datetime import date

from cpython.mem cimport PyMem_Free, PyMem_Malloc, PyMem_Realloc
from libc.math cimport fabs, isfinite

from countyscore._purepy import MISSING_TOKENS

cdef enum:
    MALFORMED = 0
    BAD_REGION = 1
    REGION_TYPE = 2
    PROPERTY_TYPE = 3
    MISSING = 4
    INVALID = 5
    BAD_DATE = 6
    INVERTED = 7

cdef object _fromisoformat = date.fromisoformat
cdef object _missing = MISSING_TOKENS


cdef inline str _unquote(str cell):
    cdef Py_ssize_t n = len(cell)
    if n >= 2 and cell[0] == u'"' and cell[n - 1] == u'"':
        return cell[1:n - 1]
    return cell


cdef object _parse_date(str cell):
    if len(cell) != 10 or cell[4] != u'-' or cell[7] != u'-':
        return None
    try:
        return _fromisoformat(cell)
    except ValueError:
        return None


def scan_lines(lines, tuple layout, list drops, make_record):
    cdef Py_ssize_t ncols = layout[0]
    cdef Py_ssize_t i_rtype = layout[1]
    want_ptype = layout[2]
    cdef Py_ssize_t i_begin = layout[3], i_end = layout[4], i_region = layout[5]
    cdef Py_ssize_t i_ptype = layout[6]
    cdef Py_ssize_t[4] gidx
    gidx[0] = layout[7]
    gidx[1] = layout[8]
    gidx[2] = layout[9]
    gidx[3] = layout[10]
    cdef long[8] counts
    cdef int k, reason
    cdef double[4] g
    cdef double v
    cdef list out = []
    cdef list cells
    cdef str line, cell, region, ptype
    for k in range(8):
        counts[k] = 0
    for line in lines:
        cells = line.rstrip(u"\r\n").split(u"\t")
        if len(cells) != ncols:
            counts[MALFORMED] += 1
            continue
        if i_rtype >= 0 and _unquote(<str>cells[i_rtype]) != u"county":
            counts[REGION_TYPE] += 1
            continue
        ptype = _unquote(<str>cells[i_ptype])
        if want_ptype is not None and ptype != want_ptype:
            counts[PROPERTY_TYPE] += 1
            continue
        region = _unquote(<str>cells[i_region])
        if u"," not in region or not region.strip():
            counts[BAD_REGION] += 1
            continue
        reason = -1
        for k in range(4):
            cell = _unquote(<str>cells[gidx[k]]).strip()
            if cell in _missing:
                reason = MISSING
                break
            try:
                v = float(cell)
            except ValueError:
                reason = INVALID
                break
            if not isfinite(v):
                reason = INVALID
                break
            g[k] = v
        if reason >= 0:
            counts[reason] += 1
            continue
        begin = _parse_date(_unquote(<str>cells[i_begin]))
        end = _parse_date(_unquote(<str>cells[i_end]))
        if begin is None or end is None:
            counts[BAD_DATE] += 1
            continue
        if begin > end:
            counts[INVERTED] += 1
            continue
        out.append(make_record(begin, end, region, ptype, g[0], g[1], g[2], g[3]))
    for k in range(8):
        drops[k] += counts[k]
    return out


cdef struct Partials:
    double *p
    Py_ssize_t n
    Py_ssize_t cap


cdef int _grow(Partials *s, double x) except -1:
    cdef Py_ssize_t i = 0, j
    cdef double y, hi, lo, t
    cdef double *grown
    for j in range(s.n):
        y = s.p[j]
        if fabs(x) < fabs(y):
            t = x
            x = y
            y = t
        hi = x + y
        lo = y - (hi - x)
        if lo != 0.0:
            s.p[i] = lo
            i += 1
        x = hi
    if i >= s.cap:
        grown = <double *>PyMem_Realloc(s.p, 2 * s.cap * sizeof(double))
        if grown == NULL:
            raise MemoryError()
        s.p = grown
        s.cap *= 2
    s.p[i] = x
    s.n = i + 1
    return 0


cdef class GrowthAccumulator:
    cdef Partials _f[4]
    cdef public long count

    def __cinit__(self):
        cdef int k
        self.count = 0
        for k in range(4):
            self._f[k].p = NULL
        for k in range(4):
            self._f[k].p = <double *>PyMem_Malloc(8 * sizeof(double))
            if self._f[k].p == NULL:
                raise MemoryError()
            self._f[k].n = 0
            self._f[k].cap = 8

    def __dealloc__(self):
        cdef int k
        for k in range(4):
            PyMem_Free(self._f[k].p)

    cpdef add(self, double hs_mom, double hs_yoy, double price_mom, double price_yoy):
        _grow(&self._f[0], hs_mom)
        _grow(&self._f[1], hs_yoy)
        _grow(&self._f[2], price_mom)
        _grow(&self._f[3], price_yoy)
        self.count += 1

    def merge(self, other):
        cdef int k
        cdef double x
        for k, theirs in enumerate(other.partials()):
            for x in theirs:
                _grow(&self._f[k], x)
        self.count += other.count

    def partials(self):
        cdef int k
        cdef Py_ssize_t j
        return tuple([self._f[k].p[j] for j in range(self._f[k].n)] for k in range(4))

    def sums(self):
        return tuple(math.fsum(p) for p in self.partials())
