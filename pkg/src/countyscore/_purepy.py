"""Pure-Python row scanner and exact-sum accumulator.

This is the reference implementation of the kernels in ``_speedups.pyx``;
both must produce identical records, drop counts and sums.
"""

import math
from datetime import date

DROP_REASONS = (
    "malformed_row",
    "invalid_region",
    "wrong_region_type",
    "property_type_mismatch",
    "missing_growth_field",
    "invalid_growth_field",
    "invalid_date",
    "inverted_period",
)
MALFORMED, BAD_REGION, REGION_TYPE, PROPERTY_TYPE, MISSING, INVALID, BAD_DATE, INVERTED = range(8)

MISSING_TOKENS = frozenset(["", "NA", "N/A", "null", "NULL"])

_isfinite = math.isfinite
_fromisoformat = date.fromisoformat


def unquote(cell):
    if len(cell) >= 2 and cell[0] == '"' and cell[-1] == '"':
        return cell[1:-1]
    return cell


def _parse_date(cell):
    if len(cell) != 10 or cell[4] != "-" or cell[7] != "-":
        return None
    try:
        return _fromisoformat(cell)
    except ValueError:
        return None


def scan_lines(lines, layout, drops, make_record):
    """Turn raw TSV lines into records, counting dropped rows into ``drops``.

    ``layout`` is ``(ncols, region_type_idx, property_type, begin, end,
    region, ptype, hs_mom, hs_yoy, price_mom, price_yoy)`` where
    ``region_type_idx`` is -1 when the column is absent and
    ``property_type`` is None to accept every property type.
    """
    (ncols, i_rtype, want_ptype, i_begin, i_end, i_region, i_ptype,
     i_hs_mom, i_hs_yoy, i_p_mom, i_p_yoy) = layout
    out = []
    append = out.append
    for line in lines:
        cells = line.rstrip("\r\n").split("\t")
        if len(cells) != ncols:
            drops[MALFORMED] += 1
            continue
        if i_rtype >= 0 and unquote(cells[i_rtype]) != "county":
            drops[REGION_TYPE] += 1
            continue
        ptype = unquote(cells[i_ptype])
        if want_ptype is not None and ptype != want_ptype:
            drops[PROPERTY_TYPE] += 1
            continue
        region = unquote(cells[i_region])
        if "," not in region or not region.strip():
            drops[BAD_REGION] += 1
            continue
        growth = []
        reason = -1
        for i in (i_hs_mom, i_hs_yoy, i_p_mom, i_p_yoy):
            cell = unquote(cells[i]).strip()
            if cell in MISSING_TOKENS:
                reason = MISSING
                break
            try:
                v = float(cell)
            except ValueError:
                reason = INVALID
                break
            if not _isfinite(v):
                reason = INVALID
                break
            growth.append(v)
        if reason >= 0:
            drops[reason] += 1
            continue
        begin = _parse_date(unquote(cells[i_begin]))
        end = _parse_date(unquote(cells[i_end]))
        if begin is None or end is None:
            drops[BAD_DATE] += 1
            continue
        if begin > end:
            drops[INVERTED] += 1
            continue
        append(make_record(begin, end, region, ptype, *growth))
    return out


def _grow(partials, x):
    # Shewchuk's non-overlapping partials; the final fsum is exactly rounded
    i = 0
    for y in partials:
        if abs(x) < abs(y):
            x, y = y, x
        hi = x + y
        lo = y - (hi - x)
        if lo:
            partials[i] = lo
            i += 1
        x = hi
    partials[i:] = [x]


class GrowthAccumulator:
    """Order-independent running sums of the four monthly growth fields."""

    __slots__ = ("count", "_partials")

    def __init__(self):
        self.count = 0
        self._partials = ([], [], [], [])

    def add(self, hs_mom, hs_yoy, price_mom, price_yoy):
        p = self._partials
        _grow(p[0], hs_mom)
        _grow(p[1], hs_yoy)
        _grow(p[2], price_mom)
        _grow(p[3], price_yoy)
        self.count += 1

    def merge(self, other):
        for mine, theirs in zip(self._partials, other.partials()):
            for x in theirs:
                _grow(mine, x)
        self.count += other.count

    def partials(self):
        return tuple(list(p) for p in self._partials)

    def sums(self):
        return tuple(math.fsum(p) for p in self._partials)
