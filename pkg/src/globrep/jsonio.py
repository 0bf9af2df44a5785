"""JSON formats for the file-based interfaces.

Scalars are strings "a/b" (or "a"), matrices are nested arrays of such
strings, and every object file records the hash of the site it was built
over so that stale files are rejected instead of silently misread.
"""

from __future__ import annotations

from .exactlin import matrix_from_json, matrix_to_json
from .complexes import ChainMap, Complex
from .rep import RepError, RepMap, rep_from_json, rep_to_json
from .site import Site


def complex_to_json(c: Complex) -> dict:
    return {
        "site_hash": c.site.hash,
        "lo": c.lo,
        "hi": c.hi,
        "terms": {str(n): rep_to_json(c.terms[n]) for n in c.degrees()},
        "diffs": {
            str(n): [matrix_to_json(m) for m in c.diffs[n].mats]
            for n in range(c.lo + 1, c.hi + 1)
        },
    }


def complex_from_json(site: Site, obj) -> Complex:
    if obj.get("site_hash") and obj["site_hash"] != site.hash:
        raise RepError("complex file belongs to a different site")
    lo, hi = obj["lo"], obj["hi"]
    terms = {n: rep_from_json(site, obj["terms"][str(n)]) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        mats = [matrix_from_json(m) for m in obj["diffs"][str(n)]]
        diffs[n] = RepMap(terms[n], terms[n - 1], mats)
    return Complex(site, lo, hi, terms, diffs)


def chain_map_to_json(f: ChainMap) -> dict:
    lo = min(f.source.lo, f.target.lo)
    hi = max(f.source.hi, f.target.hi)
    return {
        "site_hash": f.source.site.hash,
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "comps": {
            str(n): [matrix_to_json(m) for m in f.comp(n).mats]
            for n in range(lo, hi + 1)
        },
    }


def chain_map_from_json(site: Site, obj) -> ChainMap:
    source = complex_from_json(site, obj["source"])
    target = complex_from_json(site, obj["target"])
    comps = {}
    for key, mats in obj["comps"].items():
        n = int(key)
        comps[n] = RepMap(source.term(n), target.term(n),
                          [matrix_from_json(m) for m in mats])
    return ChainMap(source, target, comps)
