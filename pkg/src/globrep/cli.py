"""Command-line front door.

Subcommands: `site` builds and checks sites, `rep` constructs standard
objects, `complex` builds standard complexes, `op` runs single operations
on JSON inputs, and `verify` executes the named verification suites.

Exit codes: 0 success, 1 verification failures, 2 usage or schema errors,
3 mathematical precondition failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from .complexes import (
    ChainMap,
    ComplexError,
    homology_dims,
    is_thin,
    mapping_cone,
    single_complex,
)
from .derived import compactness_table, dualizable_test, torsion_free_homology
from .groups import GroupError, cyclic, elementary_abelian
from .jsonio import complex_from_json, complex_to_json
from .rep import (
    RepError,
    hom_space,
    make_e,
    projectivity_section,
    rep_from_json,
    rep_to_json,
    tensor,
    unit_object,
)
from .resolutions import resolve_object
from .site import (
    PRESET_NAMES,
    SiteError,
    build_site,
    check_widely_closed,
    classify_site,
    preset_site,
    site_from_json,
    site_to_json,
)
from .suites import SUITE_NAMES, run_suite
from .thin import ThinError, thin_replacement

USAGE_ERROR = 2
MATH_ERROR = 3


class CliError(Exception):
    def __init__(self, message, code=USAGE_ERROR):
        super().__init__(message)
        self.code = code


def parse_group_token(token: str):
    token = token.strip()
    if token == "1":
        return cyclic(1)
    if token.startswith("C"):
        body = token[1:]
        if "^" in body:
            p, r = body.split("^", 1)
            try:
                return elementary_abelian(int(p), int(r))
            except (ValueError, GroupError) as exc:
                raise CliError(f"bad group token {token!r}: {exc}")
        try:
            return cyclic(int(body))
        except (ValueError, GroupError) as exc:
            raise CliError(f"bad group token {token!r}: {exc}")
    raise CliError(f"unrecognized group token {token!r} (use 1, Cn, or Cp^r)")


def load_site(args) -> "Site":
    if getattr(args, "site", None):
        name_or_path = args.site
        if name_or_path in PRESET_NAMES:
            return preset_site(name_or_path, force=getattr(args, "force", False))
        try:
            with open(name_or_path) as fh:
                return site_from_json(json.load(fh))
        except FileNotFoundError:
            raise CliError(f"no such site preset or file: {name_or_path}")
        except (json.JSONDecodeError, KeyError) as exc:
            raise CliError(f"malformed site file {name_or_path}: {exc}")
    raise CliError("--site is required (preset name or site.json path)")


def _write(args, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc}")


# ---------------------------------------------------------------------------


def cmd_site(args) -> int:
    if args.action == "build":
        if not args.groups:
            raise CliError("site build requires --groups")
        groups = [parse_group_token(t) for t in args.groups.split(",")]
        try:
            site = build_site(groups, force=args.force)
        except SiteError as exc:
            raise CliError(str(exc), MATH_ERROR)
        payload = site_to_json(site)
        payload["classification"] = classify_site(site)
        _write(args, payload)
        return 0
    if args.action == "check":
        site = load_site(args)
        verdict = check_widely_closed(site)
        payload = {
            "widely_closed": verdict is True,
            "classification": classify_site(site),
        }
        if verdict is not True:
            g, n0, n1 = verdict
            payload["witness"] = {"group": g.label, "kernel0": list(n0), "kernel1": list(n1)}
        _write(args, payload)
        return 0
    raise CliError(f"unknown site action {args.action!r}")


def cmd_rep(args) -> int:
    site = load_site(args)
    if args.kind == "unit":
        obj = unit_object(site)
    elif args.kind in ("e", "c"):
        if not args.group:
            raise CliError("rep make with kind e/c requires --group")
        gidx = _group_index(site, args.group)
        obj = make_e(site, gidx, "regular" if args.kind == "e" else "trivial")
    else:
        raise CliError(f"unknown rep kind {args.kind!r}")
    _write(args, rep_to_json(obj))
    return 0


def _group_index(site, label):
    try:
        return site.object_index(label)
    except SiteError as exc:
        raise CliError(str(exc), MATH_ERROR)


def cmd_complex(args) -> int:
    site = load_site(args)
    if args.action == "validate":
        cx = _read_complex(site, args.input)
        _write(args, {"ok": True, "dims": {str(n): list(cx.terms[n].dims) for n in cx.degrees()}})
        return 0
    if args.action == "egen":
        if not args.group:
            raise CliError("complex egen requires --group")
        gidx = _group_index(site, args.group)
        cx = single_complex(make_e(site, gidx, "regular"), args.degree)
        _write(args, complex_to_json(cx))
        return 0
    if args.action == "cofiber-counit":
        if not args.group:
            raise CliError("complex cofiber-counit requires --group")
        gidx = _group_index(site, args.group)
        e = make_e(site, gidx, "regular")
        u = unit_object(site)
        basis = hom_space(e, u)
        if not basis:
            raise CliError("no counit map exists for this generator", MATH_ERROR)
        eps = basis[0].scale(1 / basis[0].mats[gidx].entry(0, 0))
        cone, _, _ = mapping_cone(
            ChainMap(single_complex(e), single_complex(u), {0: eps}))
        _write(args, complex_to_json(cone))
        return 0
    raise CliError(f"unknown complex action {args.action!r}")


def _read_complex(site, path):
    obj = _load_json(path)
    try:
        return complex_from_json(site, obj)
    except (RepError, ComplexError, KeyError, AssertionError) as exc:
        raise CliError(f"invalid complex file {path}: {exc}", MATH_ERROR)


def _read_rep(site, path):
    obj = _load_json(path)
    try:
        return rep_from_json(site, obj)
    except (RepError, KeyError, AssertionError) as exc:
        raise CliError(f"invalid representation file {path}: {exc}", MATH_ERROR)


def cmd_op(args) -> int:
    site = load_site(args)
    name = args.name
    if name == "tensor":
        a = _read_rep(site, args.a)
        b = _read_rep(site, args.b)
        _write(args, rep_to_json(tensor(a, b)))
        return 0
    if name == "homology":
        cx = _read_complex(site, args.input)
        hd = homology_dims(cx)
        _write(args, {"homology_dims": {str(n): list(d) for n, d in hd.items()},
                      "objects": [g.label for g in site.objects]})
        return 0
    if name == "resolve":
        x = _read_rep(site, args.input)
        res = resolve_object(x)
        _write(args, {"length": res.length,
                      "stage_dims": [list(p.dims) for p in res.stages]})
        return 0
    if name == "projective":
        x = _read_rep(site, args.input)
        section = projectivity_section(x)
        _write(args, {"projective": section is not None})
        return 0
    if name == "compact-table":
        cx = _read_complex(site, args.input)
        _write(args, {"table": compactness_table(cx)})
        return 0
    if name == "torsion":
        cx = _read_complex(site, args.input)
        hit = torsion_free_homology(cx)
        payload = {"torsion_free_class": None}
        if hit is not None:
            n, label, vec = hit
            payload["torsion_free_class"] = {
                "degree": n, "group": label,
                "vector": [str(vec.entry(i, 0)) for i in range(vec.rows)],
            }
        _write(args, payload)
        return 0
    if name == "thin":
        cx = _read_complex(site, args.input)
        try:
            t, _ = thin_replacement(cx)
        except ThinError as exc:
            raise CliError(str(exc), MATH_ERROR)
        _write(args, complex_to_json(t))
        return 0
    if name == "is-thin":
        cx = _read_complex(site, args.input)
        try:
            ok, witness = is_thin(cx)
        except ComplexError as exc:
            raise CliError(str(exc), MATH_ERROR)
        payload = {"thin": ok}
        if witness:
            payload["witness"] = {"layer": witness[0], "degree": witness[1],
                                  "group": witness[2]}
        _write(args, payload)
        return 0
    if name == "dualizable":
        cx = _read_complex(site, args.input)
        res = dualizable_test(cx)
        _write(args, res)
        return 0
    raise CliError(f"unknown operation {name!r}")


def cmd_verify(args) -> int:
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in SUITE_NAMES:
        raise CliError(f"unknown suite {args.suite!r}; choose from {SUITE_NAMES} or 'all'")
    reports = []
    for name in names:
        try:
            reports.append(run_suite(name, args.site, args.seed, args.count))
        except (SiteError, RepError) as exc:
            raise CliError(str(exc), MATH_ERROR)
    include_timing = not args.omit_timing
    if args.format == "json":
        payload = [r.to_json(include_timing=include_timing) for r in reports]
        text = json.dumps(payload if len(payload) > 1 else payload[0],
                          indent=2, sort_keys=True)
    else:
        text = "\n\n".join(r.to_text() for r in reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="globrep",
        description="exact computations with global representations over finite sites")
    sub = parser.add_subparsers(dest="command", required=True)

    p_site = sub.add_parser("site", help="build or check a site")
    p_site.add_argument("action", choices=["build", "check"])
    p_site.add_argument("--groups", help="comma-separated group tokens, e.g. 1,C2,C4")
    p_site.add_argument("--site", help="preset name or site.json (for check)")
    p_site.add_argument("--force", action="store_true",
                        help="keep going when the wide-closure check fails")
    p_site.add_argument("--out")
    p_site.set_defaults(fn=cmd_site)

    p_rep = sub.add_parser("rep", help="construct a standard object")
    p_rep.add_argument("kind", choices=["e", "c", "unit"])
    p_rep.add_argument("--site", required=True)
    p_rep.add_argument("--group")
    p_rep.add_argument("--force", action="store_true")
    p_rep.add_argument("--out")
    p_rep.set_defaults(fn=cmd_rep)

    p_cx = sub.add_parser("complex", help="construct or validate a complex")
    p_cx.add_argument("action", choices=["validate", "egen", "cofiber-counit"])
    p_cx.add_argument("--site", required=True)
    p_cx.add_argument("--group")
    p_cx.add_argument("--degree", type=int, default=0)
    p_cx.add_argument("--in", dest="input")
    p_cx.add_argument("--force", action="store_true")
    p_cx.add_argument("--out")
    p_cx.set_defaults(fn=cmd_complex)

    p_op = sub.add_parser("op", help="run one operation on JSON inputs")
    p_op.add_argument("name", choices=["tensor", "homology", "resolve", "projective",
                                       "compact-table", "torsion", "thin", "is-thin",
                                       "dualizable"])
    p_op.add_argument("--site", required=True)
    p_op.add_argument("--a")
    p_op.add_argument("--b")
    p_op.add_argument("--in", dest="input")
    p_op.add_argument("--force", action="store_true")
    p_op.add_argument("--out")
    p_op.set_defaults(fn=cmd_op)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("suite", help=f"one of {', '.join(SUITE_NAMES)} or 'all'")
    p_ver.add_argument("--site", help="preset name override")
    p_ver.add_argument("--seed", type=int, default=7)
    p_ver.add_argument("--count", type=int)
    p_ver.add_argument("--format", choices=["json", "text"], default="text")
    p_ver.add_argument("--omit-timing", action="store_true",
                       help="drop wall times for byte-identical reports")
    p_ver.add_argument("--out")
    p_ver.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (SiteError, RepError, ComplexError, ThinError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MATH_ERROR


if __name__ == "__main__":
    sys.exit(main())
