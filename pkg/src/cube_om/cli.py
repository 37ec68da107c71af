"""Command-line interface: ``cube-om <command> --n N [options]``.

Exit codes: 0 success or Verified, 1 verification failure, 2 input error,
3 dimension cap or resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .core import MAX_N, check_dimension, coord_mask, mask_coords, members, vertex_coords, vertex_from_coords
from .errors import CacheMismatchError, CapExceededError, CubeError
from .geometry import SubcubeDescriptor, classify_triple, enumerate_rectangles, generate_subcube, recover_descriptor
from .matroid import HyperplaneCatalog, Kind, classify_hyperplane, enumerate_hyperplanes, parse_hex_bits
from .normalize import normalize
from .orientation import aff_orientation, read_orientation, write_orientation
from .reconstruct import EXHAUSTIVE_MAX_N, Verdict, propagate, rectangle_subset, verify_conjecture
from .selftest import DEFAULT_SEED, SELFTEST_MAX_N, run_selftest

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_CAP = 3

CACHE_ENV = "CUBE_OM_CACHE_DIR"


@dataclass(frozen=True)
class RunConfig:
    n: int
    command: str
    cache_path: Path | None
    output_format: str
    seed: int
    exhaustive: bool
    jobs: int
    rebuild_cache: bool
    timing: bool


class UsageError(CubeError):
    pass


class ResourceError(CubeError):
    pass


# --- vertices and sets on the command line ----------------------------------


_VERTEX_TOKEN = re.compile(r"^(?:[+-]{2,}|-?1(?:,-?1)+|-)$")
_ESCAPE = "v:"


def _protect_vertices(argv: Sequence[str]) -> list[str]:
    """Keep argparse from reading ``---`` or ``-1,1`` as option flags."""
    return [_ESCAPE + a if a != "--" and a.startswith("-") and _VERTEX_TOKEN.match(a) else a for a in argv]


def parse_vertex(text: str, n: int) -> int:
    """``+-+`` or ``1,-1,1`` (coordinate 1 first); an optional ``v:`` prefix is ignored."""
    text = text.strip().removeprefix(_ESCAPE)
    if text and set(text) <= {"+", "-"}:
        coords = [1 if c == "+" else -1 for c in text]
    else:
        try:
            coords = [int(c) for c in text.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse vertex {text!r}; use +-+ or 1,-1,1") from None
    if len(coords) != n:
        raise UsageError(f"vertex {text!r} has {len(coords)} coordinates, expected {n}")
    return vertex_from_coords(coords)


def show_vertex(v: int, n: int) -> str:
    return "".join("+" if c == 1 else "-" for c in vertex_coords(v, n))


def parse_block(text: str, n: int) -> int:
    try:
        coords = [int(c) for c in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse coordinate block {text!r}; use 1,3") from None
    return coord_mask(coords, n)


# --- output ------------------------------------------------------------------


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _flat(rec: dict) -> dict:
    return {k: json.dumps(v, separators=(",", ":")) if isinstance(v, (dict, list)) else v for k, v in rec.items()}


def render(obj, fmt: str, rows: list[dict] | None = None) -> str:
    """JSON gets the whole object; csv/table get ``rows`` (default: the object as one row)."""
    if fmt == "json":
        return _dump_json(obj)
    rows = [_flat(r) for r in (rows if rows is not None else [obj])]
    if not rows:
        return ""
    keys = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in keys}
    lines = ["  ".join(k.ljust(widths[k]) for k in keys), "  ".join("-" * widths[k] for k in keys)]
    lines += ["  ".join(str(r[k]).ljust(widths[k]) for k in keys) for r in rows]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def emit(cfg: RunConfig, obj, rows: list[dict] | None = None) -> None:
    sys.stdout.write(render(obj, cfg.output_format, rows))


def note(msg: str) -> None:
    print(msg, file=sys.stderr)


# --- catalog cache -------------------------------------------------------------


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "cube_om"


def cache_file(cfg: RunConfig) -> Path:
    if cfg.cache_path is not None:
        return cfg.cache_path
    return default_cache_dir() / f"catalog-n{cfg.n}.jsonl"


def load_catalog(cfg: RunConfig, write: bool = False) -> HyperplaneCatalog:
    """Validated cache if present, otherwise a fresh enumeration (persisted when ``write``).

    A cache that fails validation is an input error unless ``--rebuild-cache``.
    """
    path = cache_file(cfg)
    if path.exists() and not cfg.rebuild_cache:
        try:
            return HyperplaneCatalog.load(path, n=cfg.n)
        except CacheMismatchError as exc:
            raise CacheMismatchError(f"{exc} ({path}); rerun with --rebuild-cache to replace it") from exc
    cat = enumerate_hyperplanes(cfg.n)
    if write or cfg.rebuild_cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            cat.save(path)
        except OSError as exc:
            raise ResourceError(f"cannot write catalog cache {path}: {exc}") from exc
        note(f"wrote catalog cache {path}")
    return cat


# --- commands --------------------------------------------------------------------


def catalog_summary(cat: HyperplaneCatalog, rectangles: int) -> dict:
    kinds = [classify_hyperplane(H).kind for H in cat]
    return {
        "n": cat.n,
        "hyperplanes": len(cat),
        "by_size": {str(k): v for k, v in cat.size_histogram().items()},
        "facets": kinds.count(Kind.FACET),
        "skew_facets": kinds.count(Kind.SKEW_FACET),
        "other": kinds.count(Kind.OTHER),
        "rectangles": rectangles,
    }


def cmd_enumerate(cfg: RunConfig, args) -> int:
    check_dimension(cfg.n, 2, MAX_N)
    cat = load_catalog(cfg, write=True)
    summary = catalog_summary(cat, len(enumerate_rectangles(cfg.n)))
    if args.aff_out:
        O = aff_orientation(cfg.n, cat)
        if args.reorient:
            O = O.reorient(parse_hex_bits(args.reorient, cfg.n))
        write_orientation(O, cat, args.aff_out)
        note(f"wrote orientation {args.aff_out}")
    emit(cfg, summary)
    return EXIT_OK


def cmd_rectangles(cfg: RunConfig, args) -> int:
    check_dimension(cfg.n, 2, MAX_N)
    n = cfg.n
    rows = [
        {
            "base": show_vertex(r.base, n),
            "I": list(mask_coords(r.I)),
            "J": list(mask_coords(r.J)),
            "cycle": [show_vertex(v, n) for v in r.cycle],
        }
        for r in enumerate_rectangles(n)
    ]
    emit(cfg, {"n": n, "count": len(rows), "rectangles": rows}, rows)
    return EXIT_OK


def cmd_classify_triple(cfg: RunConfig, args) -> int:
    check_dimension(cfg.n, 1, MAX_N)
    v, v1, v2 = (parse_vertex(t, cfg.n) for t in args.vertices)
    res = classify_triple(v, v1, v2)
    fourth = None if res.fourth is None else show_vertex(res.fourth, cfg.n)
    emit(cfg, {"kind": res.kind.value, "fourth": fourth})
    return EXIT_OK


def _descriptor_record(d: SubcubeDescriptor) -> dict:
    return {
        "k": d.k,
        "base": show_vertex(d.base, d.n),
        "blocks": [list(mask_coords(b)) for b in d.blocks],
        "points": [show_vertex(v, d.n) for v in members(d.points())],
    }


def cmd_subcube(cfg: RunConfig, args) -> int:
    check_dimension(cfg.n, 1, MAX_N)
    n = cfg.n
    if args.base is not None:
        if args.vertices:
            raise UsageError("give either vertices to recognize or --base/--block to generate, not both")
        d = SubcubeDescriptor(n, parse_vertex(args.base, n), tuple(parse_block(b, n) for b in args.block))
        d = recover_descriptor(generate_subcube(d), n)
    else:
        if not args.vertices:
            raise UsageError("subcube needs vertices or --base")
        S = 0
        for t in args.vertices:
            S |= 1 << parse_vertex(t, n)
        d = recover_descriptor(S, n)
    emit(cfg, _descriptor_record(d))
    return EXIT_OK


def cmd_normalize(cfg: RunConfig, args) -> int:
    check_dimension(cfg.n, 2, MAX_N)
    cat = load_catalog(cfg)
    O = read_orientation(args.input, cat)
    res = normalize(O, cat, strict=False)
    if args.output and res.verified:
        write_orientation(res.normalized, cat, args.output)
        note(f"wrote normalized orientation {args.output}")
    emit(cfg, res.record(cfg.n))
    return EXIT_OK if res.verified else EXIT_FAILED


def _report(cfg: RunConfig, args):
    check_dimension(cfg.n, 2, MAX_N)
    if cfg.exhaustive and cfg.n > EXHAUSTIVE_MAX_N:
        raise CapExceededError(f"--exhaustive is limited to n <= {EXHAUSTIVE_MAX_N}")
    cat = load_catalog(cfg)
    R = rectangle_subset(cfg.n, args.rect_subset)
    kwargs = dict(inference=args.inference, search=not args.no_search, exhaustive=cfg.exhaustive, jobs=cfg.jobs)
    if args.command == "reconstruct":
        report = propagate(cfg.n, cat, R, **kwargs)
    else:
        report = verify_conjecture(cfg.n, cat, R, **kwargs)
    rec = report.record(timing=cfg.timing)
    rec["rect_subset"] = args.rect_subset
    rec["inference"] = args.inference
    return report, rec


def cmd_reconstruct(cfg: RunConfig, args) -> int:
    _, rec = _report(cfg, args)
    emit(cfg, rec)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    report, rec = _report(cfg, args)
    emit(cfg, rec)
    return EXIT_OK if report.verdict is Verdict.VERIFIED else EXIT_FAILED


def cmd_selftest(cfg: RunConfig, args) -> int:
    check_dimension(cfg.n, 2, SELFTEST_MAX_N)
    results = run_selftest(cfg.n, seed=cfg.seed, exhaustive=cfg.exhaustive)
    rows = [r.record() for r in results]
    ok = all(r.passed for r in results)
    emit(cfg, {"n": cfg.n, "seed": cfg.seed, "exhaustive": cfg.exhaustive, "passed": ok, "suites": rows}, rows)
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "enumerate": cmd_enumerate,
    "rectangles": cmd_rectangles,
    "classify-triple": cmd_classify_triple,
    "subcube": cmd_subcube,
    "normalize": cmd_normalize,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


# --- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help=f"cube dimension (cap {MAX_N}; selftest cap {SELFTEST_MAX_N})")
    common.add_argument("--cache", type=Path, help=f"catalog cache file (default: ${CACHE_ENV} or ~/.cache/cube_om)")
    common.add_argument("--rebuild-cache", action="store_true", help="re-enumerate and overwrite the catalog cache")
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=1, help="worker threads for propagation")
    common.add_argument("--exhaustive", action="store_true")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in reports")

    parser = argparse.ArgumentParser(prog="cube-om", description="Exact oriented-matroid engine for the n-cube.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="hyperplane catalog and structure counts")
    p.add_argument("--aff-out", type=Path, help="also write the orientation Aff(C^n) to this file")
    p.add_argument("--reorient", metavar="HEX", help="reorient the written orientation by this vertex set")

    sub.add_parser("rectangles", parents=[common], help="list every rectangle")

    p = sub.add_parser("classify-triple", parents=[common], help="fourth cube point on the plane of three vertices")
    p.add_argument("vertices", nargs=3, metavar="VERTEX")

    p = sub.add_parser("subcube", parents=[common], help="recognize or generate a subcube")
    p.add_argument("vertices", nargs="*", metavar="VERTEX")
    p.add_argument("--base", metavar="VERTEX")
    p.add_argument("--block", action="append", default=[], metavar="COORDS")

    p = sub.add_parser("normalize", parents=[common], help="reorient an orientation to contain every positive facet cocircuit")
    p.add_argument("input", type=Path)
    p.add_argument("--output", type=Path, help="write the normalized orientation here")

    sub.add_parser("selftest", parents=[common], help="run the built-in acceptance suites")

    for name, text in (("reconstruct", "determinacy report"), ("verify", "check the cube conjecture at n")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--rect-subset", choices=("all", "faces"), default="all")
        p.add_argument("--inference", choices=("full", "two-point"), default="full")
        p.add_argument("--no-search", action="store_true", help="unit propagation only, no branching")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_protect_vertices(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    cfg = RunConfig(
        n=args.n,
        command=args.command,
        cache_path=args.cache,
        output_format=args.output_format,
        seed=args.seed,
        exhaustive=args.exhaustive,
        jobs=max(1, args.jobs),
        rebuild_cache=args.rebuild_cache,
        timing=args.timing,
    )
    try:
        return COMMANDS[args.command](cfg, args)
    except (CapExceededError, ResourceError, MemoryError) as exc:
        note(f"error: {exc}")
        return EXIT_CAP
    except CubeError as exc:
        note(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
