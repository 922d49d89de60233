"""Command-line front end: enumeration, complexes, Betti numbers, characters,
decompositions, cross-checks, character tables, and the n=5 isotypic analysis.

Exit codes: 0 success, 1 invalid configuration or input, 2 internal
consistency failure (boundary/rank/character checks).
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import NamedTuple, Optional

from . import __version__
from .chain_complex import (
    CACHE_ENV,
    InternalConsistencyError,
    betti,
    build_basis,
    build_complex,
)
from .equivariant_homology import (
    DEFAULT_SEED,
    chain_character,
    homology_character_next,
    homology_character_top,
    kernel_character_oracle,
)
from .linalg import RankCertificateError
from .symfunc_check import check_euler
from .symmetric_group import (
    NotACharacterError,
    ClassFunction,
    character_table,
    decompose,
    partitions_of,
)
from .theta_graphs import enumerate_theta, has_odd_automorphism, to_line


class RunConfig(NamedTuple):
    command: str
    n: Optional[int] = None
    method: str = "projection"
    seed: int = DEFAULT_SEED
    cache: Optional[str] = None
    fmt: str = "text"
    threads: Optional[int] = None
    degree: Optional[int] = None
    values: Optional[str] = None


class _Stages:
    """Wall-clock accounting per pipeline stage."""

    def __init__(self):
        self.entries = []

    def run(self, name, fn):
        t0 = time.perf_counter()
        out = fn()
        self.entries.append((name, time.perf_counter() - t0))
        return out

    def as_dict(self):
        return {name: round(dt, 6) for name, dt in self.entries}


def _part_str(lam):
    return ",".join(str(a) for a in lam)


def _metadata(config, stages):
    return {
        "version": __version__,
        "seed": config.seed,
        "timings": stages.as_dict(),
    }


def _emit_json(payload):
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _text_metadata(config, stages):
    lines = [f"# version={__version__} seed={config.seed}"]
    for name, dt in stages.entries:
        lines.append(f"# stage {name}: {dt:.3f}s")
    return lines


def _character_block(n, degree, values, mults, seed):
    return {
        "n": n,
        "degree": degree,
        "classes": [_part_str(mu) for mu in partitions_of(n)],
        "values": [int(v) for v in values],
        "decomposition": {_part_str(lam): int(k) for lam, k in sorted(mults.items())},
        "seed": seed,
    }


def _character_text(title, n, values, mults):
    classes = [_part_str(mu) for mu in partitions_of(n)]
    widths = [max(len(c), len(str(v))) for c, v in zip(classes, values)]
    head = "  ".join(c.rjust(w) for c, w in zip(classes, widths))
    row = "  ".join(str(v).rjust(w) for v, w in zip(values, widths))
    dec = " + ".join(
        (f"{k}*chi_{_part_str(lam)}" if k > 1 else f"chi_{_part_str(lam)}")
        for lam, k in sorted(mults.items(), reverse=True)
    )
    return [title, head, row, f"decomposition: {dec}"]


def _cmd_enumerate(config, stages):
    n = config.n
    degrees = [config.degree] if config.degree is not None else list(range(n, n + 3))
    blocks = []
    for p in degrees:
        graphs = stages.run(
            f"enumerate_p{p}", lambda p=p: enumerate_theta(n, p + 1, full_only=True)
        )
        kept = [g for g in graphs if not has_odd_automorphism(g)]
        blocks.append((p, graphs, kept))
    payload = {
        "n": n,
        "degrees": [
            {
                "degree": p,
                "classes": len(graphs),
                "with_odd_automorphism": len(graphs) - len(kept),
                "dim": len(kept),
                "graphs": [to_line(g) for g in kept] if config.degree is not None else None,
            }
            for p, graphs, kept in blocks
        ],
    }
    if config.fmt == "json":
        return _emit_json({"metadata": _metadata(config, stages), **payload})
    lines = _text_metadata(config, stages)
    for entry in payload["degrees"]:
        lines.append(
            "degree {degree}: {classes} classes, {with_odd_automorphism} odd, "
            "dim C_{degree} = {dim}".format(**entry)
        )
        if entry["graphs"]:
            lines.extend("  " + s for s in entry["graphs"])
    return "\n".join(lines) + "\n"


def _cmd_complex(config, stages):
    n = config.n
    cx = stages.run("complex", lambda: build_complex(n, config.cache))
    payload = {
        "n": n,
        "dims": {str(p): cx.basis(p).dim for p in range(n, n + 3)},
        "boundary_nnz": {str(p): cx.d(p).nnz for p in (n + 1, n + 2)},
        "d_squared_zero": True,  # enforced during construction
    }
    if config.fmt == "json":
        return _emit_json({"metadata": _metadata(config, stages), **payload})
    lines = _text_metadata(config, stages)
    lines.append(
        "dims: "
        + ", ".join(f"C_{p} = {payload['dims'][str(p)]}" for p in range(n, n + 3))
    )
    lines.append(
        "boundary nnz: "
        + ", ".join(f"d_{p}: {payload['boundary_nnz'][str(p)]}" for p in (n + 1, n + 2))
    )
    lines.append("d^2 = 0: verified")
    return "\n".join(lines) + "\n"


def _cmd_betti(config, stages):
    n = config.n
    top, nxt = stages.run("betti", lambda: betti(n, config.cache))
    if config.fmt == "json":
        payload = {
            "n": n,
            "betti": {f"H_{n + 2}": top, f"H_{n + 1}": nxt},
        }
        return _emit_json({"metadata": _metadata(config, stages), **payload})
    lines = _text_metadata(config, stages)
    lines.append(f"H_{n + 2}: {top}, H_{n + 1}: {nxt}")
    return "\n".join(lines) + "\n"


def _compute_characters(config, stages):
    n = config.n
    if config.method == "kernel-trace":
        top = stages.run("kernel_trace", lambda: kernel_character_oracle(n))
        chains = {p: chain_character(n, p) for p in (n, n + 1, n + 2)}
        nxt = chains[n + 1] - chains[n] - chains[n + 2] + top
        try:
            decompose(nxt)
        except NotACharacterError as exc:
            raise InternalConsistencyError(f"derived character invalid: {exc}")
    else:
        top = stages.run(
            "projection", lambda: homology_character_top(n, config.seed, config.cache)
        )
        nxt = stages.run(
            "euler_next", lambda: homology_character_next(n, config.seed, config.cache)
        )
    return top, nxt


def _cmd_characters(config, stages):
    n = config.n
    top, nxt = _compute_characters(config, stages)
    report = check_euler(n, top, nxt)
    if not all(entry.ok for entry in report):
        print(
            "advisory: generating-function cross-check failed on "
            + ", ".join(_part_str(e.cycle_type) for e in report if not e.ok),
            file=sys.stderr,
        )
    blocks = [
        _character_block(n, n + 2, top.as_ints(), decompose(top), config.seed),
        _character_block(n, n + 1, nxt.as_ints(), decompose(nxt), config.seed),
    ]
    if config.fmt == "json":
        return _emit_json({"metadata": _metadata(config, stages), "characters": blocks})
    if config.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["degree"] + blocks[0]["classes"])
        for b in blocks:
            writer.writerow([b["degree"]] + b["values"])
        return buf.getvalue()
    lines = _text_metadata(config, stages)
    lines += _character_text(f"H_{n + 2}:", n, blocks[0]["values"], decompose(top))
    lines += _character_text(f"H_{n + 1}:", n, blocks[1]["values"], decompose(nxt))
    return "\n".join(lines) + "\n"


def _cmd_decompose(config, stages):
    n = config.n
    parts = partitions_of(n)
    try:
        raw = [Fraction(v.strip()) for v in config.values.split(",")]
    except (ValueError, ZeroDivisionError, AttributeError):
        raise ConfigError("--values must be a comma-separated list of rationals")
    if len(raw) != len(parts):
        raise ConfigError(
            f"need {len(parts)} values (one per class of S_{n}), got {len(raw)}"
        )
    f = ClassFunction.from_row(n, raw)
    try:
        mults = stages.run("decompose", lambda: decompose(f))
    except NotACharacterError as exc:
        raise ConfigError(f"input is not a character: {exc}")
    payload = {
        "n": n,
        "decomposition": {_part_str(lam): k for lam, k in sorted(mults.items())},
    }
    if config.fmt == "json":
        return _emit_json({"metadata": _metadata(config, stages), **payload})
    lines = _text_metadata(config, stages)
    for lam, k in sorted(mults.items(), reverse=True):
        lines.append(f"chi_{_part_str(lam)}: {k}")
    return "\n".join(lines) + "\n"


def _cmd_verify(config, stages):
    n = config.n
    top, nxt = _compute_characters(config, stages)
    report = stages.run("euler_check", lambda: check_euler(n, top, nxt))
    agree = None
    if n <= 6:
        oracle = stages.run("kernel_trace", lambda: kernel_character_oracle(n))
        agree = oracle.as_ints() == top.as_ints()
    ok = all(entry.ok for entry in report) and agree is not False
    payload = {
        "n": n,
        "euler_check": [
            {
                "class": _part_str(e.cycle_type),
                "coefficient": str(e.coefficient),
                "bracket": str(e.bracket),
                "ok": e.ok,
            }
            for e in report
        ],
        "method_agreement": agree,
        "ok": ok,
    }
    if config.fmt == "json":
        out = _emit_json({"metadata": _metadata(config, stages), **payload})
    else:
        lines = _text_metadata(config, stages)
        lines.append(f"{'class':>16}  {'coefficient':>14}  {'bracket':>14}  ok")
        for e in report:
            lines.append(
                f"{_part_str(e.cycle_type):>16}  {str(e.coefficient):>14}  "
                f"{str(e.bracket):>14}  {'pass' if e.ok else 'FAIL'}"
            )
        if agree is None:
            lines.append("method agreement: skipped (kernel trace beyond budget)")
        else:
            lines.append(f"method agreement: {'pass' if agree else 'FAIL'}")
        lines.append("verify: " + ("pass" if ok else "FAIL"))
        out = "\n".join(lines) + "\n"
    if not ok:
        raise InternalConsistencyError("verification failed:\n" + out)
    return out


def _cmd_chartable(config, stages):
    n = config.n
    table = stages.run("chartable", lambda: character_table(n))
    classes = [_part_str(mu) for mu in partitions_of(n)]
    rows = {
        _part_str(lam): [int(v) for v in table.row(lam)] for lam in partitions_of(n)
    }
    if config.fmt == "json":
        payload = {"n": n, "classes": classes, "rows": rows}
        return _emit_json({"metadata": _metadata(config, stages), **payload})
    lines = _text_metadata(config, stages)
    width = max(len(c) for c in classes) + 2
    lines.append(" " * 12 + "".join(c.rjust(width) for c in classes))
    for lam in reversed(partitions_of(n)):
        vals = rows[_part_str(lam)]
        lines.append(
            _part_str(lam).ljust(12) + "".join(str(v).rjust(width) for v in vals)
        )
    return "\n".join(lines) + "\n"


def _cmd_analyze_d25(config, stages):
    from .d25_analysis import (
        equivariant_isomorphism,
        find_isotypic_cycle,
        orbit_basis,
        projection_on_kernel,
    )

    basis = build_basis(5, 7)
    v = stages.run("cycle_search", find_isotypic_cycle)
    support = [(to_line(basis.graphs[i]), int(v[i])) for i in range(60) if v[i]]
    p311 = stages.run("projection", lambda: projection_on_kernel((3, 1, 1)))
    vb = stages.run("orbit_basis", lambda: orbit_basis(v))
    h0 = stages.run("intertwiner", lambda: equivariant_isomorphism(vb))
    payload = {
        "n": 5,
        "cycle_support": [{"graph": g, "coefficient": c} for g, c in support],
        "projection_trace": str(sum(p311[i, i] for i in range(15))),
        "orbit_rank": 6,
        "h0": [[str(x) for x in row] for row in h0],
    }
    if config.fmt == "json":
        return _emit_json({"metadata": _metadata(config, stages), **payload})
    lines = _text_metadata(config, stages)
    lines.append("isotypic cycle support (graph, coefficient):")
    lines.extend(f"  {g}  {c:+d}" for g, c in support)
    lines.append(f"projection trace on kernel: {payload['projection_trace']}")
    lines.append("orbit basis rank: 6 (exact)")
    lines.append("h0:")
    lines.extend("  " + "  ".join(str(x).rjust(4) for x in row) for row in h0)
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "enumerate": (_cmd_enumerate, True),
    "complex": (_cmd_complex, True),
    "betti": (_cmd_betti, True),
    "characters": (_cmd_characters, True),
    "decompose": (_cmd_decompose, True),
    "verify": (_cmd_verify, True),
    "chartable": (_cmd_chartable, True),
    "analyze-d25": (_cmd_analyze_d25, False),
}

_N_BOUNDS = {
    "enumerate": (2, 8),
    "complex": (2, 8),
    "betti": (4, 8),
    "characters": (4, 8),
    "decompose": (2, 8),
    "verify": (4, 8),
    "chartable": (2, 8),
}


class ConfigError(ValueError):
    pass


def run(config: RunConfig):
    """Execute one subcommand; returns (exit status, formatted output)."""
    handler, needs_n = _COMMANDS[config.command]
    if needs_n:
        lo, hi = _N_BOUNDS[config.command]
        if config.n is None:
            raise ConfigError(f"{config.command} requires --n")
        if not lo <= config.n <= hi:
            raise ConfigError(f"--n must be in {lo}..{hi} for {config.command}")
    if config.seed < 0:
        raise ConfigError("--seed must be non-negative")
    if config.threads is not None:
        if config.threads < 1:
            raise ConfigError("--threads must be positive")
        from . import kernels

        kernels.set_threads(config.threads)
    if config.cache:
        os.environ[CACHE_ENV] = config.cache
    if config.n == 8 and config.command in ("complex", "betti", "characters", "verify"):
        print(
            "warning: n=8 is a large computation (expect hours of CPU time "
            "and multi-GB memory for rank certificates)",
            file=sys.stderr,
        )
    stages = _Stages()
    return 0, handler(config, stages)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="delta2n",
        description="Equivariant rational homology of the genus-2 tropical "
        "moduli spaces via full-theta chain complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, default=None)
        p.add_argument(
            "--method", choices=["projection", "kernel-trace"], default="projection"
        )
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--cache", default=os.environ.get(CACHE_ENV))
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--degree", type=int, default=None)
        if name == "decompose":
            p.add_argument("--values", default=None)
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return 1
    config = RunConfig(
        command=args.command,
        n=args.n,
        method=args.method,
        seed=args.seed,
        cache=args.cache,
        fmt=args.format,
        threads=args.threads,
        degree=args.degree,
        values=getattr(args, "values", None),
    )
    try:
        status, output = run(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InternalConsistencyError, RankCertificateError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(output)
    return status


if __name__ == "__main__":
    sys.exit(main())
