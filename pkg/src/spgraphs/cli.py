"""Command-line front end: ``spgraphs {count,constants,verify,oracle}``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors.
Output goes to ``--output`` (relative paths resolve against $SPGRAPHS_OUTPUT_DIR
when it is set), otherwise to stdout.  Files are written atomically.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import asdict, dataclass

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
OUTPUT_ENV = "SPGRAPHS_OUTPUT_DIR"
MAX_UNIVARIATE = 3000
MAX_REFINED = 400


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str | None = None
    level: str | None = None
    upto: int | None = None
    refined: bool = False
    prec: int = 256
    max_n: int = 7
    fmt: str = "csv"
    output: str | None = None
    suite: str | None = None
    threads: int = 1

    def validate(self) -> "RunConfig":
        from .families import ConnectivityLevel, FamilyKind

        try:
            if self.family is not None and self.family != "all":
                FamilyKind.parse(self.family)
            if self.level is not None:
                ConnectivityLevel.parse(self.level)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.upto is not None:
            cap = MAX_REFINED if self.refined else MAX_UNIVARIATE
            if not 1 <= self.upto <= cap:
                raise UsageError(f"--upto must be between 1 and {cap}")
        if not 32 <= self.prec <= 8192:
            raise UsageError("--prec must be between 32 and 8192 bits")
        if not 1 <= self.max_n <= 8:
            raise UsageError("--max-n must be between 1 and 8")
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        return self

    def header(self) -> list[str]:
        cfg = {k: v for k, v in asdict(self).items() if k not in ("output", "threads") and v is not None}
        return [f"spgraphs {__version__}", "config " + " ".join(f"{k}={v}" for k, v in sorted(cfg.items()))]


def resolve_output(path: str | None, default_name: str) -> str | None:
    """None means stdout."""
    base = os.environ.get(OUTPUT_ENV)
    if path == "-":
        return None
    if path is None:
        return os.path.join(base, default_name) if base else None
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def write_output(text: str, path: str | None):
    """Write atomically: a temporary file in the target directory, then rename."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".spgraphs-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- commands ---------------------------------------------------------------------------

def cmd_count(cfg: RunConfig) -> int:
    from .families import counts

    upto = cfg.upto or (120 if cfg.refined else 400)
    table = counts(cfg.family, cfg.level, upto, refined=cfg.refined)
    if cfg.fmt == "json":
        text = table.to_json({"generator": f"spgraphs {__version__}", "config": cfg.header()[1]})
    else:
        text = table.to_csv(cfg.header())
    kind = "refined" if cfg.refined else "marginal"
    write_output(text, resolve_output(cfg.output, f"counts_{cfg.family}_{cfg.level}_{kind}_{upto}.{cfg.fmt}"))
    return EXIT_OK


def cmd_constants(cfg: RunConfig) -> int:
    import mpmath

    from . import report
    from .singular import SolverError

    try:
        rows = report.constants_report(cfg.prec)
        summary = report.summary_rows(cfg.prec)
    except SolverError as exc:
        print(f"error: internal cross-check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    lam = report.lookup(rows, "sp", "lambda")
    match = report.variance_match(lam)
    variance = {"value": mpmath.nstr(mpmath.mpf(lam), 12), "candidates": list(report.VARIANCE_CANDIDATES),
                "matches": match}
    header = cfg.header() + [f"precision {cfg.prec} and {2 * cfg.prec} bits; value_decimal keeps only agreed digits"]
    if cfg.fmt == "json":
        text = report.rows_to_json(rows, {"header": header}, {"summary_table": summary, "sp_variance_check": variance})
    else:
        text = report.rows_to_csv(rows, header) + "\n" + report.rows_to_csv(
            summary, [f"sp lambda {variance['value']} matches {match or 'none'} of {variance['candidates']}"])
    write_output(text, resolve_output(cfg.output, f"constants_{cfg.prec}.{cfg.fmt}"))
    return EXIT_OK if len(match) == 1 else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    from . import verify
    from .families import FAMILIES

    families = FAMILIES if cfg.family in (None, "all") else [cfg.family]
    results = verify.run_suite(cfg.suite, families, max_n=cfg.max_n, upto=cfg.upto or 30,
                               prec=cfg.prec, threads=cfg.threads)
    if cfg.fmt == "json":
        text = verify.render_json(results, {"header": cfg.header()})
    else:
        text = "\n".join("<!-- " + h + " -->" for h in cfg.header()) + "\n" + verify.render_markdown(results)
    ext = "json" if cfg.fmt == "json" else "md"
    write_output(text, resolve_output(cfg.output, f"verify_{cfg.suite}.{ext}"))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_oracle(cfg: RunConfig) -> int:
    from .families import FAMILIES
    from .oracle import BACKEND, OracleError, classify_and_count

    families = FAMILIES if cfg.family in (None, "all") else [cfg.family]
    try:
        tables = classify_and_count(cfg.max_n, families, allow_8=cfg.max_n == 8, threads=cfg.threads)
    except OracleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    header = cfg.header() + [f"backend {BACKEND}"]
    parts = []
    for i, fam in enumerate(tables):
        text = tables[fam].to_csv(None if i else header)
        parts.append(text.split("\n", 1)[1] if i else text)
    write_output("".join(parts), resolve_output(cfg.output, f"oracle_n{cfg.max_n}.csv"))
    return EXIT_OK


COMMANDS = {"count": cmd_count, "constants": cmd_constants, "verify": cmd_verify, "oracle": cmd_oracle}


def build_parser() -> argparse.ArgumentParser:
    from .families import FAMILIES, LEVELS
    from .verify import SUITES

    fams = [f.value for f in FAMILIES]
    levs = [lev.value for lev in LEVELS]
    p = argparse.ArgumentParser(prog="spgraphs", description="Exact and asymptotic enumeration of "
                                "series-parallel, outerplanar and K23-minor-free labelled graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices=("csv", "json"), default_fmt="csv"):
        sp.add_argument("--output", "-o", help=f"output file ('-' for stdout); relative paths use ${OUTPUT_ENV}")
        sp.add_argument("--format", dest="fmt", choices=fmt_choices, default=default_fmt, help="output format")
        sp.add_argument("--threads", type=int, default=1, help="worker processes (results do not depend on it)")

    c = sub.add_parser("count", help="count tables from the generating functions")
    c.add_argument("--family", choices=fams, default="sp", help="graph family")
    c.add_argument("--level", choices=levs, default="all", help="connectivity level")
    c.add_argument("--upto", type=int, help="largest n (default 400, or 120 with --refined)")
    c.add_argument("--refined", action="store_true", help="split counts by number of edges q")
    common(c)

    k = sub.add_parser("constants", help="singularities, expansion and limit-law constants")
    k.add_argument("--prec", type=int, default=256, help="working precision in bits (also rerun at twice this)")
    common(k, default_fmt="json")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=SUITES, default="all", help="which checks to run")
    v.add_argument("--family", choices=fams + ["all"], default="all", help="restrict to one family")
    v.add_argument("--max-n", type=int, default=7, help="largest n for the brute-force comparison")
    v.add_argument("--upto", type=int, help="largest n for identity checks (default 30)")
    v.add_argument("--prec", type=int, default=256, help="working precision in bits")
    common(v, ("markdown", "json"), "markdown")

    o = sub.add_parser("oracle", help="brute-force counts over all labelled graphs")
    o.add_argument("--family", choices=fams + ["all"], default="all", help="restrict to one family")
    o.add_argument("--max-n", type=int, default=7, help="largest n (8 is slow)")
    common(o, ("csv",))
    return p


def parse_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields).validate()


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"spgraphs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    try:
        return COMMANDS[cfg.command](cfg)
    except (ValueError, KeyError) as exc:
        print(f"spgraphs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MemoryError:
        print("spgraphs: error: out of memory; try a smaller --upto", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
