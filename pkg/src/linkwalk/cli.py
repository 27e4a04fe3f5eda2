"""Command-line front end: dataset stats, candidate scoring, and evaluation runs.

Machine-readable results go to files in the chosen output directory, with the
full run configuration embedded in every output; progress goes to stderr.
Exit codes: 0 success, 2 configuration or parse error, 3 numeric failure.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import click

from ._version import __version__
from .errors import ConfigError, LinkwalkError, NumericError, ParseError
from .evaluation import (
    ALL_METHODS,
    EvaluationReport,
    run_experiment,
    score_candidates,
    write_curves_csv,
    write_report_csv,
    write_report_json,
)
from .graph import Network, compute_stats, degree_ccdf, parse_edge_list
from .scoring import candidate_pairs, write_scores_csv

METHOD_CHOICES = ALL_METHODS + ("all",)
FORMAT_CHOICES = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; serialized verbatim into every output."""

    command: str
    dataset_path: str
    methods: tuple[str, ...]
    remove_fracs: tuple[float, ...]
    trials: int
    master_seed: int
    t: float | None
    out_dir: str
    formats: tuple[str, ...]
    top_k: int | None
    include_self_pairs: bool
    tie_averaged_ap: bool
    spm_hold_out: float
    spm_reps: int
    cache_dir: str | None
    threads: int

    def validate(self) -> None:
        if self.t is not None and self.t < 0:
            raise ConfigError("--t must be non-negative")
        for frac in self.remove_fracs:
            if not 0.0 < frac < 1.0:
                raise ConfigError("--remove-frac values must be in (0, 1)")
        if self.trials < 1:
            raise ConfigError("--trials must be >= 1")
        if self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if self.top_k is not None and self.top_k < 1:
            raise ConfigError("--top-k must be >= 1")
        if not 0.0 < self.spm_hold_out < 1.0:
            raise ConfigError("--spm-hold-out must be in (0, 1)")
        if self.spm_reps < 1:
            raise ConfigError("--spm-reps must be >= 1")
        for fmt in self.formats:
            if fmt not in FORMAT_CHOICES:
                raise ConfigError(f"unknown output format {fmt!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    def header_lines(self) -> list[str]:
        return [
            f"version: {__version__}",
            f"config: {json.dumps(self.to_dict(), sort_keys=True)}",
        ]


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, NumericError):
        return 3
    return 2


def _cli_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (LinkwalkError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exit_code_for(exc))

    return wrapper


def _load_network(path: Path) -> Network:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_edge_list(fh)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _expand_methods(methods: tuple[str, ...]) -> tuple[str, ...]:
    out: list[str] = []
    for method in methods:
        for concrete in ALL_METHODS if method == "all" else (method,):
            if concrete not in out:
                out.append(concrete)
    return tuple(out)


def _progress(message: str) -> None:
    click.echo(message, err=True)


@click.group()
@click.version_option(version=__version__, prog_name="linkwalk")
def main() -> None:
    """Link prediction with continuous-time walk scores and baseline predictors."""


@main.command()
@click.argument("edge_list", type=click.Path(path_type=Path))
@click.option("--out-dir", type=click.Path(path_type=Path), default=Path("."), show_default=True)
@_cli_errors
def stats(edge_list: Path, out_dir: Path) -> None:
    """Print summary statistics and write the degree CCDF as CSV."""
    config = _make_config("stats", edge_list, out_dir=out_dir)
    net = _load_network(edge_list)
    s = compute_stats(net)
    click.echo("n,m,mean_degree,density,mean_clustering,assortativity,self_loops")
    click.echo(
        f"{s.n},{s.m},{s.mean_degree:.3f},{s.density:.3f},"
        f"{s.mean_clustering:.3f},{s.assortativity:.3f},{s.self_loops}"
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    ccdf_path = out_dir / "ccdf.csv"
    with open(ccdf_path, "w", encoding="utf-8") as fh:
        for line in config.header_lines():
            fh.write(f"# {line}\n")
        fh.write("degree,ccdf\n")
        for degree, fraction in degree_ccdf(net):
            fh.write(f"{degree},{fraction!r}\n")
    _progress(f"wrote {ccdf_path}")


@main.command()
@click.argument("edge_list", type=click.Path(path_type=Path))
@click.option("--method", type=click.Choice(METHOD_CHOICES), required=True)
@click.option("--t", type=float, default=None, help="Walk time; defaults to 1/<k>.")
@click.option("--top-k", type=int, default=None, help="Keep only the best K rows.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", type=click.Path(path_type=Path), default=Path("."), show_default=True)
@click.option("--include-self-pairs", type=click.BOOL, default=True, show_default=True)
@click.option("--spm-hold-out", type=float, default=0.1, show_default=True)
@click.option("--spm-reps", type=int, default=10, show_default=True)
@click.option("--cache-decomposition", type=click.Path(path_type=Path), default=None,
              help="Directory for reusable eigendecomposition files.")
@_cli_errors
def predict(
    edge_list: Path,
    method: str,
    t: float | None,
    top_k: int | None,
    seed: int,
    out_dir: Path,
    include_self_pairs: bool,
    spm_hold_out: float,
    spm_reps: int,
    cache_decomposition: Path | None,
) -> None:
    """Score every candidate pair of the network and write a ranked CSV."""
    if method == "all":
        raise ConfigError("predict needs a single method, not 'all'")
    config = _make_config(
        "predict",
        edge_list,
        methods=(method,),
        t=t,
        top_k=top_k,
        master_seed=seed,
        out_dir=out_dir,
        include_self_pairs=include_self_pairs,
        spm_hold_out=spm_hold_out,
        spm_reps=spm_reps,
        cache_dir=cache_decomposition,
    )
    net = _load_network(edge_list)
    _progress(f"loaded {edge_list}: n={net.n} m={net.m}")
    cands = candidate_pairs(net, include_self_pairs)
    _progress(f"scoring {len(cands)} candidate pairs with {method}")
    table = score_candidates(
        net,
        method,
        cands,
        t=t,
        spm_hold_out=spm_hold_out,
        spm_reps=spm_reps,
        spm_rng=seed,
        cache_dir=cache_decomposition,
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "predictions.csv"
    write_scores_csv(table, net, out_path, top_k=top_k, header_lines=config.header_lines())
    _progress(f"wrote {out_path}")


@main.command()
@click.argument("edge_list", type=click.Path(path_type=Path))
@click.option("--method", "methods", type=click.Choice(METHOD_CHOICES), multiple=True,
              default=("all",), show_default=True)
@click.option("--remove-frac", "remove_fracs", type=float, multiple=True,
              default=(0.1,), show_default=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--t", type=float, default=None, help="Walk time; defaults to 1/<k> per split.")
@click.option("--out-dir", type=click.Path(path_type=Path), default=Path("."), show_default=True)
@click.option("--format", "formats", type=click.Choice(FORMAT_CHOICES), multiple=True,
              default=FORMAT_CHOICES, show_default=True)
@click.option("--include-self-pairs", type=click.BOOL, default=True, show_default=True)
@click.option("--tie-averaged-ap", is_flag=True, default=False,
              help="Report the expectation of AP over random tie orderings instead.")
@click.option("--spm-hold-out", type=float, default=0.1, show_default=True)
@click.option("--spm-reps", type=int, default=10, show_default=True)
@click.option("--cache-decomposition", type=click.Path(path_type=Path), default=None)
@click.option("--threads", type=int, default=None,
              help="Worker cap for parallel trials; defaults to the core count.")
@_cli_errors
def evaluate(
    edge_list: Path,
    methods: tuple[str, ...],
    remove_fracs: tuple[float, ...],
    trials: int,
    seed: int,
    t: float | None,
    out_dir: Path,
    formats: tuple[str, ...],
    include_self_pairs: bool,
    tie_averaged_ap: bool,
    spm_hold_out: float,
    spm_reps: int,
    cache_decomposition: Path | None,
    threads: int | None,
) -> None:
    """Run the edge-removal evaluation and write report and curve files."""
    resolved_threads = threads if threads is not None else (os.cpu_count() or 1)
    concrete = _expand_methods(methods)
    config = _make_config(
        "evaluate",
        edge_list,
        methods=concrete,
        remove_fracs=tuple(remove_fracs),
        trials=trials,
        master_seed=seed,
        t=t,
        out_dir=out_dir,
        formats=tuple(formats),
        include_self_pairs=include_self_pairs,
        tie_averaged_ap=tie_averaged_ap,
        spm_hold_out=spm_hold_out,
        spm_reps=spm_reps,
        cache_dir=cache_decomposition,
        threads=resolved_threads,
    )
    net = _load_network(edge_list)
    _progress(f"loaded {edge_list}: n={net.n} m={net.m}")
    report = run_experiment(
        net,
        concrete,
        list(remove_fracs),
        trials,
        seed,
        t=t,
        spm_hold_out=spm_hold_out,
        spm_reps=spm_reps,
        include_self_pairs=include_self_pairs,
        tie_averaged_ap=tie_averaged_ap,
        threads=resolved_threads,
        dataset=edge_list.stem,
        config=config.to_dict(),
        progress=_progress,
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        write_report_csv(report, out_dir / "report.csv", config.header_lines())
        write_curves_csv(report, out_dir / "curves.csv", config.header_lines())
        written += ["report.csv", "curves.csv"]
    if "json" in formats:
        write_report_json(report, out_dir / "report.json")
        written.append("report.json")
    click.echo(_format_grid(report, concrete, tuple(remove_fracs)))
    _progress("wrote " + ", ".join(str(out_dir / name) for name in written))


def _format_grid(
    report: EvaluationReport, methods: tuple[str, ...], fracs: tuple[float, ...]
) -> str:
    lines = []
    for label, getter in (("AUC", report.mean_auc), ("AP", report.mean_ap)):
        lines.append(f"mean {label}")
        header = ["remove_frac"] + list(methods)
        lines.append("  ".join(f"{h:>11}" for h in header))
        for frac in fracs:
            cells = [f"{frac:>11.2f}"] + [f"{getter(m, frac):>11.3f}" for m in methods]
            lines.append("  ".join(cells))
    return "\n".join(lines)


def _make_config(
    command: str,
    dataset_path: Path,
    *,
    methods: tuple[str, ...] = (),
    remove_fracs: tuple[float, ...] = (),
    trials: int = 1,
    master_seed: int = 0,
    t: float | None = None,
    out_dir: Path = Path("."),
    formats: tuple[str, ...] = FORMAT_CHOICES,
    top_k: int | None = None,
    include_self_pairs: bool = True,
    tie_averaged_ap: bool = False,
    spm_hold_out: float = 0.1,
    spm_reps: int = 10,
    cache_dir: Path | None = None,
    threads: int = 1,
) -> RunConfig:
    config = RunConfig(
        command=command,
        dataset_path=str(dataset_path),
        methods=methods,
        remove_fracs=remove_fracs,
        trials=trials,
        master_seed=master_seed,
        t=t,
        out_dir=str(out_dir),
        formats=formats,
        top_k=top_k,
        include_self_pairs=include_self_pairs,
        tie_averaged_ap=tie_averaged_ap,
        spm_hold_out=spm_hold_out,
        spm_reps=spm_reps,
        cache_dir=None if cache_dir is None else str(cache_dir),
        threads=threads,
    )
    config.validate()
    return config


if __name__ == "__main__":
    main()
