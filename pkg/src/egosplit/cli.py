"""Command-line front end: persona / train / eval / project.

Every run writes a ``manifest.json`` (full configuration, seeds, package
version, kernel backend) into the output directory; line-oriented
artifacts carry the manifest hash as a comment so results can be traced
back to the exact invocation.  Exit codes: 0 success, 1 usage error,
2 data error, 3 internal error.
"""

from __future__ import annotations

import hashlib
import json
import sys
import time
import warnings
from pathlib import Path

import click
import numpy as np

from . import __version__, kernels
from .errors import DataError
from .graph import Graph, largest_connected_component, load_edge_list
from .linkpred import (KNOWN_METHODS, run_evaluation, save_split,
                       split_edges)
from .persona import avg_personas_per_node, persona_decompose, write_persona_files
from .training import (TrainConfig, read_embeddings, train_base,
                       train_splitter, write_embeddings)
from .walks import WalkConfig

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib


def _read_config(ctx, param, value):
    """--config TOML file provides defaults; explicit flags win."""
    if not value:
        return
    with open(value, "rb") as fh:
        data = tomllib.load(fh)
    flat = {k.replace("-", "_"): v for k, v in data.items()}
    ctx.default_map = {**(ctx.default_map or {}), **flat}


def _config_option(fn):
    return click.option("--config", type=click.Path(exists=True, dir_okay=False),
                        is_eager=True, expose_value=False,
                        callback=_read_config,
                        help="TOML file with flag defaults (flags win).")(fn)


def _walk_options(fn):
    for deco in reversed([
        click.option("--walks", type=int, default=10, show_default=True,
                     help="Random walks per node."),
        click.option("--walk-len", type=int, default=40, show_default=True,
                     help="Walk length in nodes."),
        click.option("--window", type=int, default=5, show_default=True,
                     help="Context window over the walk."),
    ]):
        fn = deco(fn)
    return fn


def _train_options(fn):
    for deco in reversed([
        click.option("--dim", type=int, default=16, show_default=True,
                     help="Embedding dimensionality."),
        click.option("--alpha", type=float, default=0.025, show_default=True,
                     help="Initial SGD learning rate."),
        click.option("--lambda", "lam", type=float, default=0.1,
                     show_default=True,
                     help="Graph regularization coefficient."),
        click.option("--threads", type=int, default=1, show_default=True,
                     help="1 = deterministic; >1 = lock-free parallel SGD."),
    ]):
        fn = deco(fn)
    return fn


def _manifest(command: str, params: dict) -> dict:
    body = {
        "tool": "egosplit",
        "version": __version__,
        "backend": kernels.get_backend(),
        "command": command,
        "params": params,
    }
    blob = json.dumps(body, sort_keys=True, default=str)
    body["hash"] = hashlib.sha256(blob.encode()).hexdigest()[:12]
    return body


def _write_manifest(outdir: Path, manifest: dict) -> None:
    with (outdir / "manifest.json").open("w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _prepare_graph(path: str, directed: bool) -> tuple[Graph, Graph]:
    g = load_edge_list(path, directed=directed)
    lcc = largest_connected_component(g)
    return g, lcc


@click.group()
@click.version_option(__version__)
def cli():
    """Persona decomposition, persona embeddings, and link prediction."""


@cli.command("persona")
@click.argument("input_path", metavar="EDGELIST", type=click.Path())
@click.option("--directed", is_flag=True, help="Treat edges as directed.")
@click.option("--out", default="egosplit-out", show_default=True,
              help="Output directory.")
@_config_option
def cmd_persona(input_path, directed, out):
    """Decompose EDGELIST's largest component into its persona graph.

    Writes persona_edges.txt (persona-id edge list) and
    persona_mapping.tsv (persona id -> original label).
    """
    g, lcc = _prepare_graph(input_path, directed)
    pg = persona_decompose(lcc)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = _manifest("persona", {
        "input": input_path, "directed": directed})
    edges_path = outdir / "persona_edges.txt"
    mapping_path = outdir / "persona_mapping.tsv"
    write_persona_files(pg, edges_path, mapping_path)
    for path in (edges_path, mapping_path):
        _append_hash_comment(path, manifest["hash"])
    _write_manifest(outdir, manifest)
    click.echo(f"nodes={lcc.num_nodes} edges={lcc.num_edges} "
               f"personas={pg.num_personas} "
               f"personas_per_node={avg_personas_per_node(pg):.4f}")


def _append_hash_comment(path: Path, digest: str) -> None:
    with path.open("a") as fh:
        fh.write(f"# manifest: {digest}\n")


@cli.command("train")
@click.argument("input_path", metavar="EDGELIST", type=click.Path())
@click.option("--directed", is_flag=True, help="Treat edges as directed.")
@_walk_options
@_train_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default="egosplit-out", show_default=True)
@_config_option
def cmd_train(input_path, directed, walks, walk_len, window, dim, alpha,
              lam, threads, seed, out):
    """Train base and persona embeddings on EDGELIST's largest component.

    Writes base.wv and splitter.wv (word2vec text format; persona rows are
    labeled `label|k`), personas.tsv, and manifest.json.
    """
    g, lcc = _prepare_graph(input_path, directed)
    walk_cfg = WalkConfig(walks_per_node=walks, walk_length=walk_len,
                          window=window, seed=seed)
    train_cfg = TrainConfig(dim=dim, alpha=alpha, lam=lam, seed=seed,
                            threads=threads)
    if walks == 0:
        warnings.warn("walks=0: embeddings will equal their initialization",
                      UserWarning)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = _manifest("train", {
        "input": input_path, "directed": directed, "seed": seed,
        "walks": walks, "walk_len": walk_len, "window": window,
        "dim": dim, "alpha": alpha, "lambda": lam, "threads": threads})
    created: list[Path] = []
    try:
        base = train_base(lcc, walk_cfg, train_cfg)
        pg = persona_decompose(lcc)
        model = train_splitter(lcc, pg, walk_cfg, train_cfg, base)
        base_path = outdir / "base.wv"
        split_path = outdir / "splitter.wv"
        sidecar = outdir / "personas.tsv"
        created += [base_path, split_path, sidecar]
        write_embeddings(base, base_path)
        write_embeddings(model.table, split_path)
        with sidecar.open("w") as fh:
            fh.write(f"# manifest: {manifest['hash']}\n")
            fh.write("persona_label\toriginal_label\n")
            for p, lab in enumerate(model.table.labels):
                fh.write(f"{lab}\t{lcc.labels[int(model.p2n[p])]}\n")
        _write_manifest(outdir, manifest)
    except Exception:
        for path in created:
            path.unlink(missing_ok=True)
        raise
    click.echo(f"wrote {outdir}/base.wv ({lcc.num_nodes} x {dim}) and "
               f"{outdir}/splitter.wv ({pg.num_personas} x {dim})")


@cli.command("eval")
@click.argument("input_path", metavar="EDGELIST", type=click.Path())
@click.option("--directed", is_flag=True, help="Treat edges as directed.")
@click.option("--methods", default="jc,cn,aa,persona-jc,persona-cn,persona-aa",
              show_default=True,
              help=f"Comma list of {','.join(KNOWN_METHODS)}.")
@click.option("--fraction", type=float, default=0.5, show_default=True,
              help="Fraction of edges held out for testing.")
@click.option("--repeat", type=int, default=1, show_default=True,
              help="Number of split seeds; reports mean and stddev.")
@click.option("--dim", "dims", type=int, multiple=True, default=(16,),
              show_default=True, help="Embedding size(s); repeatable.")
@_walk_options
@click.option("--alpha", type=float, default=0.025, show_default=True)
@click.option("--lambda", "lam", type=float, default=0.1, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default="egosplit-out", show_default=True)
@_config_option
def cmd_eval(input_path, directed, methods, fraction, repeat, dims, walks,
             walk_len, window, alpha, lam, threads, seed, out):
    """Link prediction evaluation on EDGELIST's largest component."""
    method_list = [m.strip() for m in methods.split(",") if m.strip()]
    for m in method_list:
        if m not in KNOWN_METHODS:
            raise click.UsageError(f"unknown method {m!r}")
    if repeat < 1:
        raise click.UsageError("--repeat must be >= 1")
    g, lcc = _prepare_graph(input_path, directed)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = _manifest("eval", {
        "input": input_path, "directed": directed, "methods": method_list,
        "fraction": fraction, "repeat": repeat, "dims": list(dims),
        "walks": walks, "walk_len": walk_len, "window": window,
        "alpha": alpha, "lambda": lam, "threads": threads,
        "seed": seed})
    embed_methods = [m for m in method_list if m in ("deepwalk", "splitter")]
    plain_methods = [m for m in method_list if m not in embed_methods]
    results: dict[tuple[str, int | None], list[float]] = {}
    times: dict[tuple[str, int | None], float] = {}
    for r in range(repeat):
        run_seed = seed + r
        split = split_edges(lcc, fraction=fraction, seed=run_seed)
        save_split(split, outdir / f"split-{run_seed}.txt")
        _append_hash_comment(outdir / f"split-{run_seed}.txt",
                             manifest["hash"])
        batches = []
        if plain_methods:
            batches.append((plain_methods, None))
        for d in (dims if embed_methods else ()):
            batches.append((embed_methods, d))
        for batch, d in batches:
            walk_cfg = WalkConfig(walks_per_node=walks, walk_length=walk_len,
                                  window=window, seed=run_seed)
            train_cfg = TrainConfig(dim=d or 16, alpha=alpha, lam=lam,
                                    seed=run_seed, threads=threads)
            for row in run_evaluation(lcc, split, batch, walk_cfg, train_cfg):
                key = (row.method, d if row.dim is not None else None)
                results.setdefault(key, []).append(row.auc)
                times[key] = times.get(key, 0.0) + row.seconds
    report_path = outdir / "report.tsv"
    with report_path.open("w") as fh:
        fh.write(f"# manifest: {manifest['hash']}\n")
        fh.write("dataset\tmethod\tdim\tauc_mean\tauc_std\trepeats\tseconds\n")
        name = Path(input_path).name
        for (method, d), aucs in results.items():
            arr = np.array(aucs)
            fh.write(f"{name}\t{method}\t{d if d is not None else '-'}\t"
                     f"{arr.mean():.4f}\t{arr.std():.4f}\t{len(arr)}\t"
                     f"{times[(method, d)]:.2f}\n")
    _write_manifest(outdir, manifest)
    click.echo(_format_report(results, times))
    click.echo(f"report: {report_path}")


def _format_report(results, times) -> str:
    lines = [f"{'method':<14}{'dim':>5} {'auc':>8} {'std':>8} {'sec':>9}"]
    for (method, d), aucs in results.items():
        arr = np.array(aucs)
        lines.append(f"{method:<14}{d if d is not None else '-':>5} "
                     f"{arr.mean():8.4f} {arr.std():8.4f} "
                     f"{times[(method, d)]:9.2f}")
    return "\n".join(lines)


@cli.command("project")
@click.argument("embedding_path", metavar="EMBEDDINGS",
                type=click.Path())
@click.option("--out", default="egosplit-out", show_default=True)
@click.option("--method", type=click.Choice(["pca"]), default="pca",
              show_default=True)
@_config_option
def cmd_project(embedding_path, out, method):
    """Project an embedding file to 2-D plot coordinates (TSV)."""
    labels, matrix = read_embeddings(embedding_path)
    if matrix.shape[1] < 2:
        raise DataError("need at least 2 dimensions to project")
    centered = matrix - matrix.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    coords = centered @ vt[:2].T
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = _manifest("project", {
        "input": embedding_path, "method": method})
    target = outdir / "coords.tsv"
    with target.open("w") as fh:
        fh.write(f"# manifest: {manifest['hash']}\n")
        fh.write("label\tx\ty\n")
        for lab, (x, y) in zip(labels, coords):
            fh.write(f"{lab}\t{x:.10g}\t{y:.10g}\n")
    _write_manifest(outdir, manifest)
    click.echo(f"wrote {target} ({len(labels)} rows)")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (DataError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        click.echo(f"internal error: {exc!r}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
