"""Command-line client for the optimizer service.

Subcommands marshal flags into the service request models and invoke the same
handlers the HTTP routes use, either in process (default) or against a
running server via --server. Exit codes: 0 success, 1 configuration error,
2 runtime/IO error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import ConfigError, build_config, load_config_file
from .problems import InstanceFormatError
from .service import ops, schemas


class _Parser(argparse.ArgumentParser):
    """Argument errors are configuration errors (exit 1, not argparse's 2)."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="hrcqea", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an optimization experiment")
    run.add_argument("--config", help="flat key = value settings file")
    run.add_argument("--server", help="base URL of a running service to submit to")
    for flag, key in _RUN_FLAGS:
        run.add_argument(flag, dest=key, default=None)

    gen = sub.add_parser("gen-knapsack", help="generate a knapsack instance file")
    gen.add_argument("--items", required=True, type=int)
    gen.add_argument("--seed", required=True, type=int)
    gen.add_argument("--out", required=True, help="instance file to write")
    gen.add_argument("--server", help="base URL of a running service to submit to")

    summ = sub.add_parser("summarize", help="merge experiment summary CSVs in a directory")
    summ.add_argument("--in", dest="in_dir", required=True, help="directory of summary_*.csv files")
    summ.add_argument("--out", default=None, help="merged CSV path (default <dir>/summary.csv)")
    summ.add_argument("--server", help="base URL of a running service to submit to")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


_RUN_FLAGS = [
    ("--problem", "problem"),
    ("--dim", "dim"),
    ("--algo", "algo"),
    ("--pop", "pop"),
    ("--gens", "gens"),
    ("--runs", "runs"),
    ("--seed", "seed"),
    ("--out", "out"),
    ("--workers", "workers"),
    ("--instance", "instance"),
    ("--write-back", "write_back"),
    ("--qea-angle", "qea_angle"),
    ("--c1", "c1"),
    ("--c2", "c2"),
    ("--delta", "delta"),
    ("--lambda", "lambda"),
    ("--kappa", "kappa"),
    ("--tau", "tau"),
    ("--m-cross", "m_cross"),
    ("--m1", "m1"),
    ("--m2", "m2"),
]


def _post(server: str, path: str, payload, response_model):
    import httpx

    url = server.rstrip("/") + path
    resp = httpx.post(url, json=payload.model_dump(), timeout=None)
    if resp.status_code == 400:
        raise ConfigError(resp.json().get("detail", resp.text))
    resp.raise_for_status()
    return response_model.model_validate(resp.json())


def _cmd_run(args) -> int:
    settings: dict[str, str] = {}
    if args.config:
        try:
            settings.update(load_config_file(args.config))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {args.config}")
    for _, key in _RUN_FLAGS:
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    config = build_config(settings)

    instance_text = None
    if config.instance_path is not None:
        try:
            instance_text = Path(config.instance_path).read_text()
        except FileNotFoundError:
            raise ConfigError(f"instance file not found: {config.instance_path}")

    request = schemas.ExperimentRequest(
        problem=config.problem,
        dimension=config.dimension,
        algorithm=config.algorithm,
        population_size=config.population_size,
        t_max=config.t_max,
        runs=config.runs,
        seed=config.seed,
        workers=config.workers,
        write_back=config.write_back,
        qea_angle=config.qea_angle,
        instance_text=instance_text,
        include_traces=True,
        c1=config.c1,
        c2=config.c2,
        delta=config.delta,
        lam=config.lam,
        kappa=config.kappa,
        tau=config.tau,
        m_cross=config.m_cross,
        m1=config.m1,
        m2=config.m2,
    )
    if args.server:
        response = _post(args.server, "/experiments/run", request, schemas.ExperimentResponse)
    else:
        response = ops.run(request)

    sys.stdout.write(response.summary_csv)
    print(f"mean evaluations per run: {response.summary.mean_evaluations:.0f}")

    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        label = f"{response.summary.problem}_{response.summary.algorithm}"
        trace_path = out / f"trace_{label}.csv"
        summary_path = out / f"summary_{label}.csv"
        trace_path.write_text(response.trace_csv)
        summary_path.write_text(response.summary_csv)
        written = [trace_path, summary_path]
        if response.instance_text is not None and config.instance_path is None:
            inst_path = out / f"instance_{response.summary.problem}.txt"
            inst_path.write_text(response.instance_text)
            written.append(inst_path)
        for path in written:
            print(f"wrote {path}")
    return 0


def _cmd_gen_knapsack(args) -> int:
    request = schemas.GenerateKnapsackRequest(items=args.items, seed=args.seed)
    if args.server:
        response = _post(args.server, "/knapsack/generate", request,
                         schemas.GenerateKnapsackResponse)
    else:
        response = ops.generate_knapsack(request)
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(response.instance_text)
    print(f"wrote {out} ({response.items} items, capacity {response.capacity:.6g})")
    return 0


def _cmd_summarize(args) -> int:
    in_dir = Path(args.in_dir)
    if not in_dir.is_dir():
        raise ConfigError(f"--in {in_dir} is not a directory")
    files = sorted(in_dir.glob("summary_*.csv"))
    if not files:
        raise ConfigError(f"no summary_*.csv files under {in_dir}")
    request = schemas.SummarizeRequest(summaries=[f.read_text() for f in files])
    if args.server:
        response = _post(args.server, "/summarize", request, schemas.SummarizeResponse)
    else:
        response = ops.summarize(request)
    out = Path(args.out) if args.out else in_dir / "summary.csv"
    out.write_text(response.merged_csv)
    sys.stdout.write(response.merged_csv)
    print(f"wrote {out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("hrcqea.service.app:app", host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "gen-knapsack":
            return _cmd_gen_knapsack(args)
        if args.command == "summarize":
            return _cmd_summarize(args)
        return _cmd_serve(args)
    except (ConfigError, InstanceFormatError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures, HTTP errors
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
