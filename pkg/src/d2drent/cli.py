"""Command-line front end; a thin HTTP client of the service.

Without --server the app is driven in-process through an ASGI transport, so
the CLI works standalone while staying byte-compatible with a remote service.
"""
from __future__ import annotations

import argparse
import csv
import sys

import httpx

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .config import _FIELD_MAP, ConfigError
from .service import app

RUN_COLUMNS = ["slot", "policy", "active_due", "admitted", "revenue",
               "r_max", "eta", "cum_eta"]
COMPARE_COLUMNS = ["policy", "slot", "mean_cum_eta", "std_cum_eta", "reps"]


class CliError(Exception):
    pass


def _parse_set_value(raw: str):
    lowered = raw.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    return raw


def _flatten_key(key: str) -> str:
    name = key
    if "." in key:
        section, name = key.split(".", 1)
        if name not in _FIELD_MAP or _FIELD_MAP[name][0] != section:
            raise CliError(f"unknown config key: {key}")
    if name not in _FIELD_MAP:
        raise CliError(f"unknown config key: {key}")
    return name


def _build_config_payload(args) -> dict:
    mapping: dict = {}
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                document = tomllib.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read config file: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise CliError(f"config parse failure: {exc}") from exc
        for key, value in document.items():
            mapping[_flatten_key(key)] = value
    for item in args.set or []:
        if "=" not in item:
            raise CliError(f"--set expects key=value, got: {item}")
        key, raw = item.split("=", 1)
        mapping[_flatten_key(key.strip())] = _parse_set_value(raw.strip())
    return mapping


def _client(args) -> httpx.Client:
    if args.server:
        return httpx.Client(base_url=args.server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    return TestClient(app)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise CliError(f"{path} failed ({response.status_code}): {detail}")
    return response.json()


def _write_csv(out_path, columns, rows) -> None:
    def dump(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row[c] for c in columns])

    if out_path:
        with open(out_path, "w", newline="") as fh:
            dump(fh)
    else:
        dump(sys.stdout)


def cmd_threshold(args) -> int:
    payload = {"config": _build_config_payload(args)}
    with _client(args) as client:
        data = _post(client, "/threshold", payload)
    switch = data["switch_slot"]
    print(f"omega = {data['omega']!r}")
    print(f"rho_star = {data['rho_star']!r}")
    print(f"switch_slot = {'never' if switch is None else switch}")
    return 0


def cmd_run(args) -> int:
    payload = {
        "config": _build_config_payload(args),
        "policy": args.policy,
        "seed": args.seed,
    }
    with _client(args) as client:
        data = _post(client, "/run", payload)
    _write_csv(args.out, RUN_COLUMNS, data["rows"])
    summary = sys.stdout if args.out else sys.stderr
    total = sum(row["revenue"] for row in data["rows"])
    print(f"policy={data['policy']} seed={data['seed']} "
          f"slots={len(data['rows'])} total_revenue={total!r}", file=summary)
    return 0


def cmd_compare(args) -> int:
    payload = {
        "config": _build_config_payload(args),
        "seed": args.seed,
        "jobs": args.jobs,
    }
    with _client(args) as client:
        data = _post(client, "/compare", payload)
    _write_csv(args.out, COMPARE_COLUMNS, data["rows"])
    summary = sys.stdout if args.out else sys.stderr
    print(f"final-slot mean cumulative eta over {data['reps']} reps "
          f"(seed {data['seed']}):", file=summary)
    for name, value in data["final_eta"].items():
        print(f"  {name}: {value:.6f}", file=summary)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="d2drent",
        description="Simulate C-UEs renting spectrum to D2D pairs in OMA/NOMA "
                    "mode and compare mode-selection policies.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML config file (flat keys)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config field (dotted keys allowed)")
        p.add_argument("--server", help="base URL of a running service; "
                                        "defaults to in-process execution")

    p = sub.add_parser("threshold",
                       help="report omega, rho*, and the closed-form switch slot")
    common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("run", help="run a single episode and emit a per-slot CSV")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--policy", default="proposed",
                   choices=["proposed", "all-noma", "all-oma", "random"])
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare",
                       help="Monte Carlo comparison of all four policies")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel repetition workers (output is identical "
                        "for any value)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
