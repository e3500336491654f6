"""Command-line front end.

The CLI is a thin HTTP client.  By default it mounts the service in-process
through an ASGI transport; point ``--url`` at a running server to go over
the network instead.  ``gaussloop serve`` starts that server.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence,
4 output/I-O error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys

import httpx

from . import __version__

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class ConfigError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussloop",
        description="Gaussian test-function regularization of loop integrals.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    parser.add_argument("--config", help="INI run configuration file")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--sweep", metavar="PARAM", help="parameter to sweep")
    parser.add_argument(
        "--seq", metavar="V1,V2,...", help="comma-separated ladder for --sweep"
    )
    parser.add_argument("--url", help="remote service URL (default: in-process)")
    return parser


def load_config(path: str):
    """Parse a run configuration INI file.

    Sections: [run] with the scenario command, optional [params] and
    [quadrature] overrides.  Unknown sections are rejected.
    """
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    known = {"run", "params", "quadrature"}
    extra = set(cp.sections()) - known
    if extra:
        raise ConfigError(f"unknown config section(s): {', '.join(sorted(extra))}")
    if not cp.has_section("run") or not cp.has_option("run", "command"):
        raise ConfigError("config needs a [run] section with a 'command' entry")
    stray = set(cp.options("run")) - {"command"}
    if stray:
        raise ConfigError(f"unknown [run] option(s): {', '.join(sorted(stray))}")

    command = cp.get("run", "command")
    params = dict(cp.items("params")) if cp.has_section("params") else {}
    quadrature = {}
    if cp.has_section("quadrature"):
        allowed = {"abs_tol": float, "rel_tol": float, "max_evals": int}
        for key, raw in cp.items("quadrature"):
            if key not in allowed:
                raise ConfigError(f"unknown [quadrature] option {key!r}")
            try:
                quadrature[key] = allowed[key](raw)
            except ValueError as exc:
                raise ConfigError(f"[quadrature] {key}: cannot parse {raw!r}") from exc
    return command, params, quadrature


def _parse_seq(raw: str):
    try:
        values = [float(v) for v in raw.split(",") if v != ""]
    except ValueError as exc:
        raise ConfigError(f"--seq: cannot parse {raw!r}") from exc
    if not values:
        raise ConfigError("--seq: empty value ladder")
    return values


def _fmt_val(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(fh, payload):
    prov = payload["provenance"]
    fh.write(f"# tool: {prov['tool']} {prov['version']}\n")
    fh.write(f"# command: {prov['command']}\n")
    fh.write(f"# params: {json.dumps(prov['params'], sort_keys=True)}\n")
    for key in sorted(payload.get("summary", {})):
        fh.write(f"# summary {key}: {_fmt_val(payload['summary'][key])}\n")
    rows = payload["rows"]
    if not rows:
        return
    cols = list(rows[0])
    for row in rows[1:]:
        for key in row:
            if key not in cols:
                cols.append(key)
    fh.write(",".join(cols) + "\n")
    for row in rows:
        fh.write(",".join(_fmt_val(row.get(c, "")) for c in cols) + "\n")


def write_json(fh, payload):
    json.dump(payload, fh, indent=2, sort_keys=True)
    fh.write("\n")


def _post(args, path, body):
    if args.url:
        with httpx.Client(base_url=args.url, timeout=600.0) as client:
            return client.post(path, json=body)

    import asyncio

    from .api import create_app

    async def call():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://service", timeout=None
        ) as client:
            return await client.post(path, json=body)

    return asyncio.run(call())


def run_from_args(args) -> int:
    if not args.config:
        print("error: --config is required (or use the serve subcommand)", file=sys.stderr)
        return EXIT_CONFIG
    try:
        command, params, quadrature = load_config(args.config)
        if args.sweep and not args.seq:
            raise ConfigError("--sweep requires --seq")
        if args.seq and not args.sweep:
            raise ConfigError("--seq requires --sweep")
        body = {"command": command, "params": params}
        if quadrature:
            body["quadrature"] = quadrature
        if args.sweep:
            body["sweep"] = {"param": args.sweep, "values": _parse_seq(args.seq)}
            path = "/sweep"
        else:
            path = "/run"
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        resp = _post(args, path, body)
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return EXIT_IO
    if resp.status_code == 422:
        detail = resp.json().get("detail", resp.text)
        if isinstance(detail, list):
            detail = "; ".join(str(item.get("msg", item)) for item in detail)
        print(f"error: invalid run configuration: {detail}", file=sys.stderr)
        return EXIT_CONFIG
    if resp.status_code != 200:
        print(f"error: service returned {resp.status_code}: {resp.text}", file=sys.stderr)
        return EXIT_IO
    payload = resp.json()

    writer = write_csv if args.format == "csv" else write_json
    try:
        if args.out:
            with open(args.out, "w") as fh:
                writer(fh, payload)
        else:
            writer(sys.stdout, payload)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    bad = [r for r in payload["rows"] if not r.get("converged", True)]
    if bad:
        print(
            f"warning: {len(bad)} of {len(payload['rows'])} rows did not converge",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "serve":
        import uvicorn

        from .api import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK
    return run_from_args(args)


if __name__ == "__main__":
    sys.exit(main())
