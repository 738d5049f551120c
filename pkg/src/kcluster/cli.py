"""Command-line client for the simulation service.

Requests go to a running server when --server is given, otherwise to an
in-process instance of the same app.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Optional


def _client(server: Optional[str]):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _read_config(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SystemExit(f"error: {path}: invalid JSON ({exc})")


def _call(client, method: str, url: str, payload=None) -> dict:
    resp = client.request(method, url, json=payload)
    if resp.status_code != 200:
        detail = resp.json().get("detail", resp.text)
        raise SystemExit(f"error: {detail}")
    return resp.json()


def _write(out: str, text: str) -> None:
    Path(out).write_text(text)


def cmd_simulate(args) -> None:
    payload = {"config": _read_config(args.config), "seed": args.seed, "rounds": args.rounds,
               "scheme": args.scheme}
    with _client(args.server) as client:
        res = _call(client, "POST", "/simulate", payload)
    _write(args.out, res["csv"])
    fnd = res["first_node_death_round"]
    print(f"{res['scheme']}: {res['rounds']} rounds, first node death "
          f"{'none' if fnd is None else fnd}, {res['total_messages']} messages -> {args.out}")


def cmd_compare(args) -> None:
    payload = {"config": _read_config(args.config), "replications": args.replications}
    with _client(args.server) as client:
        res = _call(client, "POST", "/compare", payload)
    _write(args.out, res["csv"])
    a, b = res["schemes"]
    fa, fb = res["mean_first_node_death"]
    va, vb = res["mean_checkpoint_variance"]
    print(f"{'scheme':<10} {'mean FND':>10} {'mean var@checkpoint':>20}")
    print(f"{a:<10} {fa:>10.1f} {va:>20.6g}")
    print(f"{b:<10} {fb:>10.1f} {vb:>20.6g}")
    print(f"{a} lower variance in {res['fraction_first_lower_variance']:.0%} of pairs -> {args.out}")


def cmd_table1(args) -> None:
    with _client(args.server) as client:
        res = _call(client, "GET", "/table1")
    print(f"k_i = {res['k']}")
    print(f"{'node':>4}  {'k-nearest neighbours':<22} frequency")
    for node, nbrs in res["lists"].items():
        print(f"{node:>4}  {', '.join(map(str, nbrs)):<22} {res['frequencies'][node]}")
    for f, ids in res["ordered"].items():
        print(f"S_{f} = ({', '.join(map(str, ids))})")
    print(f"K_i = {res['threshold']}")
    print(f"C_i = {{{', '.join(map(str, res['candidates']))}}}")


def cmd_schema(args) -> None:
    with _client(args.server) as client:
        res = _call(client, "GET", "/config/schema")
    print(json.dumps(res, indent=2))


def cmd_serve(args) -> None:
    import uvicorn

    uvicorn.run("kcluster.service:app", host=args.host, port=args.port)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(prog="kcluster", description=__doc__.splitlines()[0])
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one simulation and write per-round metrics CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--rounds", type=int)
    p.add_argument("--scheme", choices=["ktheorem", "baseline"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="paired ktheorem vs random-rotation replications")
    p.add_argument("--config", required=True)
    p.add_argument("--replications", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("table1", help="print the worked k=3 ten-node example")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("schema", help="print the config file JSON schema")
    p.set_defaults(func=cmd_schema)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main(sys.argv[1:])
