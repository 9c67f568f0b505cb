"""``bmenet`` command line.

Exit codes: 0 success, 1 a verification (or Kalmanson) check failed,
2 bad input.  JSON output uses sorted keys so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .enumeration import count_table, enumerate_networks
from .errors import BmeNetError, MalformedFile, NotKalmanson
from .formats import (
    format_rational,
    graph_to_dot,
    network_from_json,
    network_to_json,
    optimization_to_dict,
    parse_distance_matrix,
    read_weighted_system,
    vector_csv,
    weighted_system_to_dict,
)
from .metrics import find_consistent_ordering, kalmanson_decompose
from .optimizer import minimize, newick_of, tour_of
from .splits import build_graph, canonicalize_ordering, sigma_splits
from .vectors import network_vector
from .verify import SUITES, run_suite


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _read_network(arg: str):
    """A JSON literal, or a path to a file holding one."""
    text = arg
    if not arg.lstrip().startswith("{"):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise MalformedFile(f"{arg!r} is neither a network literal nor a readable file") from exc
    return network_from_json(text)


def _parse_partition(text: str) -> tuple[int, int]:
    try:
        index, count = (int(x) for x in text.split("/"))
    except ValueError:
        raise UsageError(f"--partition expects INDEX/COUNT, got {text!r}") from None
    return index, count


def _parse_ordering(text: str, labels) -> tuple[int, ...]:
    tokens = [t for t in text.replace(",", " ").split() if t]
    if labels and all(t in labels for t in tokens):
        index = {lab: t + 1 for t, lab in enumerate(labels)}
        return tuple(index[t] for t in tokens)
    try:
        return tuple(int(t) for t in tokens)
    except ValueError:
        raise UsageError(f"bad ordering {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_count(args, out) -> int:
    if args.n is not None:
        ns = [args.n]
    else:
        ns = range(3, args.max_n + 1)
    if min(ns) < 3:
        raise UsageError("n must be at least 3")
    table = count_table(ns)
    width = max(len(row) for row in table.values())
    out.write(",".join(["n"] + [f"k{k}" for k in range(width)]) + "\n")
    for n, row in table.items():
        out.write(",".join([str(n)] + [str(v) for v in row] + [""] * (width - len(row))) + "\n")
    return 0


def cmd_enumerate(args, out) -> int:
    partition = _parse_partition(args.partition) if args.partition else None
    for net in enumerate_networks(args.n, args.k, partition):
        out.write(network_to_json(net) + "\n")
    return 0


def cmd_vector(args, out) -> int:
    net = _read_network(args.network)
    out.write(vector_csv(network_vector(net), net.n))
    return 0


def cmd_sigma(args, out) -> int:
    net = _read_network(args.network)
    system = sigma_splits(net)
    out.write(_dump({
        "n": net.n,
        "ordering": list(net.ordering.seq),
        "count": len(system.splits),
        "splits": [list(s.part) for s in sorted(system.splits)],
    }))
    return 0


def cmd_minimize(args, out) -> int:
    d = parse_distance_matrix(args.matrix)
    res = minimize(d, d.n, args.k, budget=args.budget, jobs=args.jobs)
    if args.format == "json":
        out.write(_dump(optimization_to_dict(res, d.labels)))
        return 0
    labels = d.labels or tuple(str(t) for t in range(1, d.n + 1))
    name = lambda t: labels[t - 1]
    out.write(f"n={res.n} k={res.k} evaluated={res.evaluated}\n")
    out.write(f"minimum {format_rational(res.minimum)}\n")
    for net in res.argmin:
        if res.k == 0:
            out.write("tour " + " ".join(name(t) for t in tour_of(net)) + "\n")
        elif res.k == res.n - 3:
            out.write("tree " + newick_of(net) + "\n")
        else:
            bridges = "; ".join(" ".join(name(t) for t in b.part) for b in net.sorted_bridges)
            out.write("network " + " ".join(name(t) for t in net.ordering.seq) + f" | bridges: {bridges}\n")
    return 0


def cmd_decompose(args, out) -> int:
    d = parse_distance_matrix(args.matrix)
    if args.ordering:
        c = canonicalize_ordering(_parse_ordering(args.ordering, d.labels))
    else:
        c = find_consistent_ordering(d)
    result = {"n": d.n}
    if d.labels is not None:
        result["labels"] = {str(t + 1): lab for t, lab in enumerate(d.labels)}
    if c is None:
        result["kalmanson"] = False
        result["reason"] = "no circular ordering satisfies the Kalmanson inequalities"
        out.write(_dump(result))
        return 1
    try:
        ws = kalmanson_decompose(d, c)
    except NotKalmanson as exc:
        result.update({"kalmanson": False, "ordering": list(c.seq), "reason": str(exc)})
        out.write(_dump(result))
        return 1
    result["kalmanson"] = True
    result["system"] = weighted_system_to_dict(ws)
    out.write(_dump(result))
    return 0


def cmd_verify(args, out) -> int:
    summary = run_suite(args.suite, seed=args.seed, quick=args.quick)
    out.write(_dump(summary))
    return 0 if summary["passed"] else 1


def cmd_export_dot(args, out) -> int:
    net = _read_network(args.network)
    weights = read_weighted_system(args.weights) if args.weights else None
    out.write(graph_to_dot(build_graph(net, weights)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bmenet", description="Exact level-1 network polytope toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", help="network counts v(n, k) as CSV")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--n", type=int)
    g.add_argument("--max-n", type=int, default=9)
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("enumerate", help="every canonical network, one JSON literal per line")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--partition", help="INDEX/COUNT block of canonical orderings")
    e.set_defaults(func=cmd_enumerate)

    v = sub.add_parser("vector", help="vertex vector of a network as CSV")
    v.add_argument("network")
    v.set_defaults(func=cmd_vector)

    s = sub.add_parser("sigma", help="splits displayed by a network")
    s.add_argument("network")
    s.set_defaults(func=cmd_sigma)

    m = sub.add_parser("minimize", help="shortest networks for a distance matrix")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--matrix", required=True)
    m.add_argument("--format", choices=("json", "text"), default="json")
    m.add_argument("--jobs", type=int, default=1)
    m.add_argument("--budget", type=int)
    m.set_defaults(func=cmd_minimize)

    d = sub.add_parser("decompose", help="circular split decomposition of a Kalmanson matrix")
    d.add_argument("matrix")
    d.add_argument("--ordering", help="witness ordering, comma or space separated")
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser("verify", help="rerun a verification suite")
    r.add_argument("--suite", choices=SUITES, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--quick", action="store_true")
    r.set_defaults(func=cmd_verify)

    x = sub.add_parser("export-dot", help="Graphviz drawing of a network")
    x.add_argument("network")
    x.add_argument("--weights", help="weighted split system JSON")
    x.set_defaults(func=cmd_export_dot)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be positive")
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"{parser.prog}: usage error: {exc}\n")
        return 2
    except BmeNetError as exc:
        err.write(f"{parser.prog}: {type(exc).__name__}: {exc}\n")
        return 2


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
