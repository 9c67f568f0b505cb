"""Readers and writers for networks, split systems, distance matrices and reports.

All numbers written out are exact: integers, terminating decimals, or
``"p/q"`` strings.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .errors import AsymmetricInput, MalformedFile, NegativeDistance
from .metrics import DistanceMatrix, WeightedSplitSystem, weighted_split_system
from .splits import Network, PhyloGraph, Split, canonicalize_ordering, make_network
from .vectors import pairs

PathLike = Union[str, Path]


def format_rational(v) -> str:
    """``3``, ``0.25`` or ``1/3``: a terminating decimal when one exists."""
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    den, twos, fives = v.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{v.numerator}/{v.denominator}"
    places = max(twos, fives)
    scaled = v * 10 ** places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise MalformedFile(f"refusing binary float {text!r}; pass a decimal string")
    token = str(text).strip().replace("−", "-")
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedFile(f"not an exact number: {text!r}") from exc
    return value


# ---------------------------------------------------------------------------
# networks
# ---------------------------------------------------------------------------


def network_to_dict(net: Network) -> dict:
    return {
        "n": net.n,
        "ordering": list(net.ordering.seq),
        "bridges": [list(b.part) for b in net.sorted_bridges],
    }


def network_to_json(net: Network) -> str:
    return json.dumps(network_to_dict(net), separators=(",", ":"))


def network_from_dict(obj: dict) -> Network:
    try:
        n = int(obj["n"])
        ordering = canonicalize_ordering(obj["ordering"])
        bridges = [Split.from_part(part, n) for part in obj.get("bridges", [])]
    except (KeyError, TypeError) as exc:
        raise MalformedFile(f"bad network literal: {obj!r}") from exc
    if ordering.n != n:
        raise MalformedFile(f"ordering has {ordering.n} taxa but n = {n}")
    return make_network(ordering, bridges)


def network_from_json(text: str) -> Network:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"invalid JSON: {exc}") from exc
    return network_from_dict(obj)


# ---------------------------------------------------------------------------
# weighted split systems
# ---------------------------------------------------------------------------


def weighted_system_to_dict(ws: WeightedSplitSystem) -> dict:
    out = {"n": ws.n}
    if ws.ordering is not None:
        out["ordering"] = list(ws.ordering.seq)
    out["splits"] = [{"part": list(s.part), "weight": format_rational(w)} for s, w in ws.items()]
    return out


def weighted_system_from_dict(obj: dict) -> WeightedSplitSystem:
    try:
        n = int(obj["n"])
        weights = {}
        for entry in obj["splits"]:
            s = Split.from_part(entry["part"], n)
            weights[s] = weights.get(s, Fraction(0)) + parse_rational(entry["weight"])
        ordering = obj.get("ordering")
    except (KeyError, TypeError) as exc:
        raise MalformedFile(f"bad weighted split system: {exc}") from exc
    return weighted_split_system(n, weights, ordering)


def read_weighted_system(path: PathLike) -> WeightedSplitSystem:
    try:
        return weighted_system_from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: invalid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# distance matrices
# ---------------------------------------------------------------------------


def _label_map(labels: list[str]) -> tuple[dict, tuple]:
    """Taxon index per label: the labels themselves if they are ``1..n``, else row order."""
    n = len(labels)
    if len(set(labels)) != n:
        raise MalformedFile("duplicate taxon labels")
    try:
        as_int = [int(x) for x in labels]
    except ValueError:
        as_int = None
    if as_int is not None and sorted(as_int) == list(range(1, n + 1)):
        mapping = dict(zip(labels, as_int))
    else:
        mapping = {lab: t + 1 for t, lab in enumerate(labels)}
    ordered = tuple(sorted(mapping, key=mapping.get))
    return mapping, ordered


def _check_entry(v: Fraction, where: str) -> Fraction:
    if v < 0:
        raise NegativeDistance(f"negative distance {v} at {where}")
    return v


def parse_phylip(text: str) -> DistanceMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedFile("empty matrix file")
    try:
        n = int(lines[0].split()[0])
    except (ValueError, IndexError) as exc:
        raise MalformedFile("first line must hold the taxon count") from exc
    if n < 3:
        raise MalformedFile(f"need at least 3 taxa, got {n}")
    tokens_after = " ".join(lines[1:]).split()
    if len(tokens_after) != n * (n + 1):
        raise MalformedFile(f"expected {n} rows of a label and {n} entries")
    labels, rows = [], []
    for r in range(n):
        chunk = tokens_after[r * (n + 1):(r + 1) * (n + 1)]
        labels.append(chunk[0])
        rows.append([parse_rational(x) for x in chunk[1:]])
    mapping, ordered = _label_map(labels)
    square = {}
    for r, lab in enumerate(labels):
        i = mapping[lab]
        for c, other in enumerate(labels):
            square[(i, mapping[other])] = rows[r][c]
    for i in range(1, n + 1):
        if square[(i, i)] != 0:
            raise MalformedFile(f"nonzero diagonal entry for taxon {ordered[i - 1]}")
    values = []
    for i, j in pairs(n):
        a, b = square[(i, j)], square[(j, i)]
        if a != b:
            raise AsymmetricInput(f"d({ordered[i - 1]},{ordered[j - 1]}) = {a} but reverse is {b}")
        values.append(_check_entry(a, f"({ordered[i - 1]},{ordered[j - 1]})"))
    return DistanceMatrix(n, tuple(values), ordered)


def parse_pair_csv(text: str) -> DistanceMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(x.strip() for x in r)]
    if not rows:
        raise MalformedFile("empty matrix file")
    if len(rows[0]) != 3:
        raise MalformedFile("CSV rows must be i,j,d_ij")
    try:
        parse_rational(rows[0][2])
    except MalformedFile:
        rows = rows[1:]  # header
    entries = {}
    labels = []
    for r in rows:
        if len(r) != 3:
            raise MalformedFile(f"bad CSV row {r!r}")
        a, b, v = r[0].strip(), r[1].strip(), parse_rational(r[2])
        for lab in (a, b):
            if lab not in labels:
                labels.append(lab)
        if a == b:
            if v != 0:
                raise MalformedFile(f"nonzero diagonal entry for {a}")
            continue
        key = frozenset((a, b))
        if key in entries and entries[key] != v:
            raise AsymmetricInput(f"conflicting values for {a},{b}")
        entries[key] = _check_entry(v, f"({a},{b})")
    mapping, ordered = _label_map(labels)
    n = len(labels)
    if n < 3:
        raise MalformedFile(f"need at least 3 taxa, got {n}")
    values = []
    for i, j in pairs(n):
        key = frozenset((ordered[i - 1], ordered[j - 1]))
        if key not in entries:
            raise MalformedFile(f"missing entry for {ordered[i - 1]},{ordered[j - 1]}")
        values.append(entries[key])
    return DistanceMatrix(n, tuple(values), ordered)


def parse_distance_matrix(path: PathLike) -> DistanceMatrix:
    """Read a PHYLIP-style square matrix or an ``i,j,d_ij`` CSV file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from exc
    first = next((ln for ln in text.splitlines() if ln.strip()), "")
    return parse_pair_csv(text) if "," in first else parse_phylip(text)


def format_phylip(d: DistanceMatrix) -> str:
    labels = d.labels or tuple(str(t) for t in range(1, d.n + 1))
    out = [str(d.n)]
    for i in range(1, d.n + 1):
        out.append(" ".join([labels[i - 1]] + [format_rational(d[i, j]) for j in range(1, d.n + 1)]))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# vectors, graphs, reports
# ---------------------------------------------------------------------------


def vector_csv(x, n: int) -> str:
    out = ["i,j,x_ij"]
    for (i, j), v in zip(pairs(n), x):
        out.append(f"{i},{j},{format_rational(v)}")
    return "\n".join(out) + "\n"


def graph_to_dot(g: PhyloGraph, name: str = "network") -> str:
    out = [f"graph {name} {{"]
    for v in g.nodes:
        shape = "plaintext" if isinstance(v, int) else "point"
        out.append(f'  "{v}" [shape={shape}];')
    for u, v, w in g.edges:
        attr = "" if w is None else f' [weight="{format_rational(w)}"]'
        out.append(f'  "{u}" -- "{v}"{attr};')
    out.append("}")
    return "\n".join(out) + "\n"


def functional_to_dict(f) -> dict:
    return {
        "coeffs": [format_rational(c) for c in f.coeffs],
        "bound": format_rational(f.bound),
        "sense": f.sense,
    }


def face_report_to_dict(r) -> dict:
    return {
        "family": r.family,
        "label": r.label,
        "n": r.n,
        "k": r.k,
        "functional": functional_to_dict(r.functional),
        "valid": r.valid,
        "tight_count": r.tight_count,
        "tight_dim": r.tight_affine_dim,
        "tight": [network_to_dict(net) for net in r.tight_networks],
    }


def optimization_to_dict(res, labels=None) -> dict:
    out = {
        "n": res.n,
        "k": res.k,
        "minimum": format_rational(res.minimum),
        "evaluated": res.evaluated,
        "argmin": [network_to_dict(net) for net in res.argmin],
    }
    if labels is not None:
        out["labels"] = {str(t + 1): lab for t, lab in enumerate(labels)}
    return out
