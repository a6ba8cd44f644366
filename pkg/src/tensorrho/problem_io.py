"""Line-oriented problem files.

A file starts with header lines and then lists one monomial, edge or
exponent per line.  Numbers are integers, decimals or ``p/q``; ``#``
starts a comment.  Indices in files are 1-based.

::

    type map              type form          type hypergraph     type glp
    dim 2                 dim 2              dim 4               dim 1
    1: 0 2 1              2 0 1              uniformity 3        1: 1 1
    2: 2 0 1              1 1 2              1 2 3 1             1: -1 1
                                             1 2 4 1

Map lines are ``i: a_1 .. a_{n+1} coeff``; form lines ``a_1 .. a_{n+1} coeff``;
hypergraph lines ``v_1 .. v_d weight``; glp lines ``j: a_1 .. a_n weight``
where ``j`` numbers the branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._rational import parse_rational
from .errors import InputError
from .exponent_core import MaxLogSumExp
from .tensor_reduction import MonomialMap, NonnegForm, UniformHypergraph

KINDS = ("map", "form", "hypergraph", "glp")


@dataclass(frozen=True)
class Problem:
    kind: str
    obj: object


def _num(tok: str, where: str) -> Fraction:
    try:
        return parse_rational(tok)
    except (ValueError, ZeroDivisionError, InputError) as exc:
        raise InputError(f"{where}: bad number {tok!r}") from exc


def _int(tok: str, where: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InputError(f"{where}: expected an integer, got {tok!r}") from None


def parse_problem(text: str) -> Problem:
    """Parse a problem file; raises :class:`InputError` with the offending line."""
    header, body = {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.split(None, 1)[0].lower()
        if key in ("type", "dim", "degree", "uniformity") and not body:
            parts = line.split()
            if len(parts) != 2:
                raise InputError(f"line {lineno}: header '{key}' takes one value")
            if key in header:
                raise InputError(f"line {lineno}: duplicate header '{key}'")
            header[key] = (parts[1], lineno)
        else:
            body.append((lineno, line))
    if "type" not in header:
        raise InputError("missing 'type' header")
    kind = header["type"][0].lower()
    if kind not in KINDS:
        raise InputError(f"unknown type {kind!r}; expected one of {', '.join(KINDS)}")
    if "dim" not in header:
        raise InputError("missing 'dim' header")
    dim = _int(header["dim"][0], f"line {header['dim'][1]}")
    if dim < 1:
        raise InputError("dim must be positive")
    degree = None
    if "degree" in header:
        degree = _num(header["degree"][0], f"line {header['degree'][1]}")
    if not body:
        raise InputError("problem has no data lines")
    parse = {"map": _parse_map, "form": _parse_form, "hypergraph": _parse_hypergraph,
             "glp": _parse_glp}[kind]
    return Problem(kind, parse(body, dim, degree, header))


def _split_indexed(line: str, where: str):
    if ":" not in line:
        raise InputError(f"{where}: expected 'index: values'")
    head, rest = line.split(":", 1)
    return _int(head.strip(), where), rest.split()


def _parse_map(body, dim, degree, header):
    coords = [[] for _ in range(dim)]
    for lineno, line in body:
        where = f"line {lineno}"
        i, toks = _split_indexed(line, where)
        if not 1 <= i <= dim:
            raise InputError(f"{where}: coordinate {i} outside 1..{dim}")
        if len(toks) != dim + 1:
            raise InputError(f"{where}: expected {dim} exponents and a coefficient")
        vals = [_num(t, where) for t in toks]
        coords[i - 1].append((tuple(vals[:-1]), vals[-1]))
    return MonomialMap(tuple(coords), degree, dim)


def _parse_form(body, dim, degree, header):
    mons = []
    for lineno, line in body:
        where = f"line {lineno}"
        toks = line.split()
        if len(toks) != dim + 1:
            raise InputError(f"{where}: expected {dim} exponents and a coefficient")
        vals = [_num(t, where) for t in toks]
        mons.append((tuple(vals[:-1]), vals[-1]))
    return NonnegForm(tuple(mons), degree, dim)


def _parse_hypergraph(body, dim, degree, header):
    if "uniformity" not in header:
        raise InputError("hypergraph needs a 'uniformity' header")
    d = _int(header["uniformity"][0], f"line {header['uniformity'][1]}")
    edges = []
    for lineno, line in body:
        where = f"line {lineno}"
        toks = line.split()
        if len(toks) != d + 1:
            raise InputError(f"{where}: expected {d} vertices and a weight")
        verts = [_int(t, where) - 1 for t in toks[:-1]]
        edges.append((tuple(verts), _num(toks[-1], where)))
    return UniformHypergraph(dim, d, tuple(edges))


def _parse_glp(body, dim, degree, header):
    branches = {}
    for lineno, line in body:
        where = f"line {lineno}"
        j, toks = _split_indexed(line, where)
        if j < 1:
            raise InputError(f"{where}: branch numbers start at 1")
        if len(toks) != dim + 1:
            raise InputError(f"{where}: expected {dim} exponents and a weight")
        vals = [_num(t, where) for t in toks]
        branches.setdefault(j, ([], []))
        branches[j][0].append(tuple(vals[:-1]))
        branches[j][1].append(vals[-1])
    order = sorted(branches)
    if order != list(range(1, len(order) + 1)):
        raise InputError("glp branches must be numbered 1..N without gaps")
    return MaxLogSumExp.from_data([branches[j] for j in order], dim)


def _fmt(q: Fraction) -> str:
    return str(q)


def format_problem(obj) -> str:
    """Serialize a map, form, hypergraph or glp instance in the file format."""
    lines = []
    if isinstance(obj, MonomialMap):
        lines += ["type map", f"dim {obj.n_plus_1}", f"degree {_fmt(obj.degree_minus_1)}"]
        for i, ci in enumerate(obj.coords, 1):
            for a, w in ci:
                lines.append(f"{i}: " + " ".join(_fmt(v) for v in a) + f" {_fmt(w)}")
    elif isinstance(obj, NonnegForm):
        lines += ["type form", f"dim {obj.n_plus_1}", f"degree {_fmt(obj.degree)}"]
        for a, w in obj.monomials:
            lines.append(" ".join(_fmt(v) for v in a) + f" {_fmt(w)}")
    elif isinstance(obj, UniformHypergraph):
        lines += ["type hypergraph", f"dim {obj.n_vertices}", f"uniformity {obj.d}"]
        for e, w in obj.edges:
            lines.append(" ".join(str(v + 1) for v in e) + f" {_fmt(w)}")
    elif isinstance(obj, MaxLogSumExp):
        lines += ["type glp", f"dim {obj.n}"]
        for j, b in enumerate(obj.branches, 1):
            for a, w in zip(b.exponents, b.weights):
                lines.append(f"{j}: " + " ".join(_fmt(v) for v in a) + f" {_fmt(w)}")
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def read_problem(path: str) -> Problem:
    import sys

    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text)


__all__ = ["KINDS", "Problem", "format_problem", "parse_problem", "read_problem"]
