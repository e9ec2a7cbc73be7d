"""JSON interchange: instance documents in, reports out.

Instance files carry a schema tag "tessella-<kind>/1" naming the engine
they target. Every rational travels as an exact string "p/q" (or a JSON
integer); floats are rejected at the door so no precision is lost in
transit. Reports are serialized canonically (sorted keys, fixed
indentation) so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .boxes import Box, FrameRegion
from .errors import InvalidInput
from .finite import (
    ActionPair,
    Equidecomposition,
    FiniteAction,
    FiniteGroup,
    FiniteMeasureSpace,
)
from .heis import HeisAut, HeisLattice, HeisPoint, LieVec
from .lattices import EucLattice, TSComponent, TranslationSystem

KINDS = ("finite", "euclidean", "translation-system", "heisenberg")


def schema_tag(kind: str) -> str:
    return f"tessella-{kind}/1"


def parse_frac(v) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise InvalidInput(f"exact rational required, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"bad rational {v!r}: {exc}")
    raise InvalidInput(f"exact rational required, got {v!r}")


def fmt_frac(q: Fraction) -> str:
    return str(Fraction(q))


def _require(obj, key, kind=""):
    if not isinstance(obj, dict) or key not in obj:
        where = f" in {kind}" if kind else ""
        raise InvalidInput(f"missing field {key!r}{where}")
    return obj[key]


def parse_vector(v) -> tuple[Fraction, ...]:
    if not isinstance(v, list):
        raise InvalidInput("vector must be a JSON array")
    return tuple(parse_frac(x) for x in v)


def vector_json(v) -> list[str]:
    return [fmt_frac(x) for x in v]


def parse_matrix(m) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(m, list) or not m:
        raise InvalidInput("matrix must be a nonempty JSON array of rows")
    rows = tuple(parse_vector(r) for r in m)
    if len({len(r) for r in rows}) != 1:
        raise InvalidInput("matrix rows differ in length")
    return rows


def matrix_json(m) -> list[list[str]]:
    return [[fmt_frac(x) for x in row] for row in m]


def parse_lattice(obj) -> EucLattice:
    basis = parse_matrix(_require(obj, "basis", "lattice"))
    dim = _require(obj, "dim", "lattice")
    if dim != len(basis) or any(len(r) != dim for r in basis):
        raise InvalidInput("lattice dim does not match the basis shape")
    return EucLattice(basis)


def lattice_json(L: EucLattice) -> dict:
    return {"dim": L.dim, "basis": matrix_json(L.basis)}


def parse_box(obj) -> Box:
    lo = parse_vector(_require(obj, "lo", "box"))
    hi = parse_vector(_require(obj, "hi", "box"))
    if len(lo) != len(hi):
        raise InvalidInput("box corner dimensions differ")
    if any(a >= b for a, b in zip(lo, hi)):
        raise InvalidInput("box needs lo < hi on every axis")
    return tuple(zip(lo, hi))


def box_json(b: Box) -> dict:
    return {"lo": [fmt_frac(lo) for lo, _ in b],
            "hi": [fmt_frac(hi) for _, hi in b]}


def parse_region(obj) -> FrameRegion:
    frame = parse_matrix(_require(obj, "frame", "region"))
    boxes = _require(obj, "boxes", "region")
    if not isinstance(boxes, list):
        raise InvalidInput("region boxes must be a JSON array")
    return FrameRegion(frame, tuple(parse_box(b) for b in boxes))


def region_json(R: FrameRegion) -> dict:
    return {"frame": matrix_json(R.frame),
            "boxes": [box_json(b) for b in R.boxes]}


@dataclass(frozen=True)
class FiniteInstance:
    pair: ActionPair
    x: Optional[list[int]]
    y: Optional[list[int]]
    k: int
    eps: Fraction
    mode: str


def _parse_atoms(v, n: int, name: str) -> list[int]:
    if not isinstance(v, list) or not all(
            isinstance(a, int) and not isinstance(a, bool) for a in v):
        raise InvalidInput(f"{name} must be an array of atom indices")
    atoms = sorted(set(v))
    if len(atoms) != len(v):
        raise InvalidInput(f"{name} repeats an atom")
    if atoms and (atoms[0] < 0 or atoms[-1] >= n):
        raise InvalidInput(f"{name} indexes outside the space")
    return atoms


def _parse_action(obj, space: FiniteMeasureSpace, role: str) -> FiniteAction:
    side = _require(obj, "side", role)
    if side != role:
        raise InvalidInput(f"{role} action declares side {side!r}")
    elements = _require(obj, "elements", role)
    table = _require(obj, "table", role)
    perms = _require(obj, "perms", role)
    group = FiniteGroup(table, names=[str(e) for e in elements])
    return FiniteAction(group, space, perms, side=side)


def parse_finite(payload) -> FiniteInstance:
    space = FiniteMeasureSpace(
        [parse_frac(w) for w in _require(payload, "weights", "finite")])
    left = _parse_action(_require(payload, "left_action", "finite"), space, "left")
    right = _parse_action(_require(payload, "right_action", "finite"), space, "right")
    pair = ActionPair(left, right)
    x = payload.get("x")
    y = payload.get("y")
    mode = payload.get("mode", "eq")
    if mode not in ("eq", "geq"):
        raise InvalidInput("mode must be 'eq' or 'geq'")
    k = payload.get("k", 1)
    if not isinstance(k, int) or isinstance(k, bool):
        raise InvalidInput("k must be an integer")
    return FiniteInstance(
        pair=pair,
        x=None if x is None else _parse_atoms(x, space.n, "x"),
        y=None if y is None else _parse_atoms(y, space.n, "y"),
        k=k,
        eps=parse_frac(payload.get("eps", 0)),
        mode=mode,
    )


def parse_translation_system(payload):
    """Returns (system, X, Y); X and Y are region lists when every
    component carries them, else None."""
    rank = _require(payload, "rank", "translation system")
    comps = _require(payload, "components", "translation system")
    if not isinstance(comps, list) or not comps:
        raise InvalidInput("components must be a nonempty array")
    parsed = []
    xs, ys = [], []
    for comp in comps:
        dim = _require(comp, "dim", "component")
        gamma = parse_matrix(_require(comp, "gamma", "component"))
        lam = parse_matrix(_require(comp, "lambda", "component"))
        parsed.append(TSComponent(dim, gamma, lam))
        xs.append(comp.get("x"))
        ys.append(comp.get("y"))
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise InvalidInput("rank must be an integer")
    ts = TranslationSystem(rank, parsed)

    def regions(vals, name):
        present = [v is not None for v in vals]
        if not any(present):
            return None
        if not all(present):
            raise InvalidInput(f"{name} must be given on every component or none")
        return [parse_region(v) for v in vals]

    return ts, regions(xs, "x"), regions(ys, "y")


def parse_heis_point(obj) -> HeisPoint:
    return HeisPoint(
        parse_frac(_require(obj, "x1", "point")),
        parse_frac(_require(obj, "x2", "point")),
        parse_frac(_require(obj, "c", "point")),
    )


def heis_point_json(g: HeisPoint) -> dict:
    return {"x1": fmt_frac(g.x1), "x2": fmt_frac(g.x2), "c": fmt_frac(g.c)}


def parse_lie_vec(obj) -> LieVec:
    return LieVec(
        parse_frac(_require(obj, "u1", "vector")),
        parse_frac(_require(obj, "u2", "vector")),
        parse_frac(_require(obj, "u3", "vector")),
    )


def parse_heis_lattice(obj) -> HeisLattice:
    return HeisLattice(parse_matrix(_require(obj, "A", "lattice")))


def heis_lattice_json(L: HeisLattice) -> dict:
    return {"A": matrix_json(L.A)}


def parse_heis_aut(obj) -> HeisAut:
    return HeisAut(parse_matrix(_require(obj, "A", "automorphism")))


def equidecomposition_json(plan: Equidecomposition) -> list[dict]:
    return [
        {"piece": sorted(piece), "element": g} for piece, g in plan.pieces
    ]


def load_instance(path: str):
    """Read and envelope-check an instance file: (kind, payload)."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}")
    return instance_envelope(doc)


def instance_envelope(doc):
    if not isinstance(doc, dict):
        raise InvalidInput("instance must be a JSON object")
    tag = _require(doc, "schema", "instance")
    for kind in KINDS:
        if tag == schema_tag(kind):
            return kind, doc
    raise InvalidInput(f"unknown schema {tag!r}")


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
