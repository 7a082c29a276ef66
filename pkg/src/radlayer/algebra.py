"""Presentations of path algebras with homogeneous relations.

Two flavours share one interface (``quiver``, ``relations``, ``m``, ``field``):

* :class:`QuiverPresentation` -- an arbitrary quiver with relation generators
  written as ``sum c * g * x`` (``x`` the arrow applied first), truncated at
  path length ``m``.
* :class:`LocalAlgebra` -- the one-vertex algebra k<x1..xn>/((x1..xn)^3 + (S)),
  S = sum a_ij x_i x_j with an invertible Gram matrix (a_ij).

Paths are tuples of arrow ids in product order: ``("b", "a")`` is b*a, i.e.
"b after a", and evaluates to ``phi(b) @ phi(a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Sequence

from .exactmat import DEFAULT_FIELD, DimensionError, FieldError, FieldSpec, Matrix, QQ

Path = tuple[str, ...]


class PresentationError(ValueError):
    """Malformed quiver, relation, or algebra presentation."""


class DegenerateFormError(PresentationError):
    """The Gram matrix of S is singular."""


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise PresentationError("duplicate vertex ids")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise PresentationError("duplicate arrow ids")
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise PresentationError(f"arrow {a.id} references an unknown vertex")

    @classmethod
    def build(cls, vertices: Sequence, arrows: Sequence[tuple]) -> "Quiver":
        return cls(
            tuple(str(v) for v in vertices),
            tuple(Arrow(str(i), str(s), str(t)) for i, s, t in arrows),
        )

    def arrow(self, aid: str) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise PresentationError(f"unknown arrow {aid!r}")

    def starting_at(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def ending_at(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def path_ends(self, path: Path) -> tuple[str, str]:
        """(start, end) of a nonempty path in product order."""
        if not path:
            raise PresentationError("empty path has no arrows")
        arrows = [self.arrow(x) for x in path]
        for left, right in zip(arrows, arrows[1:]):
            if right.target != left.source:
                raise PresentationError(f"path {'*'.join(path)} is not composable")
        return arrows[-1].source, arrows[0].target

    def paths_of_length(self, length: int) -> list[Path]:
        """All composable paths with ``length`` arrows."""
        out: list[Path] = [(a.id,) for a in self.arrows]
        for _ in range(length - 1):
            nxt = []
            for p in out:
                start = self.arrow(p[-1]).source
                for a in self.ending_at(start):
                    nxt.append(p + (a.id,))
            out = nxt
        return out if length >= 1 else []


@dataclass(frozen=True)
class RelationTerm:
    coeff: Any
    g: Path
    x: str

    @property
    def path(self) -> Path:
        return self.g + (self.x,)


@dataclass(frozen=True)
class RelationGenerator:
    terms: tuple[RelationTerm, ...]
    name: str = ""

    def ends(self, quiver: Quiver) -> tuple[str, str]:
        ends = {quiver.path_ends(t.path) for t in self.terms}
        if len(ends) != 1:
            raise PresentationError(f"relation {self.label()} is not homogeneous")
        return ends.pop()

    def label(self) -> str:
        if self.name:
            return self.name
        parts = []
        for t in self.terms:
            c = t.coeff
            word = "".join(t.path)
            parts.append(word if c == 1 else f"{c}*{word}")
        return " + ".join(parts) or "0"

    def as_element(self) -> list[tuple[Any, Path]]:
        return [(t.coeff, t.path) for t in self.terms]


def _validate_relations(quiver: Quiver, relations: Sequence[RelationGenerator], field: FieldSpec):
    for r in relations:
        if not r.terms:
            raise PresentationError("relation without terms")
        for t in r.terms:
            if len(t.g) < 1:
                raise PresentationError(f"relation {r.label()} has a term of degree < 2")
            field.scalar(t.coeff)
        r.ends(quiver)


@dataclass(frozen=True)
class QuiverPresentation:
    """k(quiver) / (relations + paths of length >= m)."""

    quiver: Quiver
    relations: tuple[RelationGenerator, ...]
    m: int
    field: FieldSpec = DEFAULT_FIELD

    def __post_init__(self):
        if self.m < 2:
            raise PresentationError("truncation length must be at least 2")
        _validate_relations(self.quiver, self.relations, self.field)

    @property
    def kind(self) -> str:
        return "quiver"

    def with_field(self, field: FieldSpec) -> "QuiverPresentation":
        return QuiverPresentation(self.quiver, self.relations, self.m, field)

    def to_json(self) -> dict:
        return {
            "kind": "quiver",
            "vertices": list(self.quiver.vertices),
            "arrows": [[a.id, a.source, a.target] for a in self.quiver.arrows],
            "relations": [
                {
                    "terms": [
                        {"c": _scalar_json(t.coeff), "g": list(t.g), "x": t.x} for t in r.terms
                    ],
                    **({"name": r.name} if r.name else {}),
                }
                for r in self.relations
            ],
            "m": self.m,
            "field": field_to_json(self.field),
        }


@dataclass(frozen=True)
class LocalAlgebra:
    """k<x1..xn>/((x1..xn)^3 + (S)) with S = sum_ij gram[i][j] x_i x_j."""

    n: int
    gram: Matrix
    field: FieldSpec = DEFAULT_FIELD
    quiver: Quiver = dc_field(init=False, repr=False, compare=False)
    relations: tuple[RelationGenerator, ...] = dc_field(init=False, repr=False, compare=False)

    VERTEX = "v"

    def __post_init__(self):
        if self.n < 2:
            raise PresentationError("need at least two generators")
        if self.gram.shape != (self.n, self.n):
            raise DimensionError(f"Gram matrix must be {self.n}x{self.n}, got {self.gram.shape}")
        if self.gram.field != self.field:
            raise FieldError("Gram matrix field differs from the algebra field")
        if self.gram.det() == 0:
            raise DegenerateFormError("det(gram) = 0: S is degenerate")
        v = self.VERTEX
        q = Quiver((v,), tuple(Arrow(x, v, v) for x in self.generators))
        # S = sum_j (sum_i a_ij x_i) x_j, split at the rightmost letter.
        terms = tuple(
            RelationTerm(self.gram[i, j], (self.generators[i],), self.generators[j])
            for j in range(self.n)
            for i in range(self.n)
            if self.gram[i, j] != 0
        )
        object.__setattr__(self, "quiver", q)
        object.__setattr__(self, "relations", (RelationGenerator(terms, name="S"),))

    @property
    def m(self) -> int:
        return 3

    @property
    def kind(self) -> str:
        return "local"

    @property
    def generators(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.n))

    @property
    def is_standard(self) -> bool:
        return self.gram == Matrix.identity(self.field, self.n)

    def with_field(self, field: FieldSpec) -> "LocalAlgebra":
        return LocalAlgebra(self.n, Matrix(field, self.gram.tolist()), field)

    def to_json(self) -> dict:
        return {
            "kind": "local",
            "n": self.n,
            "gram": self.gram.tolist(),
            "field": field_to_json(self.field),
        }


Presentation = QuiverPresentation | LocalAlgebra


def make_local_algebra(n: int, gram=None, field: FieldSpec = DEFAULT_FIELD) -> LocalAlgebra:
    """Validated local algebra; ``gram`` defaults to the identity (S = sum x_i^2)."""
    if not isinstance(field, FieldSpec):
        field = FieldSpec(field)
    if gram is None:
        gram = Matrix.identity(field, n)
    elif not isinstance(gram, Matrix):
        gram = Matrix(field, gram)
    return LocalAlgebra(n, gram, field)


def normalize_tuple(alg: LocalAlgebra, mats: Sequence[Matrix]) -> tuple[Matrix, ...]:
    """Substitute A'_j = sum_i a_ij A_i.

    Then sum_i A'_i C_i = sum_ij a_ij A_i C_j, so (A, C) satisfies S exactly
    when (A', C) satisfies the standard relation sum_i x_i^2.
    """
    if len(mats) != alg.n:
        raise DimensionError(f"expected {alg.n} matrices, got {len(mats)}")
    _same_shape(mats)
    g = alg.gram
    return tuple(_combine(mats, [g[i, j] for i in range(alg.n)], alg.field) for j in range(alg.n))


def denormalize_tuple(alg: LocalAlgebra, mats: Sequence[Matrix]) -> tuple[Matrix, ...]:
    """Inverse of :func:`normalize_tuple`."""
    if len(mats) != alg.n:
        raise DimensionError(f"expected {alg.n} matrices, got {len(mats)}")
    _same_shape(mats)
    ginv = alg.gram.inverse()
    return tuple(_combine(mats, [ginv[j, i] for j in range(alg.n)], alg.field) for i in range(alg.n))


def _same_shape(mats):
    if len({m.shape for m in mats}) > 1:
        raise DimensionError(f"matrices have different shapes: {[m.shape for m in mats]}")


def _combine(mats: Sequence[Matrix], coeffs, field: FieldSpec) -> Matrix:
    out = Matrix.zeros(field, *mats[0].shape)
    for c, m in zip(coeffs, mats):
        if c != 0:
            out = out + m.scale(c)
    return out


# -- JSON -----------------------------------------------------------------------

def _scalar_json(c):
    from fractions import Fraction

    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return int(c)


def field_to_json(field: FieldSpec) -> dict:
    return {"p": field.p} if field.p is not None else {"kind": "rationals"}


def field_from_json(obj) -> FieldSpec:
    if obj is None:
        return DEFAULT_FIELD
    if obj.get("kind") == "rationals" or ("p" in obj and obj["p"] is None):
        return QQ
    return FieldSpec(int(obj["p"]))


def presentation_from_json(obj: dict) -> Presentation:
    kind = obj.get("kind")
    field = field_from_json(obj.get("field"))
    if kind == "local":
        return make_local_algebra(int(obj["n"]), obj.get("gram"), field)
    if kind == "quiver":
        arrows = []
        for a in obj["arrows"]:
            if isinstance(a, dict):
                arrows.append((a["id"], a["source"], a["target"]))
            else:
                arrows.append(tuple(a))
        quiver = Quiver.build(obj["vertices"], arrows)
        rels = tuple(
            RelationGenerator(
                tuple(
                    RelationTerm(field.scalar(t["c"]), tuple(str(s) for s in t["g"]), str(t["x"]))
                    for t in r["terms"]
                ),
                name=r.get("name", ""),
            )
            for r in obj.get("relations", [])
        )
        return QuiverPresentation(quiver, rels, int(obj["m"]), field)
    raise PresentationError(f"unknown presentation kind {kind!r}")


# -- fixtures used by the fibre experiments --------------------------------------

def two_vertex_quiver() -> Quiver:
    """Vertices 1, 2; loop c at 1, b: 1 -> 2, a: 2 -> 1."""
    return Quiver.build(["1", "2"], [("a", "2", "1"), ("b", "1", "2"), ("c", "1", "1")])


_TWO_VERTEX_RELATIONS = {
    "ab+c^2": [[(1, ("a",), "b"), (1, ("c",), "c")]],
    "bc": [[(1, ("b",), "c")]],
    "bab+bc^2": [[(1, ("b", "a"), "b"), (1, ("b", "c"), "c")]],
    "ba": [[(1, ("b",), "a")]],
}


def two_vertex_presentation(relation: str, m: int = 4, field: FieldSpec = DEFAULT_FIELD) -> QuiverPresentation:
    """The two-vertex quiver with relations drawn from ``ab+c^2``, ``bc``,
    ``bab+bc^2``, ``ba`` (comma-separated to combine several), plus all
    paths of length m."""
    rels = []
    for name in (x.strip() for x in relation.split(",")):
        try:
            spec = _TWO_VERTEX_RELATIONS[name]
        except KeyError:
            raise PresentationError(
                f"unknown relation {name!r}; choose from {sorted(_TWO_VERTEX_RELATIONS)}"
            ) from None
        rels.extend(
            RelationGenerator(tuple(RelationTerm(field.scalar(c), g, x) for c, g, x in r), name=name)
            for r in spec
        )
    return QuiverPresentation(two_vertex_quiver(), tuple(rels), m, field)


def commutative_x3_y2(field: FieldSpec = DEFAULT_FIELD) -> QuiverPresentation:
    """k[x,y]/(x^3, y^2) as a one-vertex two-loop quiver, truncated at m = 4."""
    q = Quiver.build(["v"], [("x", "v", "v"), ("y", "v", "v")])
    rels = (
        RelationGenerator((RelationTerm(field.scalar(1), ("x", "x"), "x"),), name="x^3"),
        RelationGenerator((RelationTerm(field.scalar(1), ("y",), "y"),), name="y^2"),
        RelationGenerator(
            (RelationTerm(field.scalar(1), ("x",), "y"), RelationTerm(field.scalar(-1), ("y",), "x")), name="xy-yx"
        ),
    )
    return QuiverPresentation(q, rels, 4, field)
