"""Bound quivers, finite-dimensional path algebras, and hereditary type.

A path word is stored in composition order: ``(a2, a1)`` means "apply a1
first", and is serialized as ``a2*a1``.  Relations are admissible: every
term is a path of length at least two, and all terms of a relation are
parallel (same source and same target).

The quotient algebra kQ/I is materialized as an :class:`AlgebraTable` whose
basis consists of residue classes of paths of length below the nilpotency
bound L.  Admissibility (every length-L path lies in the relation ideal) is
verified constructively: each length-L path must lie in the exact span of
untruncated products u*r*v of relation generators.  The check is sound
(those products are genuine ideal elements) and conservative; presentations
that need cancellation outside the inspected window are rejected rather
than silently accepted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import networkx as nx

from .exactlin import Field

DEFAULT_NILBOUND_SLACK = 2


class AdmissibilityError(ValueError):
    """The relation set does not certify a finite-dimensional quotient."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """A path in a quiver; ``arrows`` in composition order (first applied last)."""

    source: str
    target: str
    arrows: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.source}"
        return "*".join(self.arrows)


class Quiver:
    """A finite directed multigraph with named arrows."""

    def __init__(self, vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]] | Sequence[Arrow]):
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        parsed = []
        for a in arrows:
            if isinstance(a, Arrow):
                parsed.append(a)
            else:
                name, src, tgt = a
                parsed.append(Arrow(str(name), str(src), str(tgt)))
        self.arrows: tuple[Arrow, ...] = tuple(parsed)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise ValueError(f"arrow {a.name}: endpoint not a declared vertex")
        self._by_name = {a.name: a for a in self.arrows}

    def arrow(self, name: str) -> Arrow:
        return self._by_name[name]

    def has_loops(self) -> bool:
        return any(a.source == a.target for a in self.arrows)

    def trivial_path(self, v: str) -> Path:
        if v not in self._by_name and v not in set(self.vertices):
            raise ValueError(f"unknown vertex {v}")
        return Path(v, v, ())

    def path(self, arrow_names: Sequence[str]) -> Path:
        """Build a path from arrow names in composition order (apply last first)."""
        if not arrow_names:
            raise ValueError("use trivial_path for empty paths")
        arrs = [self.arrow(n) for n in arrow_names]
        for later, earlier in zip(arrs, arrs[1:]):
            if earlier.target != later.source:
                raise ValueError(f"non-composable word at {later.name}*{earlier.name}")
        return Path(arrs[-1].source, arrs[0].target, tuple(arrow_names))

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return nx.is_connected(underlying_diagram(self))

    def full_subquiver(self, keep_vertices: Iterable[str]) -> "Quiver":
        keep = set(keep_vertices)
        return Quiver([v for v in self.vertices if v in keep],
                      [a for a in self.arrows if a.source in keep and a.target in keep])

    def connected_components(self) -> list["Quiver"]:
        graph = underlying_diagram(self)
        return [self.full_subquiver(comp) for comp in nx.connected_components(graph)]

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a.name, a.target, a.source) for a in self.arrows])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Quiver) and other.vertices == self.vertices
                and other.arrows == self.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self) -> str:
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


@dataclass(frozen=True)
class Relation:
    """A parallel linear combination of paths of length >= 2."""

    terms: tuple[tuple[Fraction, Path], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty relation")
        src = self.terms[0][1].source
        tgt = self.terms[0][1].target
        for coef, path in self.terms:
            if coef == 0:
                raise ValueError("zero coefficient in relation")
            if len(path) < 2:
                raise ValueError(f"relation term {path} shorter than 2 (not admissible)")
            if path.source != src or path.target != tgt:
                raise ValueError("relation terms are not parallel")

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    def max_length(self) -> int:
        return max(len(p) for _, p in self.terms)

    def min_length(self) -> int:
        return min(len(p) for _, p in self.terms)

    def __str__(self) -> str:
        return " + ".join(f"{c}*{p}" for c, p in self.terms)


class BoundQuiver:
    """A quiver with admissible relations and a nilpotency bound L.

    L is the length at which all paths must fall into the relation ideal;
    this is verified when the algebra table is built, not at construction.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], nilbound: Optional[int] = None):
        self.quiver = quiver
        self.relations = tuple(relations)
        if nilbound is None:
            nilbound = len(quiver.arrows) + DEFAULT_NILBOUND_SLACK
        if nilbound < 1:
            raise ValueError("nilbound must be positive")
        self.nilbound = int(nilbound)
        for rel in self.relations:
            for _, path in rel.terms:
                # re-validate composability against this quiver
                quiver.path(path.arrows)

    def relation(self, coef_paths: Sequence[tuple[Fraction | int, Sequence[str]]]) -> Relation:
        return Relation(tuple((Fraction(c), self.quiver.path(w)) for c, w in coef_paths))

    def is_hereditary(self) -> bool:
        return not self.relations

    def __eq__(self, other) -> bool:
        return (isinstance(other, BoundQuiver) and other.quiver == self.quiver
                and other.relations == self.relations and other.nilbound == self.nilbound)

    def __hash__(self):
        return hash((self.quiver, self.relations, self.nilbound))

    def __repr__(self) -> str:
        return (f"BoundQuiver({len(self.quiver.vertices)}v, {len(self.quiver.arrows)}a, "
                f"{len(self.relations)} relations, L={self.nilbound})")


def make_relation(q: Quiver, terms: Sequence[tuple[Fraction | int, Sequence[str]]]) -> Relation:
    return Relation(tuple((Fraction(c), q.path(list(w))) for c, w in terms))


# ---------------------------------------------------------------------------
# algebra table
# ---------------------------------------------------------------------------

class AlgebraElement:
    """An element of an :class:`AlgebraTable`, stored as basis coefficients."""

    __slots__ = ("table", "coeffs")

    def __init__(self, table: "AlgebraTable", coeffs):
        self.table = table
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != table.dimension:
            raise ValueError("coefficient length mismatch")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        f = self.table.field
        return AlgebraElement(self.table, [f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        f = self.table.field
        return AlgebraElement(self.table, [f.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "AlgebraElement":
        f = self.table.field
        return AlgebraElement(self.table, [f.neg(a) for a in self.coeffs])

    def scaled(self, c) -> "AlgebraElement":
        f = self.table.field
        c = f.coerce(c)
        return AlgebraElement(self.table, [f.mul(c, a) for a in self.coeffs])

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.table is not self.table:
            raise ValueError("elements of different algebra tables")
        f = self.table.field
        out = [f.zero] * self.table.dimension
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                prod = self.table.product_entry(i, j)
                if not prod:
                    continue
                ab = f.mul(a, b)
                for k, c in prod.items():
                    out[k] = f.add(out[k], f.mul(ab, c))
        return AlgebraElement(self.table, out)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgebraElement) and other.table is self.table
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((id(self.table), self.coeffs))

    def __repr__(self) -> str:
        parts = [f"{c}*{self.table.basis[i]}" for i, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(parts) if parts else "0"


class AlgebraTable:
    """Finite-dimensional quotient path algebra with explicit structure constants.

    ``basis`` holds residue classes of paths of length < L, the product
    table is closed, and the identity is the sum of the vertex idempotents.
    Built via :func:`build_algebra_table`.
    """

    def __init__(self, bq: BoundQuiver, field: Field, basis: list[Path],
                 normal_forms: dict, st_index: dict):
        self.bound_quiver = bq
        self.field = field
        self.basis = tuple(basis)
        self.dimension = len(basis)
        self._index = {(p.source, p.target, p.arrows): i for i, p in enumerate(basis)}
        self._normal_forms = normal_forms      # (src, tgt, arrows) -> {basis_idx: coeff}
        self._st_index = st_index
        self._products: dict[tuple[int, int], dict[int, object]] = {}
        self._build_products()

    # -- construction helpers ------------------------------------------------

    def _normal_form_of_word(self, source: str, target: str, arrows: tuple[str, ...]):
        if len(arrows) >= self.bound_quiver.nilbound:
            return {}
        key = (source, target, arrows)
        nf = self._normal_forms.get(key)
        if nf is None:
            raise ValueError(f"path {arrows} not found in enumeration")
        return nf

    def _build_products(self):
        f = self.field
        for i, p in enumerate(self.basis):
            for j, q in enumerate(self.basis):
                if q.target != p.source:
                    continue
                arrows = p.arrows + q.arrows
                nf = self._normal_form_of_word(q.source, p.target, arrows)
                if nf:
                    self._products[(i, j)] = nf

    # -- public surface --------------------------------------------------------

    def product_entry(self, i: int, j: int) -> dict:
        """Structure constants of basis[i] * basis[j] (sparse; empty = zero)."""
        return self._products.get((i, j), {})

    def basis_index(self, path: Path) -> Optional[int]:
        return self._index.get((path.source, path.target, path.arrows))

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [self.field.zero] * self.dimension)

    def element(self, coeffs) -> AlgebraElement:
        return AlgebraElement(self, [self.field.coerce(c) for c in coeffs])

    def basis_element(self, i: int) -> AlgebraElement:
        coeffs = [self.field.zero] * self.dimension
        coeffs[i] = self.field.one
        return AlgebraElement(self, coeffs)

    def idempotent(self, vertex: str) -> AlgebraElement:
        i = self.basis_index(Path(vertex, vertex, ()))
        if i is None:
            raise ValueError(f"no idempotent for vertex {vertex}")
        return self.basis_element(i)

    def one(self) -> AlgebraElement:
        out = self.zero()
        for v in self.bound_quiver.quiver.vertices:
            out = out + self.idempotent(v)
        return out

    def arrow_element(self, name: str) -> AlgebraElement:
        a = self.bound_quiver.quiver.arrow(name)
        path = Path(a.source, a.target, (name,))
        nf = self._normal_form_of_word(a.source, a.target, (name,))
        coeffs = [self.field.zero] * self.dimension
        for k, c in nf.items():
            coeffs[k] = c
        return AlgebraElement(self, coeffs)

    def path_element(self, path: Path) -> AlgebraElement:
        nf = self._normal_form_of_word(path.source, path.target, path.arrows)
        coeffs = [self.field.zero] * self.dimension
        for k, c in nf.items():
            coeffs[k] = c
        return AlgebraElement(self, coeffs)

    def check_associativity(self) -> bool:
        """Exhaustively check (ab)c == a(bc) on basis triples."""
        elems = [self.basis_element(i) for i in range(self.dimension)]
        for a, b in itertools.product(elems, repeat=2):
            ab = a * b
            for c in elems:
                if (ab * c) != (a * (b * c)):
                    return False
        return True

    def __repr__(self) -> str:
        return f"AlgebraTable(dim={self.dimension}, field={self.field})"


def _enumerate_paths(q: Quiver, max_len: int) -> list[Path]:
    """All paths of length <= max_len, grouped by length then lexicographic."""
    by_len: list[list[Path]] = [[q.trivial_path(v) for v in q.vertices]]
    out_arrows: dict[str, list[Arrow]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        out_arrows[a.source].append(a)
    for _ in range(max_len):
        nxt = []
        for p in by_len[-1]:
            for a in out_arrows[p.target]:
                nxt.append(Path(p.source, a.target, (a.name,) + p.arrows))
        by_len.append(nxt)
        if not nxt:
            break
    return [p for level in by_len for p in level]


def build_algebra_table(bq: BoundQuiver, field: Field) -> AlgebraTable:
    """Compute the basis and structure constants of kQ/I.

    Raises :class:`AdmissibilityError` when some path of length L cannot be
    certified to lie in the relation ideal.
    """
    q = bq.quiver
    L = bq.nilbound
    if bq.relations:
        homogeneous = all(r.max_length() == r.min_length() for r in bq.relations)
        window = L if homogeneous else L + max(r.max_length() for r in bq.relations)
    else:
        window = L
    paths = _enumerate_paths(q, window)

    # stratify by (source, target); columns ordered long-to-short so that
    # normal forms rewrite long paths into shorter ones
    strata: dict[tuple[str, str], list[Path]] = {}
    for p in paths:
        strata.setdefault((p.source, p.target), []).append(p)
    st_cols: dict[tuple[str, str], dict[tuple, int]] = {}
    for key, plist in strata.items():
        plist.sort(key=lambda p: (-len(p), p.arrows))
        st_cols[key] = {p.arrows: i for i, p in enumerate(plist)}

    # every length-L path must be certified inside the span of untruncated
    # generator products; collect those products per stratum
    prefix: dict[str, list[Path]] = {}
    suffix: dict[str, list[Path]] = {}
    for p in paths:
        prefix.setdefault(p.source, []).append(p)   # paths starting at v (for right factors)
        suffix.setdefault(p.target, []).append(p)   # paths ending at v (for left factors)

    span_rows: dict[tuple[str, str], list[dict[int, Fraction]]] = {k: [] for k in strata}
    for rel in bq.relations:
        maxlen = rel.max_length()
        for u in prefix.get(rel.target, []):
            for v in suffix.get(rel.source, []):
                if len(u) + maxlen + len(v) > window:
                    continue
                key = (v.source, u.target)
                cols = st_cols[key]
                row: dict[int, Fraction] = {}
                for coef, term in rel.terms:
                    word = u.arrows + term.arrows + v.arrows
                    idx = cols[word]
                    row[idx] = row.get(idx, Fraction(0)) + coef
                coerced = {}
                for k2, c in row.items():
                    if c != 0:
                        cc = field.coerce(c)
                        if cc != 0:
                            coerced[k2] = cc
                if coerced:
                    span_rows[key].append(coerced)

    # reduce the generator span per stratum and check admissibility
    reduced: dict[tuple[str, str], list[tuple[int, dict[int, object]]]] = {}
    for key, plist in strata.items():
        rows = span_rows[key]
        reduced[key] = _sparse_rref(rows, field)
        for p in plist:
            if len(p) == L:
                col = st_cols[key][p.arrows]
                rem = _reduce_vector({col: field.one}, reduced[key], field)
                if rem:
                    raise AdmissibilityError(
                        f"path {p} of length {L} is not certified to lie in the "
                        f"relation ideal; tighten the relations or raise nilbound")

    # augment with unit vectors for all paths of length >= L so that normal
    # forms never mention them, then re-reduce
    table_rows: dict[tuple[str, str], list[tuple[int, dict[int, object]]]] = {}
    normal_forms: dict = {}
    basis: list[Path] = []
    for key, plist in strata.items():
        rows = [dict(r) for r in span_rows[key]]
        for p in plist:
            if len(p) >= L:
                rows.append({st_cols[key][p.arrows]: field.one})
        red = _sparse_rref(rows, field)
        table_rows[key] = red
        pivots = {piv for piv, _ in red}
        for p in plist:
            col = st_cols[key][p.arrows]
            if col not in pivots and len(p) < L:
                basis.append(p)

    basis.sort(key=lambda p: (len(p), p.source, p.target, p.arrows))
    idx_of = {}
    for i, p in enumerate(basis):
        idx_of[(p.source, p.target, p.arrows)] = i

    for key, plist in strata.items():
        red = table_rows[key]
        col_to_path = {st_cols[key][p.arrows]: p for p in plist}
        for p in plist:
            col = st_cols[key][p.arrows]
            rem = _reduce_vector({col: field.one}, red, field)
            nf = {}
            for c2, coef in rem.items():
                bp = col_to_path[c2]
                bi = idx_of.get((bp.source, bp.target, bp.arrows))
                if bi is None:
                    raise AdmissibilityError(
                        f"normal form of {p} involves non-basis path {bp}")
                nf[bi] = coef
            normal_forms[(p.source, p.target, p.arrows)] = nf

    return AlgebraTable(bq, field, basis, normal_forms, st_cols)


def _sparse_rref(rows: list[dict[int, object]], field: Field) -> list[tuple[int, dict[int, object]]]:
    """Reduced echelon of sparse rows; returns [(pivot_col, row)] sorted by pivot."""
    reduced: list[tuple[int, dict[int, object]]] = []
    for row in rows:
        row = _reduce_vector(dict(row), reduced, field)
        if not row:
            continue
        piv = min(row)
        inv = field.inv(row[piv])
        row = {c: field.mul(inv, v) for c, v in row.items()}
        for i, (opiv, orow) in enumerate(reduced):
            if piv in orow:
                f = orow[piv]
                newrow = dict(orow)
                for c, v in row.items():
                    nv = field.sub(newrow.get(c, field.zero), field.mul(f, v))
                    if nv == 0:
                        newrow.pop(c, None)
                    else:
                        newrow[c] = nv
                reduced[i] = (opiv, newrow)
        reduced.append((piv, row))
    reduced.sort(key=lambda t: t[0])
    return reduced


def _reduce_vector(vec: dict[int, object], reduced, field: Field) -> dict[int, object]:
    out = dict(vec)
    for piv, row in reduced:
        f = out.get(piv)
        if f is None or f == 0:
            continue
        for c, v in row.items():
            nv = field.sub(out.get(c, field.zero), field.mul(f, v))
            if nv == 0:
                out.pop(c, None)
            else:
                out[c] = nv
    return {c: v for c, v in out.items() if v != 0}


# ---------------------------------------------------------------------------
# factor quivers
# ---------------------------------------------------------------------------

def factor_quiver(bq_src: BoundQuiver, keep_vertices: Iterable[str],
                  keep_arrows: Iterable[str]) -> BoundQuiver:
    """Pass to a factor quiver: drop vertices/arrows, substitute zero for
    excluded arrows in every relation, and drop vanished terms."""
    kv = set(keep_vertices)
    ka = set(keep_arrows)
    q = bq_src.quiver
    unknown_v = kv - set(q.vertices)
    if unknown_v:
        raise ValueError(f"unknown vertices in keep set: {sorted(unknown_v)}")
    unknown_a = ka - {a.name for a in q.arrows}
    if unknown_a:
        raise ValueError(f"unknown arrows in keep set: {sorted(unknown_a)}")
    for name in ka:
        a = q.arrow(name)
        if a.source not in kv or a.target not in kv:
            raise ValueError(
                f"arrow {name} is incident to a removed vertex; factor keep-sets "
                f"must exclude all arrows touching removed vertices")
    new_q = Quiver([v for v in q.vertices if v in kv],
                   [a for a in q.arrows if a.name in ka])
    new_rels = []
    for rel in bq_src.relations:
        terms = [(c, p) for c, p in rel.terms if all(x in ka for x in p.arrows)]
        if terms:
            new_rels.append(Relation(tuple(terms)))
    return BoundQuiver(new_q, new_rels, nilbound=bq_src.nilbound)


# ---------------------------------------------------------------------------
# Tits form and hereditary classification
# ---------------------------------------------------------------------------

class RepType(Enum):
    FINITE = "Finite"
    TAME = "Tame"
    WILD = "Wild"


def tits_form(q: Quiver, d: Sequence[int]) -> int:
    """q(d) = sum d_i^2 - sum over arrows of d_source * d_target."""
    if len(d) != len(q.vertices):
        raise ValueError(f"dimension vector length {len(d)} != {len(q.vertices)} vertices")
    pos = {v: i for i, v in enumerate(q.vertices)}
    total = sum(int(x) * int(x) for x in d)
    for a in q.arrows:
        total -= int(d[pos[a.source]]) * int(d[pos[a.target]])
    return total


def symmetrized_tits_matrix(q: Quiver) -> list[list[int]]:
    """Integer symmetric matrix B with q(d) = (1/2) d B d^T for loop-free q."""
    n = len(q.vertices)
    pos = {v: i for i, v in enumerate(q.vertices)}
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        b[i][i] = 2
    for a in q.arrows:
        i, j = pos[a.source], pos[a.target]
        if i == j:
            b[i][i] -= 2
        else:
            b[i][j] -= 1
            b[j][i] -= 1
    return b


def _char_poly(b: list[list[int]]) -> list[Fraction]:
    """Coefficients of det(tI - B), ascending order, by Faddeev-LeVerrier."""
    n = len(b)
    bq = [[Fraction(x) for x in row] for row in b]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # M <- B(M + cI)
        for i in range(n):
            m[i][i] += c
        nm = [[sum(bq[i][l] * m[l][j] for l in range(n)) for j in range(n)]
              for i in range(n)]
        m = nm
        tr = sum(m[i][i] for i in range(n))
        c = -tr / k
        coeffs[n - k] = c
    return coeffs


def _leading_minors_positive(b: list[list[int]]) -> bool:
    n = len(b)
    for k in range(1, n + 1):
        sub = [[Fraction(b[i][j]) for j in range(k)] for i in range(k)]
        if _det(sub) <= 0:
            return False
    return True


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    w = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        sel = next((i for i in range(c, n) if w[i][c] != 0), None)
        if sel is None:
            return Fraction(0)
        if sel != c:
            w[c], w[sel] = w[sel], w[c]
            det = -det
        det *= w[c][c]
        inv = Fraction(1) / w[c][c]
        for i in range(c + 1, n):
            if w[i][c] != 0:
                f = w[i][c] * inv
                w[i] = [x - f * y for x, y in zip(w[i], w[c])]
    return det


def classify_hereditary(q: Quiver) -> RepType:
    """Finite / Tame / Wild via exact definiteness of the symmetrized Tits form.

    Requires a connected, loop-free quiver; split other inputs into
    components (or remove loops) before calling.
    """
    if q.has_loops():
        raise ValueError("classification requires a loop-free quiver")
    if not q.vertices:
        raise ValueError("classification requires a nonempty quiver")
    if not q.is_connected():
        raise ValueError("classification requires a connected quiver; classify components separately")
    b = symmetrized_tits_matrix(q)
    if _leading_minors_positive(b):
        return RepType.FINITE
    # positive semidefinite iff all elementary symmetric functions of the
    # (real) eigenvalues are nonnegative: coefficients of det(tI - B)
    # alternate weakly in sign
    coeffs = _char_poly(b)
    n = len(b)
    psd = all(coeffs[k] * (-1) ** (n - k) >= 0 for k in range(n + 1))
    return RepType.TAME if psd else RepType.WILD


def is_minimal_wild_hereditary(q: Quiver) -> bool:
    """Wild, and every proper one-vertex-deleted full subquiver has only
    finite or tame connected components."""
    if classify_hereditary(q) != RepType.WILD:
        return False
    for v in q.vertices:
        rest = q.full_subquiver([u for u in q.vertices if u != v])
        for comp in rest.connected_components():
            if comp.vertices and classify_hereditary(comp) == RepType.WILD:
                return False
    return True


def underlying_diagram(q: Quiver) -> nx.MultiGraph:
    """Forget orientation, keep edge multiplicities (and loops)."""
    g = nx.MultiGraph()
    g.add_nodes_from(q.vertices)
    for a in q.arrows:
        g.add_edge(a.source, a.target, key=a.name)
    return g


# ---------------------------------------------------------------------------
# standard examples
# ---------------------------------------------------------------------------

def kronecker_quiver(arrow_count: int = 2) -> Quiver:
    """Two vertices 1 -> 2 joined by the given number of parallel arrows."""
    names = ["a", "b", "c", "d", "e", "f", "g", "h"]
    return Quiver(["1", "2"], [(names[i], "1", "2") for i in range(arrow_count)])


def k3_bound_quiver() -> BoundQuiver:
    """The three-arrow Kronecker quiver as a bound quiver (hereditary)."""
    return BoundQuiver(kronecker_quiver(3), [], nilbound=2)


def line_quiver(n: int) -> Quiver:
    """A_n with arrows i -> i+1."""
    return Quiver([str(i) for i in range(1, n + 1)],
                  [(f"a{i}", str(i), str(i + 1)) for i in range(1, n)])


def loop_quiver(loops: int = 1) -> Quiver:
    names = ["x", "y", "z", "w", "u", "v"]
    return Quiver(["v"], [(names[i], "v", "v") for i in range(loops)])


def loop_square_zero(loops: int = 1) -> BoundQuiver:
    """Local algebra with the given number of loops and all length-2 products zero."""
    q = loop_quiver(loops)
    rels = []
    for a in q.arrows:
        for b in q.arrows:
            rels.append(make_relation(q, [(1, (a.name, b.name))]))
    return BoundQuiver(q, rels, nilbound=2)
