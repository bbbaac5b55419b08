"""Weighted partial isometries on finite index sets and the induced generators.

An operator here moves basis vectors along an injective partial map of the
universe and scales them; edge generators built from a branching system get
amplitude sqrt(w(x)/w(f_e(x))) on R_e and vertex projections are indicator
diagonals. Because the squared amplitudes are ratios of weights, the relation
checks can run over exact rationals whenever the operators came out of a
branching system, with a float path as fallback for hand-built operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .branching import DiscreteBranchingSystem, validate
from .graph import DirectedGraph
from .report import FAIL, PASS, CheckItem, Report


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedPartialIsometry:
    """Partial map j = mapping[x] with scalar amplitude[x] on basis vector x.

    Acting on a function φ, the result at index j is amplitude[x]·φ(x) for
    the unique x with mapping[x] = j. ``amplitude_sq``, when present, carries
    the exact squares of the amplitudes and is preserved through composition
    so relation checks can avoid floats entirely.
    """

    mapping: dict[int, int]
    amplitude: dict[int, float]
    amplitude_sq: Optional[dict[int, Fraction]] = None

    def __post_init__(self):
        if set(self.mapping) != set(self.amplitude):
            raise OperatorError("mapping and amplitude must share the same domain")
        seen: dict[int, int] = {}
        for x in self.mapping:
            j = self.mapping[x]
            if j in seen:
                raise OperatorError(f"mapping is not injective: {seen[j]} and {x} both land on {j}")
            seen[j] = x
        for x, a in self.amplitude.items():
            if not a > 0:
                raise OperatorError(f"amplitude at {x} must be positive, got {a}")
        if self.amplitude_sq is not None:
            if set(self.amplitude_sq) != set(self.mapping):
                raise OperatorError("amplitude_sq must share the mapping's domain")
            for x, q in self.amplitude_sq.items():
                if not q > 0:
                    raise OperatorError(f"amplitude_sq at {x} must be positive, got {q}")

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.mapping)

    @property
    def range(self) -> frozenset[int]:
        return frozenset(self.mapping.values())

    def inverse_mapping(self) -> dict[int, int]:
        return {j: x for x, j in self.mapping.items()}


def zero_operator() -> WeightedPartialIsometry:
    return WeightedPartialIsometry(mapping={}, amplitude={})


def identity_on(support: Iterable[int]) -> WeightedPartialIsometry:
    s = sorted(set(support))
    return WeightedPartialIsometry(
        mapping={x: x for x in s},
        amplitude={x: 1.0 for x in s},
        amplitude_sq={x: Fraction(1) for x in s},
    )


@dataclass(frozen=True)
class DiagonalProjection:
    support: frozenset[int]

    def as_partial_isometry(self) -> WeightedPartialIsometry:
        return identity_on(self.support)


@dataclass(frozen=True)
class GeneratorFamily:
    """The edge operators and vertex projections induced by one system."""

    universe: tuple[int, ...]
    edge_ops: dict[str, WeightedPartialIsometry]
    vertex_projs: dict[str, DiagonalProjection]
    weights: dict[int, float]


def induce(bs: DiscreteBranchingSystem, g: DirectedGraph) -> GeneratorFamily:
    """Turn a valid branching system into its generator family.

    The edge operator for e sends x in R_e to f_e^{-1}(x) with amplitude
    sqrt(w(x)/w(f_e(x))) — equivalently it carries a function supported on
    D_rng(e) onto R_e with the inverse derivative's square root. Vertex
    projections are the indicators of the domain sets.
    """
    report = validate(bs, g)
    if not report.passed:
        bad = ", ".join(item.item for item in report.failures())
        raise OperatorError(f"branching system fails condition(s) {bad}; cannot induce")

    edge_ops: dict[str, WeightedPartialIsometry] = {}
    for e in g.edges:
        f = bs.edge_maps[e.id]
        mapping: dict[int, int] = {}
        amplitude: dict[int, float] = {}
        amplitude_sq: dict[int, Fraction] = {}
        for x in sorted(f):
            j = f[x]
            mapping[x] = j
            ratio = Fraction(bs.weight(x)) / Fraction(bs.weight(j))
            amplitude_sq[x] = ratio
            amplitude[x] = math.sqrt(ratio)
        edge_ops[e.id] = WeightedPartialIsometry(
            mapping=mapping, amplitude=amplitude, amplitude_sq=amplitude_sq
        )

    vertex_projs = {v: DiagonalProjection(bs.domain_sets[v]) for v in g.vertices}
    return GeneratorFamily(
        universe=bs.universe,
        edge_ops=edge_ops,
        vertex_projs=vertex_projs,
        weights=dict(bs.weights),
    )


def adjoint(t: WeightedPartialIsometry) -> WeightedPartialIsometry:
    """Adjoint for the counting measure: reverse the map, keep the scalars."""
    mapping = {j: x for x, j in t.mapping.items()}
    amplitude = {j: t.amplitude[x] for x, j in t.mapping.items()}
    amplitude_sq = None
    if t.amplitude_sq is not None:
        amplitude_sq = {j: t.amplitude_sq[x] for x, j in t.mapping.items()}
    return WeightedPartialIsometry(mapping=mapping, amplitude=amplitude, amplitude_sq=amplitude_sq)


def adjoint_weighted(t: WeightedPartialIsometry, weights: dict[int, float]) -> WeightedPartialIsometry:
    """Adjoint in the weighted inner product <φ,ψ> = Σ w(x)·φ(x)·conj(ψ(x)).

    If t carries x to j with amplitude a, the adjoint carries j back to x
    with amplitude a·w(j)/w(x) — the weight ratio re-balances the pairing.
    """
    mapping: dict[int, int] = {}
    amplitude: dict[int, float] = {}
    amplitude_sq: Optional[dict[int, Fraction]] = (
        {} if t.amplitude_sq is not None else None
    )
    for x, j in t.mapping.items():
        mapping[j] = x
        ratio = Fraction(weights[j]) / Fraction(weights[x])
        amplitude[j] = t.amplitude[x] * float(ratio)
        if amplitude_sq is not None:
            amplitude_sq[j] = t.amplitude_sq[x] * ratio * ratio
    return WeightedPartialIsometry(mapping=mapping, amplitude=amplitude, amplitude_sq=amplitude_sq)


def compose(a: WeightedPartialIsometry, b: WeightedPartialIsometry) -> WeightedPartialIsometry:
    """Operator product a∘b: apply b first, then a; amplitudes multiply."""
    mapping: dict[int, int] = {}
    amplitude: dict[int, float] = {}
    exact = a.amplitude_sq is not None and b.amplitude_sq is not None
    amplitude_sq: Optional[dict[int, Fraction]] = {} if exact else None
    for x, mid in b.mapping.items():
        if mid not in a.mapping:
            continue
        mapping[x] = a.mapping[mid]
        amplitude[x] = b.amplitude[x] * a.amplitude[mid]
        if exact:
            amplitude_sq[x] = b.amplitude_sq[x] * a.amplitude_sq[mid]
    return WeightedPartialIsometry(mapping=mapping, amplitude=amplitude, amplitude_sq=amplitude_sq)


def wpi_matrix(t: WeightedPartialIsometry, size: int) -> np.ndarray:
    """Dense size×size matrix of t over the universe {0..size-1}."""
    m = np.zeros((size, size))
    for x, j in t.mapping.items():
        if not (0 <= x < size and 0 <= j < size):
            raise OperatorError(f"index pair ({x}, {j}) outside matrix size {size}")
        m[j, x] = t.amplitude[x]
    return m


def to_matrix(fam: GeneratorFamily, generator_id: str, max_size: Optional[int] = None) -> np.ndarray:
    """Dense matrix of one generator, edges taking priority over vertices.

    The universe must be 0-based contiguous for a dense layout to make sense.
    """
    if generator_id in fam.edge_ops and generator_id in fam.vertex_projs:
        raise OperatorError(f"'{generator_id}' names both an edge and a vertex; rename one")
    if fam.universe != tuple(range(len(fam.universe))):
        raise OperatorError("dense export needs a contiguous 0-based universe")
    size = len(fam.universe)
    if max_size is not None and size > max_size:
        raise OperatorError(f"universe size {size} exceeds max_size {max_size}")
    if generator_id in fam.edge_ops:
        return wpi_matrix(fam.edge_ops[generator_id], size)
    if generator_id in fam.vertex_projs:
        return wpi_matrix(fam.vertex_projs[generator_id].as_partial_isometry(), size)
    raise OperatorError(f"unknown generator '{generator_id}'")


def coordinate_export(matrix: np.ndarray) -> str:
    """Sparse coordinate text: 'rows cols nnz' then one 'row col value' per entry.

    Indices are 0-based; entries appear in row-major order. Complex matrices
    print 'row col re im' per entry instead.
    """
    if matrix.ndim != 2:
        raise OperatorError("coordinate export needs a 2-d matrix")
    rows, cols = matrix.shape
    complex_valued = np.iscomplexobj(matrix)
    lines = []
    nnz = 0
    for i in range(rows):
        for j in range(cols):
            v = matrix[i, j]
            if v == 0:
                continue
            nnz += 1
            if complex_valued:
                lines.append(f"{i} {j} {v.real:.17g} {v.imag:.17g}")
            else:
                lines.append(f"{i} {j} {v:.17g}")
    return "\n".join([f"{rows} {cols} {nnz}"] + lines) + "\n"


# -- relation verification --------------------------------------------------


@dataclass(frozen=True)
class CKReport(Report):
    exact: bool = True


def _as_exact(t: WeightedPartialIsometry, float_tol: float):
    """Return (mapping, value dict) with Fractions when available, else floats."""
    if t.amplitude_sq is not None:
        return t.mapping, t.amplitude_sq, True
    return t.mapping, {x: a * a for x, a in t.amplitude.items()}, False


def _is_identity_on(
    t: WeightedPartialIsometry,
    support: frozenset[int],
    float_tol: float,
) -> tuple[Optional[dict], bool]:
    """Witness (or None) that t acts as the identity on exactly ``support``."""
    mapping, sq, exact = _as_exact(t, float_tol)
    if set(mapping) != support:
        missing = sorted(support - set(mapping))
        extra = sorted(set(mapping) - support)
        return {"missing": missing, "extra": extra}, exact
    for x in sorted(mapping):
        if mapping[x] != x:
            return {"index": x, "mapsTo": mapping[x]}, exact
        value = sq[x]
        ok = value == 1 if exact else abs(value - 1.0) <= float_tol
        if not ok:
            return {"index": x, "amplitudeSquared": float(value)}, exact
    return None, exact


def verify_ck(fam: GeneratorFamily, g: DirectedGraph, float_tol: float = 1e-12) -> CKReport:
    """Check the five generator relations for the graph, exactly when possible.

    i.   distinct vertex projections have disjoint support
    ii.  adjoint(S_e)·S_e is the projection onto D_rng(e)
    iii. S_e·adjoint(S_e) is dominated by the projection onto D_src(e)
    iv.  adjoint(S_e)·S_f vanishes for distinct edges e, f
    v.   at each vertex emitting finitely many (and at least one) edges, the
         range projections of its edges sum to the vertex projection

    Adjoints are taken in the weighted inner product carried by the family,
    which is what makes the edge operators genuine partial isometries when
    the weights are not all 1.
    """
    ids = {e.id for e in g.edges}
    if set(fam.edge_ops) != ids:
        raise OperatorError("edge operators do not match the graph's edges")
    if set(fam.vertex_projs) != set(g.vertices):
        raise OperatorError("vertex projections do not match the graph's vertices")

    items: list[CheckItem] = []
    all_exact = True

    witness = None
    owner: dict[int, str] = {}
    for v in g.vertices:
        for x in sorted(fam.vertex_projs[v].support):
            if x in owner:
                witness = {"vertices": [owner[x], v], "index": x}
                break
            owner[x] = v
        if witness:
            break
    items.append(CheckItem("i", FAIL if witness else PASS, witness))

    adjoints = {
        e.id: adjoint_weighted(fam.edge_ops[e.id], fam.weights) for e in g.edges
    }

    witness = None
    for e in g.edges:
        product = compose(adjoints[e.id], fam.edge_ops[e.id])
        w, exact = _is_identity_on(product, fam.vertex_projs[e.rng].support, float_tol)
        all_exact = all_exact and exact
        if w is not None:
            witness = {"edge": e.id, **w}
            break
    items.append(CheckItem("ii", FAIL if witness else PASS, witness))

    witness = None
    for e in g.edges:
        product = compose(fam.edge_ops[e.id], adjoints[e.id])
        mapping, sq, exact = _as_exact(product, float_tol)
        all_exact = all_exact and exact
        support = fam.vertex_projs[e.src].support
        for x in sorted(mapping):
            if mapping[x] != x:
                witness = {"edge": e.id, "index": x, "mapsTo": mapping[x]}
                break
            if x not in support:
                witness = {"edge": e.id, "index": x, "outsideSource": e.src}
                break
            value = sq[x]
            ok = value <= 1 if exact else value <= 1.0 + float_tol
            if not ok:
                witness = {"edge": e.id, "index": x, "amplitudeSquared": float(value)}
                break
        if witness:
            break
    items.append(CheckItem("iii", FAIL if witness else PASS, witness))

    witness = None
    for e in g.edges:
        if witness:
            break
        for f in g.edges:
            if e.id == f.id:
                continue
            product = compose(adjoints[e.id], fam.edge_ops[f.id])
            if product.mapping:
                x = min(product.mapping)
                witness = {"edges": [e.id, f.id], "index": x}
                break
    items.append(CheckItem("iv", FAIL if witness else PASS, witness))

    witness = None
    for v in g.vertices:
        out = g.out_edges(v)
        if not out:
            continue
        diag: dict[int, object] = {}
        exact_here = True
        for e in out:
            product = compose(fam.edge_ops[e.id], adjoints[e.id])
            mapping, sq, exact = _as_exact(product, float_tol)
            exact_here = exact_here and exact
            for x in mapping:
                if mapping[x] != x:
                    witness = {"vertex": v, "edge": e.id, "index": x, "mapsTo": mapping[x]}
                    break
                diag[x] = diag.get(x, 0) + sq[x]
            if witness:
                break
        if witness:
            break
        all_exact = all_exact and exact_here
        support = fam.vertex_projs[v].support
        if set(diag) != support:
            missing = sorted(support - set(diag))
            extra = sorted(set(diag) - support)
            witness = {"vertex": v, "missing": missing, "extra": extra}
            break
        for x in sorted(diag):
            value = diag[x]
            ok = value == 1 if exact_here else abs(float(value) - 1.0) <= float_tol
            if not ok:
                witness = {"vertex": v, "index": x, "diagonal": float(value)}
                break
        if witness:
            break
    items.append(CheckItem("v", FAIL if witness else PASS, witness))

    return CKReport(tuple(items), exact=all_exact)
