"""Brute-force property checks for measures over finite domain samples.

Every check evaluates the measure on the full pair table of the sample and
sweeps pairs (or triples, or pairs of pairs) in lexicographic sample order,
so counterexamples are deterministic. Failures on a sample are genuine
refutations; passes are evidence only. Checks whose verdict on a finite
sample cannot settle the question for the whole domain (closedness,
complementarity) carry ``semidecidable=True``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from .errors import DomainMismatchError, KindMismatchError, SampleTooLargeError
from .measures import DEFAULT_TOL, DomainSample, Kind, Measure, as_sample
from .operators import TransitivityOperator

MAX_COUNTEREXAMPLES = 10
EQUIVALENCE_CAP = 25

PROPERTIES = (
    "reflexivity",
    "strong_reflexivity",
    "symmetry",
    "boundedness",
    "closedness",
    "complementarity",
    "transitivity",
)


def _native(x: Any) -> Any:
    """JSON-native stand-in for a domain element or value."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating, Fraction)):
        return float(x)
    if isinstance(x, (list, tuple)):
        return [_native(v) for v in x]
    return str(x)


@dataclass(frozen=True)
class Counterexample:
    inputs: tuple
    lhs: Any
    rhs: Any

    def to_dict(self) -> dict:
        return {"inputs": list(self.inputs), "lhs": self.lhs, "rhs": self.rhs}

    @classmethod
    def from_dict(cls, data: dict) -> "Counterexample":
        return cls(tuple(data["inputs"]), data["lhs"], data["rhs"])


def _witness(inputs: Sequence, lhs: Any, rhs: Any) -> Counterexample:
    return Counterexample(tuple(_native(v) for v in inputs), _native(lhs), _native(rhs))


@dataclass
class PropertyReport:
    property: str
    holds: bool
    checked_count: int
    counterexamples: list = field(default_factory=list)
    tolerance: float = DEFAULT_TOL
    semidecidable: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "checked": self.checked_count,
            "tolerance": self.tolerance,
            "semidecidable": self.semidecidable,
            "counterexamples": [c.to_dict() for c in self.counterexamples],
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PropertyReport":
        return cls(
            data["property"],
            data["holds"],
            data["checked"],
            [Counterexample.from_dict(c) for c in data["counterexamples"]],
            data["tolerance"],
            data["semidecidable"],
            data.get("details", {}),
        )

    def describe(self) -> str:
        if self.holds:
            status = "PASS"
        elif self.semidecidable:
            status = "UNATTAINED"
        else:
            status = "FAIL"
        line = f"{status:<10} {self.property} ({self.checked_count} checked, tol {self.tolerance:g})"
        if self.semidecidable:
            line += " [semidecidable]"
        for c in self.counterexamples[:3]:
            line += f"\n           witness {c.inputs}: {c.lhs} vs {c.rhs}"
        return line


def value_table(m: Measure, dom: DomainSample) -> np.ndarray:
    """``table[i, j] = m(dom[i], dom[j])`` as floats."""
    xs = dom.elements
    return np.array([[float(m(x, y)) for y in xs] for x in xs], dtype=float)


def _hits(mask: np.ndarray, cap: int = MAX_COUNTEREXAMPLES) -> list:
    return [tuple(int(i) for i in idx) for idx in np.argwhere(mask)[:cap]]


def verify_reflexivity(m: Measure, dom, tol: float = DEFAULT_TOL) -> PropertyReport:
    """``m(x, x)`` equals ``s_max`` (similarity) or ``d_min`` (dissimilarity)."""
    dom = as_sample(dom)
    xs = dom.elements
    diag = np.array([float(m(x, x)) for x in xs])
    bad = ~(np.abs(diag - m.extremum) <= tol)
    examples = [_witness((xs[i], xs[i]), diag[i], m.extremum) for (i,) in _hits(bad)]
    return PropertyReport("reflexivity", not bad.any(), len(xs), examples, tol)


def verify_strong_reflexivity(m: Measure, dom, tol: float = DEFAULT_TOL) -> PropertyReport:
    """The extremum is reached exactly on the diagonal.

    Off-diagonal values within ``tol`` of the extremum count as violations.
    """
    dom = as_sample(dom)
    xs = dom.elements
    table = value_table(m, dom)
    near = np.abs(table - m.extremum) <= tol
    eye = np.eye(len(xs), dtype=bool)
    bad = (eye & ~near) | (~eye & near)
    examples = [_witness((xs[i], xs[j]), table[i, j], m.extremum) for i, j in _hits(bad)]
    return PropertyReport("strong_reflexivity", not bad.any(), table.size, examples, tol)


def verify_symmetry(m: Measure, dom, tol: float = DEFAULT_TOL) -> PropertyReport:
    dom = as_sample(dom)
    xs = dom.elements
    table = value_table(m, dom)
    bad = ~(np.abs(table - table.T) <= tol)
    examples = [_witness((xs[i], xs[j]), table[i, j], table[j, i]) for i, j in _hits(bad)]
    return PropertyReport("symmetry", not bad.any(), table.size, examples, tol)


def verify_boundedness_and_closedness(
    m: Measure, dom, tol: float = DEFAULT_TOL
) -> tuple[PropertyReport, PropertyReport]:
    """Range check against the declared codomain, and attainment of the opposite extremum.

    The first report holds when every sampled value lies in ``m.codomain``.
    The second holds when some sampled pair reaches ``s_min`` / ``d_max``; it
    is flagged semidecidable since a finite sample cannot refute attainment.
    """
    dom = as_sample(dom)
    xs = dom.elements
    table = value_table(m, dom)
    cod = m.codomain
    inside = np.vectorize(lambda v: cod.contains(float(v), tol), otypes=[bool])(table)
    examples = [_witness((xs[i], xs[j]), table[i, j], str(cod)) for i, j in _hits(~inside)]
    opposite = m.opposite_extremum
    bounded = PropertyReport(
        "boundedness", bool(inside.all()), table.size, examples, tol,
        details={
            "codomain": str(cod),
            "opposite_bound_finite": not math.isinf(opposite),
            "sample_min": float(table.min()),
            "sample_max": float(table.max()),
        },
    )

    far = np.argmin(table) if m.is_similarity else np.argmax(table)
    fi, fj = np.unravel_index(far, table.shape)
    details = {"opposite_extremum": _native(opposite)}
    if math.isinf(opposite):
        details["reason"] = "codomain is unbounded on the opposite side"
        closed = PropertyReport(
            "closedness", False, table.size, [_witness((xs[fi], xs[fj]), table[fi, fj], opposite)], tol, True, details
        )
        return bounded, closed
    attained = np.abs(table - opposite) <= tol
    if attained.any():
        i, j = _hits(attained, 1)[0]
        details.update(attained_by=[_native(xs[i]), _native(xs[j])], value=float(table[i, j]))
        closed = PropertyReport("closedness", True, table.size, [], tol, True, details)
    else:
        details["closest_value"] = float(table[fi, fj])
        closed = PropertyReport(
            "closedness", False, table.size, [_witness((xs[fi], xs[fj]), table[fi, fj], opposite)], tol, True, details
        )
    return bounded, closed


@dataclass(frozen=True)
class ComplementMap:
    """``sets[i]`` holds the complements of ``elements[i]``."""

    elements: tuple
    sets: tuple

    def of(self, x) -> tuple:
        return self.sets[self.elements.index(x)]

    @property
    def cardinalities(self) -> tuple:
        return tuple(len(s) for s in self.sets)

    @property
    def empty(self) -> bool:
        return all(len(s) == 0 for s in self.sets)

    @property
    def unitary(self) -> bool:
        return all(len(s) == 1 for s in self.sets)


def compute_complements(m: Measure, dom, tol: float = DEFAULT_TOL) -> tuple[ComplementMap, PropertyReport]:
    """Complement sets at the declared opposite extremum, and the complementarity verdict.

    Complementarity holds when every element has the same, non-zero number
    of complements. ``details["unitary"]`` records whether every set is a
    singleton; for reflexive measures ``details["self_excluded"]`` records
    that no element is its own complement.
    """
    dom = as_sample(dom)
    xs = dom.elements
    table = value_table(m, dom)
    opposite = m.opposite_extremum
    if math.isinf(opposite):
        mask = np.zeros(table.shape, dtype=bool)
    else:
        mask = np.abs(table - opposite) <= tol
    sets = tuple(tuple(xs[j] for j in np.nonzero(row)[0]) for row in mask)
    cmap = ComplementMap(xs, sets)
    sizes = cmap.cardinalities
    target = sizes[0] if sizes[0] > 0 else 1
    examples = [_witness((xs[i],), sizes[i], target) for i in range(len(xs)) if sizes[i] != target]
    holds = not examples
    details = {"unitary": cmap.unitary, "distinct_cardinalities": sorted(set(sizes))}
    reflexive = bool(np.all(np.abs(np.diag(table) - m.extremum) <= tol))
    if reflexive:
        details["self_excluded"] = not bool(np.diag(mask).any())
    report = PropertyReport(
        "complementarity", holds, table.size, examples[:MAX_COUNTEREXAMPLES], tol, True, details
    )
    return cmap, report


def _check_operator_fits(m: Measure, op: TransitivityOperator) -> None:
    if op.side is not m.kind:
        raise KindMismatchError(f"{op.side.value}-side operator {op.name!r} cannot rule the {m.kind.value} {m.name!r}")
    if not op.domain.contains_interval(m.codomain):
        raise DomainMismatchError(f"operator domain {op.domain} does not contain the codomain {m.codomain} of {m.name!r}")


def transitivity_mask(m: Measure, op: TransitivityOperator, dom, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Boolean ``(x, z, y)`` array, true where the transitivity inequality holds."""
    dom = as_sample(dom)
    _check_operator_fits(m, op)
    table = value_table(m, dom)
    out = np.empty((len(dom),) * 3, dtype=bool)
    for i in range(len(dom)):
        rhs = op.on_grid(table[i][:, None], table)
        lhs = table[i][None, :]
        out[i] = lhs <= rhs + tol if m.kind is Kind.DISSIMILARITY else lhs >= rhs - tol
    return out


def verify_transitivity(m: Measure, op: TransitivityOperator, dom, tol: float = DEFAULT_TOL) -> PropertyReport:
    """``m(x, y) <= op(m(x, z), m(z, y))`` for dissimilarities (``>=`` for similarities).

    Counterexamples are ``(x, z, y)`` triples with ``lhs = m(x, y)`` and
    ``rhs = op(m(x, z), m(z, y))``.

    Raises:
        DomainMismatchError: ``op.domain`` does not contain ``m.codomain``.
        KindMismatchError: ``op`` belongs to the other kind of measure.
    """
    dom = as_sample(dom)
    _check_operator_fits(m, op)
    xs = dom.elements
    n = len(xs)
    table = value_table(m, dom)
    examples = []
    holds = True
    for i in range(n):
        rhs = op.on_grid(table[i][:, None], table)
        lhs = table[i][None, :]
        ok = lhs <= rhs + tol if m.kind is Kind.DISSIMILARITY else lhs >= rhs - tol
        if ok.all():
            continue
        holds = False
        for k, j in _hits(~ok, MAX_COUNTEREXAMPLES - len(examples)):
            examples.append(_witness((xs[i], xs[k], xs[j]), table[i, j], rhs[k, j]))
    return PropertyReport(
        "transitivity", holds, n ** 3, examples, tol, details={"operator": op.name}
    )


def verify_equivalence(
    m1: Measure, m2: Measure, dom, tol: float = DEFAULT_TOL, cap: int = EQUIVALENCE_CAP
) -> PropertyReport:
    """Do ``m1`` and ``m2`` induce the same preorder on pairs?

    For every pair of pairs ``(p, q)``: ``m1(p) <= m1(q) + tol`` iff
    ``m2(p) <= m2(q) + tol``. The sweep is quartic in the sample size.

    Raises:
        KindMismatchError: the measures are of different kinds.
        SampleTooLargeError: the sample has more than ``cap`` elements.
    """
    dom = as_sample(dom)
    if m1.kind is not m2.kind:
        raise KindMismatchError("equivalence compares two measures of the same kind")
    if len(dom) > cap:
        raise SampleTooLargeError(f"{len(dom)} elements exceed the equivalence cap of {cap}")
    xs = dom.elements
    n = len(xs)
    v1 = value_table(m1, dom).ravel()
    v2 = value_table(m2, dom).ravel()
    a1 = v1[:, None] <= v1[None, :] + tol
    a2 = v2[:, None] <= v2[None, :] + tol
    bad = a1 != a2
    examples = []
    for p, q in _hits(bad):
        (xi, yi), (xj, yj) = divmod(p, n), divmod(q, n)
        examples.append(_witness((xs[xi], xs[yi], xs[xj], xs[yj]), [v1[p], v1[q]], [v2[p], v2[q]]))
    return PropertyReport("equivalence", not bad.any(), int(v1.size ** 2), examples, tol)


@dataclass
class FullReport:
    measure: str
    kind: str
    domain: str
    domain_size: int
    tolerance: float
    reports: list

    @property
    def holds(self) -> bool:
        """All checks that are not semidecidable hold."""
        return all(r.holds for r in self.reports if not r.semidecidable)

    def __getitem__(self, name: str) -> PropertyReport:
        for r in self.reports:
            if r.property == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "measure": self.measure,
            "kind": self.kind,
            "domain": self.domain,
            "domain_size": self.domain_size,
            "tolerance": self.tolerance,
            "holds": self.holds,
            "reports": [r.to_dict() for r in self.reports],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FullReport":
        return cls(
            data["measure"], data["kind"], data["domain"], data["domain_size"], data["tolerance"],
            [PropertyReport.from_dict(r) for r in data["reports"]],
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "FullReport":
        return cls.from_dict(json.loads(text))

    def describe(self) -> str:
        head = f"{self.kind} {self.measure} over {self.domain} ({self.domain_size} elements)"
        body = "\n".join(r.describe() for r in self.reports)
        verdict = "all checks hold" if self.holds else "VIOLATIONS FOUND"
        return f"{head}\n{body}\n{verdict}"


def full_report(
    m: Measure,
    dom,
    op: Optional[TransitivityOperator] = None,
    tol: float = DEFAULT_TOL,
    properties: Optional[Sequence[str]] = None,
) -> FullReport:
    """Run every applicable check (or the named subset) and collect the reports.

    Transitivity is only checked when ``op`` is given.

    Raises:
        ValueError: an unknown property name.
    """
    dom = as_sample(dom)
    wanted = list(PROPERTIES if properties is None else properties)
    unknown = [p for p in wanted if p not in PROPERTIES]
    if unknown:
        raise ValueError(f"unknown properties: {', '.join(unknown)}")
    reports = []
    if "reflexivity" in wanted:
        reports.append(verify_reflexivity(m, dom, tol))
    if "strong_reflexivity" in wanted:
        reports.append(verify_strong_reflexivity(m, dom, tol))
    if "symmetry" in wanted:
        reports.append(verify_symmetry(m, dom, tol))
    if "boundedness" in wanted or "closedness" in wanted:
        bounded, closed = verify_boundedness_and_closedness(m, dom, tol)
        if "boundedness" in wanted:
            reports.append(bounded)
        if "closedness" in wanted:
            reports.append(closed)
    if "complementarity" in wanted:
        reports.append(compute_complements(m, dom, tol)[1])
    if "transitivity" in wanted and op is not None:
        reports.append(verify_transitivity(m, op, dom, tol))
    label = dom.label or f"{len(dom)}-element sample"
    return FullReport(m.name, m.kind.value, label, len(dom), tol, reports)
