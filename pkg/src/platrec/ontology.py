"""In-memory platform ontology: classes, relation kinds, individuals.

All model types are frozen dataclasses whose collection fields are sorted
tuples, so two ontologies built from the same declarations in any order
compare (and hash) equal.  Construction never validates; call
:func:`validate_ontology` or :func:`ensure_valid` for that.
"""

from __future__ import annotations

import re
import unicodedata
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Union

from .errors import OntologyValidationError, PatchError

FAMILIES = ("control", "sequential", "implementation")

# Fixed subkind vocabulary per relation family.
SUBKINDS: Mapping[str, tuple[str, ...]] = {
    "control": ("configuration", "debugging", "modification", "execution-redirection", "physical-mitm"),
    "sequential": ("load", "initialization", "interpreting"),
    "implementation": ("shared", "partitioned", "stored", "loaded", "executed"),
}

IMPLEMENTATIONS = ("hardware", "software", "firmware", "unknown")
SOURCE_STATUSES = ("closed", "open", "hybrid", "unknown")
TRUST_STATUSES = ("trusted", "untrusted", "unknown")

IDENT_RE = re.compile(r"[^\W\d_][\w-]*\Z")
_SEPARATORS = re.compile(r"[\s_-]+")


def normalize_term(term: str) -> str:
    """Case-fold, trim, and collapse runs of space/hyphen/underscore to ``-``."""
    text = unicodedata.normalize("NFC", term).casefold().strip()
    text = _SEPARATORS.sub("-", text)
    # casefold is not idempotent for a handful of code points
    while True:
        again = _SEPARATORS.sub("-", unicodedata.normalize("NFC", text).casefold().strip())
        if again == text:
            return text
        text = again


def is_identifier(text: str) -> bool:
    return bool(IDENT_RE.match(text))


@dataclass(frozen=True)
class OntologyClass:
    id: str
    name: str | None = None
    parents: tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self):
        if self.name is None:
            object.__setattr__(self, "name", self.id)
        object.__setattr__(self, "parents", tuple(sorted(set(self.parents))))


@dataclass(frozen=True)
class RelationKind:
    id: str
    family: str
    subkind: str
    directed: bool = True

    @property
    def label(self) -> str:
        return f"{self.family}/{self.subkind}"


@dataclass(frozen=True)
class Individual:
    id: str
    class_id: str
    aliases: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "aliases", tuple(sorted(set(self.aliases))))


@dataclass(frozen=True)
class ComponentAttributes:
    implementation: str = "unknown"
    source_status: str = "unknown"
    trust_status: str = "unknown"

    def __post_init__(self):
        for name, allowed in (
            ("implementation", IMPLEMENTATIONS),
            ("source_status", SOURCE_STATUSES),
            ("trust_status", TRUST_STATUSES),
        ):
            value = getattr(self, name)
            if value not in allowed:
                raise ValueError(f"{name} must be one of {allowed}, got {value!r}")

    def to_dict(self) -> dict:
        return {
            "implementation": self.implementation,
            "source_status": self.source_status,
            "trust_status": self.trust_status,
        }


Declaration = Union[OntologyClass, RelationKind, Individual]


def _by_id(items) -> tuple:
    return tuple(sorted(items, key=lambda item: item.id))


@dataclass(frozen=True)
class Ontology:
    name: str = ""
    version: str = ""
    classes: tuple[OntologyClass, ...] = ()
    relation_kinds: tuple[RelationKind, ...] = ()
    individuals: tuple[Individual, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "classes", _by_id(self.classes))
        object.__setattr__(self, "relation_kinds", _by_id(self.relation_kinds))
        object.__setattr__(self, "individuals", _by_id(self.individuals))

    @cached_property
    def class_map(self) -> dict[str, OntologyClass]:
        return {c.id: c for c in self.classes}

    @cached_property
    def relation_map(self) -> dict[str, RelationKind]:
        return {r.id: r for r in self.relation_kinds}

    @cached_property
    def individual_map(self) -> dict[str, Individual]:
        return {i.id: i for i in self.individuals}

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        kids = defaultdict(list)
        for c in self.classes:
            for p in c.parents:
                kids[p].append(c.id)
        return {k: tuple(sorted(v)) for k, v in kids.items()}

    @property
    def roots(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.classes if not c.parents)

    def is_empty(self) -> bool:
        return not (self.classes or self.relation_kinds or self.individuals)

    def descendants(self, class_id: str, *, inclusive: bool = True) -> frozenset[str]:
        seen = {class_id} if inclusive else set()
        queue = deque([class_id])
        while queue:
            for kid in self.children.get(queue.popleft(), ()):
                if kid not in seen:
                    seen.add(kid)
                    queue.append(kid)
        return frozenset(seen)

    def ancestors(self, class_id: str, *, inclusive: bool = True) -> frozenset[str]:
        seen = {class_id} if inclusive else set()
        queue = deque([class_id])
        while queue:
            cls = self.class_map.get(queue.popleft())
            for parent in cls.parents if cls else ():
                if parent not in seen:
                    seen.add(parent)
                    queue.append(parent)
        return frozenset(seen)

    @cached_property
    def term_index(self) -> "TermIndex":
        return TermIndex(self)


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    code: str
    kind: str  # class | relation_kind | individual
    subject: str
    field: str
    detail: str
    members: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"[{self.code}] {self.kind} {self.subject!r} ({self.field}): {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


def _duplicates(items, kind: str) -> list[Violation]:
    counts: dict[str, int] = defaultdict(int)
    for item in items:
        counts[item.id] += 1
    return [
        Violation("duplicate-id", kind, ident, "id", f"declared {n} times")
        for ident, n in sorted(counts.items())
        if n > 1
    ]


def _cycles(classes: Iterable[OntologyClass]) -> list[tuple[str, ...]]:
    """Strongly connected components of the parent graph that contain a cycle."""
    graph = {}
    for c in classes:
        graph.setdefault(c.id, set()).update(c.parents)
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    found: list[tuple[str, ...]] = []
    counter = 0

    for start in sorted(graph):
        if start in index:
            continue
        work = [(start, iter(sorted(graph[start])))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, edges = work[-1]
            advanced = False
            for nxt in edges:
                if nxt not in graph:
                    continue  # dangling; reported separately
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(sorted(graph[nxt]))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[node])
            if low[node] == index[node]:
                members = []
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    members.append(top)
                    if top == node:
                        break
                if len(members) > 1 or node in graph[node]:
                    found.append(tuple(sorted(members)))
    return sorted(found)


def validate_ontology(o: Ontology, subkinds: Mapping[str, Iterable[str]] = SUBKINDS) -> ValidationReport:
    """Enumerate every broken invariant of ``o``; an empty report means valid."""
    out: list[Violation] = []
    class_ids = {c.id for c in o.classes}

    for kind, items in (("class", o.classes), ("relation_kind", o.relation_kinds), ("individual", o.individuals)):
        for item in items:
            if not is_identifier(item.id):
                out.append(Violation("bad-identifier", kind, item.id, "id", "not a valid identifier"))
        out += _duplicates(items, kind)

    for c in o.classes:
        for p in c.parents:
            if p not in class_ids:
                out.append(Violation("dangling-parent", "class", c.id, "parents", f"parent {p!r} is not declared"))
    for members in _cycles(o.classes):
        out.append(
            Violation("cycle", "class", ",".join(members), "parents", "parent graph has a cycle", members)
        )

    for r in o.relation_kinds:
        if r.family not in FAMILIES:
            out.append(Violation("bad-family", "relation_kind", r.id, "family", f"unknown family {r.family!r}"))
        elif r.subkind not in tuple(subkinds.get(r.family, ())):
            out.append(
                Violation(
                    "bad-subkind", "relation_kind", r.id, "subkind", f"{r.subkind!r} is not a {r.family} subkind"
                )
            )

    owners: dict[str, str] = {}
    for ind in o.individuals:
        if ind.class_id not in class_ids:
            out.append(
                Violation("dangling-class", "individual", ind.id, "class_id", f"class {ind.class_id!r} is not declared")
            )
        forms = {normalize_term(ind.id)}
        for alias in ind.aliases:
            norm = normalize_term(alias)
            if not norm:
                out.append(Violation("empty-alias", "individual", ind.id, "aliases", "alias is empty"))
            else:
                forms.add(norm)
        for form in sorted(forms):
            other = owners.setdefault(form, ind.id)
            if other != ind.id:
                out.append(
                    Violation(
                        "alias-collision",
                        "individual",
                        ind.id,
                        "aliases",
                        f"{form!r} already names individual {other!r}",
                        (other, ind.id),
                    )
                )
    return ValidationReport(tuple(out))


def ensure_valid(o: Ontology) -> Ontology:
    report = validate_ontology(o)
    if not report.ok:
        raise OntologyValidationError(report.violations)
    return o


# ----------------------------------------------------------------- hierarchy


@dataclass(frozen=True)
class HierarchyStats:
    subclass_link_count: int
    parent_class_count: int
    leaf_count: int
    depth: Mapping[str, int] = field(default_factory=dict)

    @property
    def depth_sum(self) -> int:
        return sum(self.depth.values())

    @property
    def max_depth(self) -> int:
        return max(self.depth.values(), default=0)


def hierarchy_stats(o: Ontology) -> HierarchyStats:
    """Link/parent/leaf counts and per-class depth (roots at depth 1, shortest path)."""
    ensure_valid(o)
    depth = {r: 1 for r in o.roots}
    queue = deque(o.roots)
    while queue:
        node = queue.popleft()
        for kid in o.children.get(node, ()):
            if kid not in depth:
                depth[kid] = depth[node] + 1
                queue.append(kid)
    links = sum(len(c.parents) for c in o.classes)
    parents = sum(1 for c in o.classes if o.children.get(c.id))
    leaves = len(o.classes) - parents
    return HierarchyStats(links, parents, leaves, dict(sorted(depth.items())))


# --------------------------------------------------------------------- patch


@dataclass(frozen=True)
class PatchAddition:
    item: Declaration
    rationale: str = ""


@dataclass(frozen=True)
class OntologyPatch:
    additions: tuple[PatchAddition, ...] = ()

    @classmethod
    def of(cls, *items: Declaration, rationale: str = "") -> "OntologyPatch":
        return cls(tuple(PatchAddition(item, rationale) for item in items))

    def __len__(self) -> int:
        return len(self.additions)


def _describe(item: Declaration) -> str:
    kind = {OntologyClass: "class", RelationKind: "relation", Individual: "individual"}[type(item)]
    return f"{kind} {item.id!r}"


def apply_patch(o: Ontology, patch: OntologyPatch) -> Ontology:
    """Return a new ontology with the patch's additions; reject atomically on any problem."""
    ensure_valid(o)
    if not patch.additions:
        return o
    taken = {c.id for c in o.classes}, {r.id for r in o.relation_kinds}, {i.id for i in o.individuals}
    classes, relations, individuals = list(o.classes), list(o.relation_kinds), list(o.individuals)
    for add in patch.additions:
        item = add.item
        if isinstance(item, OntologyClass):
            bucket, target = taken[0], classes
        elif isinstance(item, RelationKind):
            bucket, target = taken[1], relations
        elif isinstance(item, Individual):
            bucket, target = taken[2], individuals
        else:
            raise PatchError(repr(item), "unsupported addition type")
        if item.id in bucket:
            raise PatchError(_describe(item), "duplicate id")
        bucket.add(item.id)
        target.append(item)

    result = replace(o, classes=tuple(classes), relation_kinds=tuple(relations), individuals=tuple(individuals))
    report = validate_ontology(result)
    if not report.ok:
        added = {(type(a.item), a.item.id): a.item for a in patch.additions}
        kind_types = {"class": OntologyClass, "relation_kind": RelationKind, "individual": Individual}
        for v in report.violations:
            ids = v.members or (v.subject,)
            for ident in ids:
                item = added.get((kind_types[v.kind], ident))
                if item is not None:
                    raise PatchError(_describe(item), v.detail)
        raise PatchError("patch", str(report.violations[0]))
    return result


# -------------------------------------------------------------------- lookup


@dataclass(frozen=True)
class IndividualHit:
    individual_id: str
    class_id: str
    warning: str | None = None


@dataclass(frozen=True)
class ClassHit:
    class_id: str


@dataclass(frozen=True)
class Miss:
    term: str


LookupResult = Union[IndividualHit, ClassHit, Miss]


class TermIndex:
    """Normalized-term index over an ontology's individuals and class names."""

    def __init__(self, o: Ontology):
        self.individuals: dict[str, Individual] = {}
        self.classes: dict[str, str] = {}
        for ind in o.individuals:
            for form in (ind.id, *ind.aliases):
                self.individuals.setdefault(normalize_term(form), ind)
        for c in o.classes:
            for form in (c.name, c.id):
                self.classes.setdefault(normalize_term(form), c.id)

    def lookup(self, term: str) -> LookupResult:
        key = normalize_term(term)
        ind = self.individuals.get(key)
        cls = self.classes.get(key)
        if ind is not None:
            warning = None
            if cls is not None:
                warning = f"{term!r} also names class {cls!r}; resolved to individual {ind.id!r}"
            return IndividualHit(ind.id, ind.class_id, warning)
        if cls is not None:
            return ClassHit(cls)
        return Miss(term)


def lookup(o: Ontology, term: str) -> LookupResult:
    return o.term_index.lookup(term)
