"""ONTOQA-style schema and knowledge-base metrics with a weighted total score."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from decimal import ROUND_DOWN, Decimal

from .errors import SchemaError
from .ontology import Ontology, hierarchy_stats
from .plon import ontology_hash

VARIANTS = ("paper", "ontoqa-standard")

# Display order and labels follow the published ONTOQA comparison table.
METRIC_LABELS = {
    "class_count": "Class count",
    "relationship_count": "Relationship count",
    "relationship_richness": "Relationship richness",
    "inheritance_richness": "Inheritance richness",
    "average_class_height": "Average Class Height",
    "attribute_richness": "Attribute richness",
    "tree_balance": "Tree balance",
    "individual_count": "Individual count",
    "class_richness": "Class Richness",
    "class_instance_coverage": "Class Instance Coverage",
    "average_population": "Average population",
}

# No agreed definition exists for these two; values are ours and never scored.
NONCONFORMANT = ("tree_balance", "class_instance_coverage")


@dataclass(frozen=True)
class WeightTable:
    class_count: float = 0.10
    relationship_count: float = 0.07
    relationship_richness: float = 0.08
    inheritance_richness: float = 0.08
    average_class_height: float = 0.06
    attribute_richness: float = 0.03
    individual_count: float = 0.08
    class_richness: float = 0.03

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"weight {f.name} must be positive")

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in fields(self)]


DEFAULT_WEIGHTS = WeightTable()


@dataclass(frozen=True)
class MetricsReport:
    class_count: float = 0
    relationship_count: float = 0
    relationship_richness: float = 0.0
    inheritance_richness: float = 0.0
    average_class_height: float = 0.0
    attribute_richness: float = 0.0
    tree_balance: float = 0.0
    individual_count: float = 0
    class_richness: float = 0.0
    class_instance_coverage: float = 0.0
    average_population: float = 0.0
    total_score: float = 0.0
    variant: str = "paper"
    ontology_name: str = ""
    ontology_version: str = ""
    ontology_hash: str = ""

    @classmethod
    def from_values(cls, values, weights: WeightTable = DEFAULT_WEIGHTS, **meta) -> "MetricsReport":
        """Report from a metric vector in table order (nine or eleven values)."""
        values = list(values)
        names = [n for n in METRIC_LABELS if len(values) == 11 or n not in NONCONFORMANT]
        if len(values) != len(names):
            raise ValueError(f"expected 9 or 11 metric values, got {len(values)}")
        report = cls(**dict(zip(names, values)), **meta)
        return cls(**{**asdict(report), "total_score": weighted_score(report, weights)})

    def metric_values(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_LABELS}

    def to_json(self) -> dict:
        return {
            "format": "platrec/metrics@1",
            "variant": self.variant,
            "ontology": {"name": self.ontology_name, "version": self.ontology_version, "hash": self.ontology_hash},
            "metrics": self.metric_values(),
            "total_score": self.total_score,
            "nonconformant": list(NONCONFORMANT),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MetricsReport":
        if doc.get("format") != "platrec/metrics@1":
            raise SchemaError("format", "expected 'platrec/metrics@1'")
        try:
            onto = doc.get("ontology", {})
            return cls(
                **doc["metrics"],
                total_score=doc["total_score"],
                variant=doc.get("variant", "paper"),
                ontology_name=onto.get("name", ""),
                ontology_version=onto.get("version", ""),
                ontology_hash=onto.get("hash", ""),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise SchemaError("", f"malformed metrics report: {exc}") from None


def truncate2(value: float) -> Decimal:
    """Truncate toward zero at two decimals (display only)."""
    # round off binary noise first so 0.29 does not display as 0.28
    return Decimal(repr(round(value, 9))).quantize(Decimal("0.01"), rounding=ROUND_DOWN)


def display(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    text = str(truncate2(value))
    return text.rstrip("0").rstrip(".") if "." in text else text


def weighted_score(m: MetricsReport, w: WeightTable = DEFAULT_WEIGHTS) -> float:
    return sum(weight * getattr(m, name) for name, weight in w.items())


def compute_metrics(o: Ontology, variant: str = "paper", weights: WeightTable = DEFAULT_WEIGHTS) -> MetricsReport:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    stats = hierarchy_stats(o)  # validates
    n_classes = len(o.classes)
    n_rel = len(o.relation_kinds)
    links = stats.subclass_link_count
    n_ind = len(o.individuals)
    populated = {i.class_id for i in o.individuals}

    rr = 100.0 * n_rel / (links + n_rel) if links + n_rel else 0.0
    if variant == "paper":
        ir = links / stats.parent_class_count if stats.parent_class_count else 0.0
    else:
        ir = links / n_classes if n_classes else 0.0
    height = stats.depth_sum / n_classes if n_classes else 0.0
    slots = 0  # the model has no slot declarations
    attr = slots / n_classes if n_classes else 0.0
    leaf_depths = [d for cid, d in stats.depth.items() if not o.children.get(cid)]
    balance = max(leaf_depths) / min(leaf_depths) if leaf_depths else 0.0
    cr = 100.0 * len(populated) / n_classes if n_classes else 0.0
    coverage = n_ind / len(populated) if populated else 0.0
    population = n_ind / n_classes if n_classes else 0.0

    report = MetricsReport(
        class_count=n_classes,
        relationship_count=n_rel,
        relationship_richness=rr,
        inheritance_richness=ir,
        average_class_height=height,
        attribute_richness=attr,
        tree_balance=balance,
        individual_count=n_ind,
        class_richness=cr,
        class_instance_coverage=coverage,
        average_population=population,
        variant=variant,
        ontology_name=o.name,
        ontology_version=o.version,
        ontology_hash=ontology_hash(o),
    )
    return MetricsReport(**{**asdict(report), "total_score": weighted_score(report, weights)})


@dataclass(frozen=True)
class ComparisonReport:
    a: MetricsReport
    b: MetricsReport
    deltas: dict  # metric -> a - b
    score_delta: float
    label_a: str = "a"
    label_b: str = "b"

    def to_json(self) -> dict:
        return {
            "format": "platrec/comparison@1",
            "labels": [self.label_a, self.label_b],
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "deltas": self.deltas,
            "score_delta": self.score_delta,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ComparisonReport":
        if doc.get("format") != "platrec/comparison@1":
            raise SchemaError("format", "expected 'platrec/comparison@1'")
        try:
            la, lb = doc["labels"]
            return cls(
                MetricsReport.from_json(doc["a"]), MetricsReport.from_json(doc["b"]),
                {k: float(v) for k, v in doc["deltas"].items()}, float(doc["score_delta"]), la, lb,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError("", f"malformed comparison report: {exc}") from None


def compare_ontologies(
    a: Ontology,
    b: Ontology,
    w: WeightTable = DEFAULT_WEIGHTS,
    variant: str = "paper",
    labels: tuple[str, str] | None = None,
) -> ComparisonReport:
    ma = compute_metrics(a, variant, w)
    mb = compute_metrics(b, variant, w)
    deltas = {name: getattr(ma, name) - getattr(mb, name) for name in METRIC_LABELS}
    la, lb = labels or (a.name or "a", b.name or "b")
    return ComparisonReport(ma, mb, deltas, ma.total_score - mb.total_score, la, lb)


def metrics_table(reports, labels, weights: WeightTable = DEFAULT_WEIGHTS) -> str:
    """Aligned text table: metric | weight | one column per report; last line is the total."""
    weight_of = dict(weights.items())
    rows = [["Metric", "Weight", *labels]]
    for name, label in METRIC_LABELS.items():
        w = weight_of.get(name)
        rows.append([label, f"{w:.2f}" if w is not None else "*", *(display(getattr(r, name)) for r in reports)])
    rows.append(["Total score", "", *(str(truncate2(r.total_score)) for r in reports)])
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    out = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(widths[i + 1]) for i, cell in enumerate(row[1:-1])]
        cells.append(row[-1])
        out.append(" | ".join(cells).rstrip())
    return "\n".join(out) + "\n"
