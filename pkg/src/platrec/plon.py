"""PLON: a small line-oriented text format for ontologies, plus JSON interchange.

Grammar (EBNF)::

    document  = header , [ meta ] , { statement } ;
    header    = "platont" , INT ;
    meta      = "ontology" , STRING , [ "release" , STRING ] ;
    statement = classdecl | reldecl | inddecl ;
    classdecl = "class" , IDENT , [ "extends" , IDENT , { "," , IDENT } ]
                , [ "label" , STRING ] , [ "doc" , STRING ] ;
    reldecl   = "relation" , IDENT , "family" , FAMILY , "subkind" , IDENT
                , [ "undirected" ] ;
    inddecl   = "individual" , IDENT , "of" , IDENT
                , [ "alias" , STRING , { "," , STRING } ] ;

Keywords are contextual, so any identifier may be used as a declaration id.
STRING uses JSON string syntax.  ``#`` starts a comment running to end of line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Union

import jsonschema

from ._canon import content_hash, pretty_dumps
from .errors import OntologyValidationError, PlonSyntaxError, SchemaError
from .ontology import (
    FAMILIES,
    Individual,
    Ontology,
    OntologyClass,
    RelationKind,
    ensure_valid,
    validate_ontology,
)

FORMAT_TAG = "platont"
FORMAT_VERSION = 1

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<comment>\#[^\n]*)
  | (?P<word>[^\W\d_][\w-]*)
  | (?P<int>\d+)
  | (?P<string>"(?:[^"\\\x00-\x1f]|\\(?:["\\/bfnrt]|u[0-9a-fA-F]{4}))*")
  | (?P<comma>,)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # word | int | string | comma | eof
    text: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def tokenize(text: str) -> Iterator[Token]:
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ch = text[pos]
            what = "unterminated or invalid string" if ch == '"' else f"unexpected character {ch!r}"
            raise PlonSyntaxError(what, line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            yield Token(kind, m.group(), line, pos - line_start + 1)
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    yield Token("eof", "", line, pos - line_start + 1)


class _Parser:
    STATEMENTS = ("class", "relation", "individual")

    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def fail(self, expected, message: str | None = None):
        tok = self.tok
        raise PlonSyntaxError(message or f"unexpected {tok.describe()}", tok.line, tok.column, expected)

    def at_word(self, word: str) -> bool:
        return self.tok.kind == "word" and self.tok.text == word

    def keyword(self, word: str) -> Token:
        if not self.at_word(word):
            self.fail([repr(word)])
        return self.advance()

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def ident(self) -> str:
        if self.tok.kind != "word":
            self.fail(["identifier"])
        return self.advance().text

    def string(self) -> str:
        if self.tok.kind != "string":
            self.fail(["string"])
        return json.loads(self.advance().text)

    def parse(self) -> Ontology:
        self.keyword(FORMAT_TAG)
        if self.tok.kind != "int":
            self.fail(["format version"])
        version_tok = self.advance()
        if int(version_tok.text) != FORMAT_VERSION:
            raise PlonSyntaxError(
                f"unsupported format version {version_tok.text}",
                version_tok.line,
                version_tok.column,
                [str(FORMAT_VERSION)],
            )
        name = release = ""
        if self.at_word("ontology"):
            self.advance()
            name = self.string()
            if self.at_word("release"):
                self.advance()
                release = self.string()

        classes, relations, individuals = [], [], []
        while self.tok.kind != "eof":
            if self.at_word("class"):
                classes.append(self.class_decl())
            elif self.at_word("relation"):
                relations.append(self.relation_decl())
            elif self.at_word("individual"):
                individuals.append(self.individual_decl())
            else:
                self.fail([*(repr(s) for s in self.STATEMENTS), "end of input"])
        return Ontology(name, release, tuple(classes), tuple(relations), tuple(individuals))

    def class_decl(self) -> OntologyClass:
        self.keyword("class")
        ident = self.ident()
        parents = []
        if self.at_word("extends"):
            self.advance()
            parents.append(self.ident())
            while self.tok.kind == "comma":
                self.advance()
                parents.append(self.ident())
        label = doc = None
        if self.at_word("label"):
            self.advance()
            label = self.string()
        if self.at_word("doc"):
            self.advance()
            doc = self.string()
        return OntologyClass(ident, label, tuple(parents), doc or "")

    def relation_decl(self) -> RelationKind:
        self.keyword("relation")
        ident = self.ident()
        self.keyword("family")
        if not (self.tok.kind == "word" and self.tok.text in FAMILIES):
            self.fail([repr(f) for f in FAMILIES])
        family = self.advance().text
        self.keyword("subkind")
        subkind = self.ident()
        directed = True
        if self.at_word("undirected"):
            self.advance()
            directed = False
        return RelationKind(ident, family, subkind, directed)

    def individual_decl(self) -> Individual:
        self.keyword("individual")
        ident = self.ident()
        self.keyword("of")
        class_id = self.ident()
        aliases = []
        if self.at_word("alias"):
            self.advance()
            aliases.append(self.string())
            while self.tok.kind == "comma":
                self.advance()
                aliases.append(self.string())
        return Individual(ident, class_id, tuple(aliases))


def parse_plon_unchecked(text: Union[str, bytes]) -> Ontology:
    """Parse without semantic validation (syntax errors still raise)."""
    if isinstance(text, (bytes, bytearray)):
        if text.startswith(b"\xef\xbb\xbf"):
            raise PlonSyntaxError("byte order mark is not allowed", 1, 1)
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text)[: exc.start].decode("utf-8")
            line = prefix.count("\n") + 1
            column = len(prefix) - (prefix.rfind("\n") + 1) + 1
            raise PlonSyntaxError("invalid UTF-8", line, column) from None
    if text.startswith("﻿"):
        raise PlonSyntaxError("byte order mark is not allowed", 1, 1)
    return _Parser(text).parse()


def parse_plon(text: Union[str, bytes]) -> Ontology:
    """Parse a PLON document into a validated :class:`Ontology`."""
    return ensure_valid(parse_plon_unchecked(text))


def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def serialize_plon(o: Ontology) -> str:
    """Canonical PLON text: classes, relations, then individuals, each sorted by id."""
    ensure_valid(o)
    lines = [f"{FORMAT_TAG} {FORMAT_VERSION}"]
    if o.name or o.version:
        meta = f"ontology {_q(o.name)}"
        if o.version:
            meta += f" release {_q(o.version)}"
        lines.append(meta)
    for c in o.classes:
        line = f"class {c.id}"
        if c.parents:
            line += " extends " + ", ".join(c.parents)
        if c.name != c.id:
            line += f" label {_q(c.name)}"
        if c.description:
            line += f" doc {_q(c.description)}"
        lines.append(line)
    for r in o.relation_kinds:
        line = f"relation {r.id} family {r.family} subkind {r.subkind}"
        if not r.directed:
            line += " undirected"
        lines.append(line)
    for i in o.individuals:
        line = f"individual {i.id} of {i.class_id}"
        if i.aliases:
            line += " alias " + ", ".join(_q(a) for a in i.aliases)
        lines.append(line)
    return "\n".join(lines) + "\n"


def load_plon(path) -> Ontology:
    try:
        return parse_plon(Path(path).read_bytes())
    except PlonSyntaxError as exc:
        exc.source = str(path)
        raise


# ---------------------------------------------------------------------- JSON

_ID = {"type": "string", "minLength": 1}
ONTOLOGY_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["name", "version", "classes", "relation_kinds", "individuals"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "version": {"type": "string"},
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "name", "parents", "description"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "name": {"type": "string"},
                    "parents": {"type": "array", "items": _ID},
                    "description": {"type": "string"},
                },
            },
        },
        "relation_kinds": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "family", "subkind", "directed"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "family": {"enum": list(FAMILIES)},
                    "subkind": _ID,
                    "directed": {"type": "boolean"},
                },
            },
        },
        "individuals": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "class_id", "aliases"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "class_id": _ID,
                    "aliases": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(ONTOLOGY_SCHEMA)
_COLLECTION = {"class": "classes", "relation_kind": "relation_kinds", "individual": "individuals"}


def json_path(parts) -> str:
    out = ""
    for part in parts:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out


def check_schema(doc: Any, validator: jsonschema.protocols.Validator) -> None:
    """Raise :class:`SchemaError` for the first (deepest-path-first, stable) violation."""
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        raise SchemaError(json_path(err.absolute_path), err.message)


def ontology_to_json(o: Ontology) -> dict:
    return {
        "name": o.name,
        "version": o.version,
        "classes": [
            {"id": c.id, "name": c.name, "parents": list(c.parents), "description": c.description} for c in o.classes
        ],
        "relation_kinds": [
            {"id": r.id, "family": r.family, "subkind": r.subkind, "directed": r.directed} for r in o.relation_kinds
        ],
        "individuals": [{"id": i.id, "class_id": i.class_id, "aliases": list(i.aliases)} for i in o.individuals],
    }


def ontology_from_json(doc: Any) -> Ontology:
    """Build a validated ontology; semantic violations carry JSON field paths."""
    check_schema(doc, _VALIDATOR)
    o = Ontology(
        doc["name"],
        doc["version"],
        tuple(OntologyClass(c["id"], c["name"], tuple(c["parents"]), c["description"]) for c in doc["classes"]),
        tuple(
            RelationKind(r["id"], r["family"], r["subkind"], r["directed"]) for r in doc["relation_kinds"]
        ),
        tuple(Individual(i["id"], i["class_id"], tuple(i["aliases"])) for i in doc["individuals"]),
    )
    report = validate_ontology(o)
    if not report.ok:
        paths = []
        for v in report.violations:
            collection = _COLLECTION[v.kind]
            ids = v.members or (v.subject,)
            idx = next((k for k, item in enumerate(doc[collection]) if item["id"] in ids), None)
            paths.append(f"{collection}[{idx}].{v.field}" if idx is not None else collection)
        err = OntologyValidationError(
            report.violations,
            "\n".join(f"{p}: {v}" for p, v in zip(paths, report.violations)),
        )
        err.paths = tuple(paths)
        raise err
    return o


def convert_json(value: Union[Ontology, dict, str]) -> Union[dict, Ontology]:
    """Ontology -> JSON document, or JSON document (dict or text) -> Ontology."""
    if isinstance(value, Ontology):
        return ontology_to_json(ensure_valid(value))
    if isinstance(value, (str, bytes)):
        try:
            value = json.loads(value)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"invalid JSON: {exc}") from None
    return ontology_from_json(value)


def ontology_hash(o: Ontology) -> str:
    return content_hash(ontology_to_json(o))


def dumps_ontology_json(o: Ontology) -> str:
    return pretty_dumps(convert_json(o))


def load_ontology(path) -> Ontology:
    """Load ``.plon`` or ``.json`` by file extension."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return convert_json(path.read_bytes().decode("utf-8"))
    return load_plon(path)
