"""WHERE-clause mining for generated SELECT statements.

The text-to-SQL step produces statements that exist only to be parsed,
never executed. The grammar is deliberately minimal: ``SELECT * FROM t
[JOIN t2 ON a = b]* [WHERE p AND p ...]``, conjunctive predicates only
(Beacon filters are conjunctive, so OR is a parse error).

Every WHERE predicate is classified into exactly one of: variant
parameters (chr/start/end/assembly/geneId columns), filters (OntologyTerm
label/id predicates and LIKE patterns), or residue. Residue is surfaced to
the user at the confirmation checkpoint rather than silently dropped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..types import BeaconQueryError, Filter, Scope, VariantParams


class SqlParseError(Exception):
    pass


@dataclass(frozen=True)
class SqlExtraction:
    sql: str
    variant: Optional[VariantParams] = None
    filters: tuple[Filter, ...] = ()
    residue: tuple[str, ...] = ()


# Schema entity tables and the query scope they correspond to.
_TABLE_SCOPES = {
    "individuals": Scope.INDIVIDUALS,
    "biosamples": Scope.BIOSAMPLES,
    "genomicvariations": Scope.G_VARIANTS,
    "runs": Scope.RUNS,
    "analyses": Scope.ANALYSES,
    "datasets": Scope.DATASETS,
    "cohorts": Scope.COHORTS,
}
_ONTOLOGY_TABLE = "ontologyterm"

_KEYWORDS = {"select", "from", "where", "join", "on", "and", "or", "like",
             "as", "inner", "left", "right", "outer"}

_TOKEN_RE = re.compile(r"""
    \s*(?:
        (?P<string>'(?:[^']|'')*')
      | (?P<number>\d+(?:\.\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op><=|>=|!=|<>|[=<>*.,;()])
    )
""", re.VERBOSE)


def _tokenize(sql: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(sql):
        match = _TOKEN_RE.match(sql, pos)
        if not match or match.end() == pos:
            rest = sql[pos:].strip()
            if not rest:
                break
            raise SqlParseError(f"cannot tokenize near {rest[:25]!r}")
        pos = match.end()
        if match.group("string") is not None:
            tokens.append(("string", match.group("string")[1:-1].replace("''", "'")))
        elif match.group("number") is not None:
            tokens.append(("number", match.group("number")))
        elif match.group("name") is not None:
            name = match.group("name")
            kind = "keyword" if name.lower() in _KEYWORDS else "name"
            tokens.append((kind, name))
        else:
            tokens.append(("op", match.group("op")))
    return tokens


@dataclass
class _Predicate:
    path: tuple[str, ...]
    op: str
    literal: str
    literal_kind: str  # string | number

    def render(self) -> str:
        literal = f"'{self.literal}'" if self.literal_kind == "string" else self.literal
        return f"{'.'.join(self.path)} {self.op} {literal}"


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[str, str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("eof", "")

    def next(self) -> tuple[str, str]:
        token = self.peek()
        self.pos += 1
        return token

    def expect_keyword(self, word: str) -> None:
        kind, value = self.next()
        if kind != "keyword" or value.lower() != word:
            raise SqlParseError(f"expected {word.upper()}, got {value!r}")

    def expect_op(self, symbol: str) -> None:
        kind, value = self.next()
        if kind != "op" or value != symbol:
            raise SqlParseError(f"expected {symbol!r}, got {value!r}")

    def accept_keyword(self, *words: str) -> Optional[str]:
        kind, value = self.peek()
        if kind == "keyword" and value.lower() in words:
            self.pos += 1
            return value.lower()
        return None

    def parse_path(self) -> tuple[str, ...]:
        kind, value = self.next()
        if kind != "name":
            raise SqlParseError(f"expected an identifier, got {value!r}")
        path = [value]
        while self.peek() == ("op", "."):
            self.next()
            kind, value = self.next()
            if kind != "name":
                raise SqlParseError(f"expected an identifier after '.', got {value!r}")
            path.append(value)
        return tuple(path)

    def parse_table_ref(self) -> tuple[str, str]:
        """Returns (table name, alias); the alias defaults to the name."""
        kind, table = self.next()
        if kind != "name":
            raise SqlParseError(f"expected a table name, got {table!r}")
        alias = table
        if self.accept_keyword("as"):
            kind, alias = self.next()
            if kind != "name":
                raise SqlParseError("expected an alias after AS")
        elif self.peek()[0] == "name":
            alias = self.next()[1]
        return table, alias


def _scope_of_table(table: str) -> Optional[Scope]:
    return _TABLE_SCOPES.get(table.lower())


def _parse_statement(sql: str):
    parser = _Parser(_tokenize(sql))
    parser.expect_keyword("select")
    parser.expect_op("*")
    parser.expect_keyword("from")
    tables: dict[str, str] = {}          # alias -> table name
    join_order: list[str] = []           # aliases in FROM/JOIN order
    ontology_links: dict[str, tuple[str, ...]] = {}  # ontology alias -> other side path
    table, alias = parser.parse_table_ref()
    tables[alias] = table
    join_order.append(alias)

    while True:
        word = parser.accept_keyword("join", "inner", "left", "right", "outer")
        if word is None:
            break
        while word != "join":
            word = parser.accept_keyword("join", "inner", "left", "right", "outer")
            if word is None:
                raise SqlParseError("expected JOIN")
        table, alias = parser.parse_table_ref()
        tables[alias] = table
        join_order.append(alias)
        parser.expect_keyword("on")
        left = parser.parse_path()
        parser.expect_op("=")
        right = parser.parse_path()
        for side, other in ((left, right), (right, left)):
            root = side[0]
            if tables.get(root, "").lower() == _ONTOLOGY_TABLE:
                ontology_links[root] = other

    predicates: list[_Predicate] = []
    if parser.accept_keyword("where"):
        while True:
            path = parser.parse_path()
            kind, op = parser.peek()
            if kind == "keyword" and op.lower() == "like":
                parser.next()
                op = "LIKE"
            elif kind == "op" and op in ("=", ">=", "<=", ">", "<", "!=", "<>"):
                parser.next()
            else:
                raise SqlParseError(f"expected a comparison operator, got {op!r}")
            lit_kind, literal = parser.next()
            if lit_kind not in ("string", "number"):
                raise SqlParseError(f"expected a literal, got {literal!r}")
            predicates.append(_Predicate(path, op, literal, lit_kind))
            if parser.accept_keyword("and"):
                continue
            if parser.accept_keyword("or"):
                raise SqlParseError("OR is not supported; Beacon filters are conjunctive")
            break

    if parser.peek() == ("op", ";"):
        parser.next()
    if parser.peek()[0] != "eof":
        raise SqlParseError(f"trailing input at {parser.peek()[1]!r}")
    return tables, join_order, ontology_links, predicates


_VARIANT_COLUMNS = {
    "chr": "chrom", "chromosome": "chrom", "referencename": "chrom",
    "start": "start", "end": "end",
    "assembly": "assembly", "assemblyid": "assembly", "assembly_id": "assembly",
    "geneid": "gene", "gene_id": "gene", "geneids": "gene",
}


def _strip_pattern(literal: str) -> str:
    return literal.strip("%").strip()


def parse_sql_fields(sql: str, current_scope: Scope = Scope.G_VARIANTS) -> SqlExtraction:
    """Classify every WHERE predicate into variant params, filters or residue.

    Ontology predicates take the scope of the entity table their
    OntologyTerm join attaches to (falling back to the query scope); plain
    LIKE patterns take the query scope.
    """
    tables, _join_order, ontology_links, predicates = _parse_statement(sql)

    def alias_scope(alias: str) -> Optional[Scope]:
        return _scope_of_table(tables.get(alias, ""))

    def ontology_scope(alias: str) -> Scope:
        link = ontology_links.get(alias)
        if link:
            linked = alias_scope(link[0])
            if linked is not None:
                return linked
        return current_scope

    bounds: dict[str, dict[str, int]] = {"start": {}, "end": {}}
    chrom: Optional[str] = None
    assembly: Optional[str] = None
    gene: Optional[str] = None
    filters: list[Filter] = []
    residue: list[str] = []

    for pred in predicates:
        root = pred.path[0]
        base = pred.path[-1].lower()
        owner_is_ontology = (tables.get(root, "").lower() == _ONTOLOGY_TABLE
                             or root.lower() == _ONTOLOGY_TABLE)

        if owner_is_ontology and base in ("label", "id"):
            scope = ontology_scope(root)
            if base == "id" and pred.op in ("=", "LIKE"):
                filters.append(Filter(scope=scope, id=pred.literal,
                                      term=_strip_pattern(pred.literal),
                                      filter_type="ontology"))
            elif pred.op in ("=", "LIKE"):
                value = pred.literal if "%" in pred.literal else f"%{pred.literal}%"
                filters.append(Filter(scope=scope, value=value,
                                      term=_strip_pattern(pred.literal),
                                      filter_type="ontology"))
            else:
                residue.append(pred.render())
            continue

        column = _VARIANT_COLUMNS.get(base)
        if column == "chrom" and pred.op == "=" and chrom is None:
            chrom = pred.literal
            continue
        if column in ("start", "end"):
            slot = {"=": "eq", ">=": "ge", "<=": "le"}.get(pred.op)
            try:
                position = int(float(pred.literal))
            except ValueError:
                slot = None
            if slot is not None and slot not in bounds[column]:
                bounds[column][slot] = position
                continue
            residue.append(pred.render())
            continue
        if column == "assembly" and pred.op == "=" and assembly is None:
            assembly = pred.literal
            continue
        if column == "gene" and pred.op in ("=", "LIKE") and gene is None:
            gene = pred.literal
            continue

        if pred.op == "LIKE":
            filters.append(Filter(scope=current_scope, value=pred.literal,
                                  term=_strip_pattern(pred.literal),
                                  filter_type="alphanumeric"))
            continue
        residue.append(pred.render())

    def interval(column: str) -> tuple[int, ...]:
        b = bounds[column]
        if "eq" in b:
            return (b["eq"],)
        if "ge" in b and "le" in b:
            return (b["ge"], b["le"])
        if "ge" in b:
            return (b["ge"],)
        if "le" in b:
            return (b["le"],)
        return ()

    variant: Optional[VariantParams] = None
    if chrom is not None or assembly is not None or gene is not None \
            or bounds["start"] or bounds["end"]:
        try:
            variant = VariantParams(
                assembly_id=assembly,
                reference_name=chrom,
                start=interval("start"),
                end=interval("end"),
                gene_id=gene,
            )
        except BeaconQueryError as exc:
            raise SqlParseError(f"inconsistent variant fields: {exc}") from exc

    return SqlExtraction(sql=sql, variant=variant, filters=tuple(filters),
                         residue=tuple(residue))
