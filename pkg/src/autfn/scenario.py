"""Scenario DSL: lexer, syntax tree, parser, and pretty-printer.

A scenario is a flat sequence of statements: declarations (rank or generator
layout, constants, words, automorphisms, graphs, graph automorphisms, bases)
followed by assertions and finite-group checks.  Parsing is LL(1) with
longest-match lexing; every diagnostic carries line/column and the expected
token set.  Name resolution and rank bounds are checked at parse time, so a
parsed scenario is internally consistent and evaluation can only fail on
mathematical grounds (for example a non-basis change of coordinates).

Word literals use the shared syntax (``x3``, ``x3^-1``, ``x3^2``, ``e``);
generator layouts let indexed families like ``x(2,1)`` stand for flattened
generator positions, earlier dimensions varying fastest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

KEYWORDS = {
    "scenario", "rank", "const", "gens", "word", "aut", "graph", "gaut",
    "basis", "assert", "check", "note", "on", "at", "delta", "induced",
    "basepoint", "id", "e", "order", "outorder", "unbounded", "det", "matrix",
    "mod", "level", "torelli", "inner", "witness", "not", "fixes", "maps",
    "to", "elementary", "vertex", "edge", "loop", "rotation", "pairswap",
    "rose", "hairy", "ring", "closedchain", "openchain",
}

# Named automorphism constructors; also unavailable as user identifiers.
AUT_CONSTRUCTORS = {"L", "R", "C", "P", "I"}

PUNCT = (
    "->", "==", "!=", "..", "{", "}", "(", ")", "[", "]",
    "=", ",", ";", "*", "^", "~", "-",
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        loc = f"line {line}, column {col}"
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{loc}: {message}{hint}")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT INT STRING PUNCT EOF
    value: str
    line: int
    col: int


# A hyphen stays inside an identifier only when flanked by word characters,
# so "a -> b" and "x^-1" lex unchanged while "rose-five" is one name.
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*")
_INT_RE = re.compile(r"-?\d+")
_ANCHOR_RE = re.compile(r"#\s*anchor:\s*(.+?)\s*$")


def lex(text: str) -> tuple[list[Token], list[str]]:
    """Tokenize; returns tokens plus any ``# anchor:`` comment payloads."""
    tokens: list[Token] = []
    anchors: list[str] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            j = text.find("\n", i)
            j = n if j < 0 else j
            m = _ANCHOR_RE.match(text[i:j])
            if m:
                anchors.append(m.group(1))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", line, col)
            tokens.append(Token("STRING", text[i + 1 : j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch == "-" and i + 1 < n and text[i + 1].isdigit():
            m2 = _INT_RE.match(text, i)
            assert m2 is not None
            tokens.append(Token("INT", m2.group(), line, col))
            col += m2.end() - i
            i = m2.end()
            continue
        if ch.isdigit():
            m2 = _INT_RE.match(text, i)
            assert m2 is not None
            tokens.append(Token("INT", m2.group(), line, col))
            col += m2.end() - i
            i = m2.end()
            continue
        if ch.isalpha() or ch == "_":
            m2 = _IDENT_RE.match(text, i)
            assert m2 is not None
            tokens.append(Token("IDENT", m2.group(), line, col))
            col += m2.end() - i
            i = m2.end()
            continue
        for p in PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("PUNCT", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens, anchors


# --- syntax tree -------------------------------------------------------------


@dataclass(frozen=True)
class GenRef:
    """A generator reference: surface form plus the resolved 1-based index."""

    name: str
    coords: Optional[tuple[int, ...]]
    index: int

    def pretty(self) -> str:
        if self.coords is None:
            return self.name
        return f"{self.name}({', '.join(str(c) for c in self.coords)})"


@dataclass(frozen=True)
class WordLit:
    atoms: tuple[tuple[GenRef, int], ...]  # (generator, exponent != 0)

    def pretty(self) -> str:
        if not self.atoms:
            return "e"
        parts = []
        for ref, exp in self.atoms:
            parts.append(ref.pretty() if exp == 1 else f"{ref.pretty()}^{exp}")
        return " ".join(parts)


@dataclass(frozen=True)
class PathLit:
    atoms: tuple[tuple[str, int], ...]  # (edge id, exponent != 0)

    def pretty(self) -> str:
        if not self.atoms:
            return "e"
        return " ".join(e if k == 1 else f"{e}^{k}" for e, k in self.atoms)


@dataclass(frozen=True)
class AutIdent:
    def pretty(self) -> str:
        return "id"


@dataclass(frozen=True)
class AutName:
    name: str

    def pretty(self) -> str:
        return self.name


@dataclass(frozen=True)
class AutNamedGen:
    kind: str  # L R C P I
    args: tuple[GenRef, ...]

    def pretty(self) -> str:
        return f"{self.kind}({', '.join(a.pretty() for a in self.args)})"


@dataclass(frozen=True)
class AutInduced:
    gaut: str
    mode: str  # "at" | "delta"
    vertex: Optional[str]
    delta: Optional[PathLit]
    basis: Optional[str]

    def pretty(self) -> str:
        out = f"induced {self.gaut}"
        out += f" at {self.vertex}" if self.mode == "at" else f" delta {self.delta.pretty()}"
        if self.basis:
            out += f" basis {self.basis}"
        return out


@dataclass(frozen=True)
class AutPow:
    base: "AutExpr"
    exp: int

    def pretty(self) -> str:
        base = self.base.pretty()
        if isinstance(self.base, (AutProd, AutInduced)):
            base = f"({base})"
        return f"{base}^{self.exp}"


@dataclass(frozen=True)
class AutProd:
    factors: tuple["AutExpr", ...]

    def pretty(self) -> str:
        parts = []
        for f in self.factors:
            p = f.pretty()
            if isinstance(f, (AutProd, AutInduced)):
                p = f"({p})"
            parts.append(p)
        return " * ".join(parts)


AutExpr = Union[AutIdent, AutName, AutNamedGen, AutInduced, AutPow, AutProd]


@dataclass(frozen=True)
class MatLit:
    """Matrix expression: identity (optionally negated), an elementary-matrix
    power, or a row-major literal with ';' between rows."""

    form: str  # "id" | "negid" | "elementary" | "rows"
    k: int = 0
    r: int = 0
    power: int = 1
    rows: tuple[tuple[int, ...], ...] = ()

    def pretty(self) -> str:
        if self.form == "id":
            return "id"
        if self.form == "negid":
            return "-id"
        if self.form == "elementary":
            base = f"elementary({self.k}, {self.r})"
            return base if self.power == 1 else f"{base}^{self.power}"
        return "[" + "; ".join(" ".join(str(a) for a in row) for row in self.rows) + "]"


# Statements


@dataclass(frozen=True)
class RankDecl:
    rank: int

    def pretty(self) -> str:
        return f"rank {self.rank}"


@dataclass(frozen=True)
class ConstDecl:
    name: str
    value: int

    def pretty(self) -> str:
        return f"const {self.name} = {self.value}"


@dataclass(frozen=True)
class LayoutItem:
    name: str
    dims: Optional[tuple[tuple[str, int, int], ...]]  # (var, lo, hi)

    def pretty(self) -> str:
        if self.dims is None:
            return self.name
        inner = ", ".join(f"{v}={lo}..{hi}" for v, lo, hi in self.dims)
        return f"{self.name}[{inner}]"


@dataclass(frozen=True)
class GensDecl:
    items: tuple[LayoutItem, ...]

    def pretty(self) -> str:
        return "gens " + " ".join(i.pretty() for i in self.items)


@dataclass(frozen=True)
class WordDecl:
    name: str
    value: WordLit

    def pretty(self) -> str:
        return f"word {self.name} = {self.value.pretty()}"


@dataclass(frozen=True)
class AutDeclExpr:
    name: str
    expr: AutExpr

    def pretty(self) -> str:
        return f"aut {self.name} = {self.expr.pretty()}"


@dataclass(frozen=True)
class AutDeclImages:
    name: str
    entries: tuple[tuple[GenRef, WordLit], ...]

    def pretty(self) -> str:
        body = "; ".join(f"{g.pretty()} -> {w.pretty()}" for g, w in self.entries)
        return f"aut {self.name} {{ {body} }}"


@dataclass(frozen=True)
class GraphCtorDecl:
    name: str
    ctor: str
    args: tuple[int, ...]

    def pretty(self) -> str:
        return f"graph {self.name} = {self.ctor}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class GraphBlockDecl:
    name: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # includes loops (src == dst)

    def pretty(self) -> str:
        parts = [f"vertex {' '.join(self.vertices)};"]
        for e, s, d in self.edges:
            parts.append(f"loop {e} {s};" if s == d else f"edge {e} {s} {d};")
        return f"graph {self.name} {{ " + " ".join(parts) + " }"


@dataclass(frozen=True)
class GautBuiltinDecl:
    name: str
    kind: str  # rotation | pairswap
    graph: str

    def pretty(self) -> str:
        return f"gaut {self.name} = {self.kind} on {self.graph}"


@dataclass(frozen=True)
class GautBlockDecl:
    name: str
    graph: str
    entries: tuple[tuple[str, str, bool], ...]  # (edge, target, reversed)

    def pretty(self) -> str:
        body = "; ".join(
            f"{e} -> {'~' if rev else ''}{t}" for e, t, rev in self.entries
        )
        return f"gaut {self.name} on {self.graph} {{ {body} }}"


@dataclass(frozen=True)
class BasisDecl:
    name: str
    graph: str
    basepoint: str
    entries: tuple[tuple[GenRef, PathLit], ...]

    def pretty(self) -> str:
        body = "; ".join(f"{g.pretty()} = {p.pretty()}" for g, p in self.entries)
        return f"basis {self.name} on {self.graph} at {self.basepoint} {{ {body} }}"


@dataclass(frozen=True)
class Assertion:
    kind: str
    # exact/unequal/outer: lhs, rhs aut exprs
    # order/outorder: lhs, number (None = unbounded), negated
    # det: lhs, number
    # matrix: lhs, matlit, modulus (0 = none), negated
    # level: lhs, number
    # torelli / inner / notinner: lhs (+ witness word for inner)
    # fixes: lhs, word ;  maps: lhs, word, word2
    lhs: AutExpr
    rhs: Optional[AutExpr] = None
    number: Optional[int] = None
    matrix: Optional[MatLit] = None
    modulus: int = 0
    word: Optional[WordLit] = None
    word2: Optional[WordLit] = None
    negated: bool = False

    def pretty(self) -> str:
        k = self.kind
        if k == "exact":
            return f"assert {self.lhs.pretty()} {'!=' if self.negated else '=='} {self.rhs.pretty()}"
        if k == "outer":
            return f"assert {self.lhs.pretty()} ~ {self.rhs.pretty()}"
        if k in ("order", "outorder"):
            val = "unbounded" if self.number is None else str(self.number)
            return f"assert {k} {self.lhs.pretty()} {'!=' if self.negated else '=='} {val}"
        if k == "det":
            return f"assert det {self.lhs.pretty()} == {self.number}"
        if k == "matrix":
            mod = f" mod {self.modulus}" if self.modulus else ""
            op = "!=" if self.negated else "=="
            return f"assert matrix {self.lhs.pretty()}{mod} {op} {self.matrix.pretty()}"
        if k == "level":
            return f"assert level {self.number} {self.lhs.pretty()}"
        if k == "torelli":
            return f"assert torelli {self.lhs.pretty()}"
        if k == "inner":
            w = f" witness {self.word.pretty()}" if self.word is not None else ""
            return f"assert inner {self.lhs.pretty()}{w}"
        if k == "notinner":
            return f"assert not inner {self.lhs.pretty()}"
        if k == "fixes":
            return f"assert {self.lhs.pretty()} fixes {self.word.pretty()}"
        if k == "maps":
            return f"assert {self.lhs.pretty()} maps {self.word.pretty()} -> {self.word2.pretty()}"
        raise AssertionError(f"unknown assertion kind {k}")


@dataclass(frozen=True)
class CheckStmt:
    fn: str
    args: tuple[int | str, ...]
    expected: tuple[int | str, ...]  # one value, or several for list results
    large: bool = False

    def pretty(self) -> str:
        args = ", ".join(str(a) for a in self.args)
        if len(self.expected) == 1:
            exp = str(self.expected[0])
        else:
            exp = "[" + ", ".join(str(v) for v in self.expected) + "]"
        tail = " large" if self.large else ""
        return f"check {self.fn}({args}) == {exp}{tail}"


@dataclass(frozen=True)
class NoteStmt:
    text: str

    def pretty(self) -> str:
        return f'note "{self.text}"'


Statement = Union[
    RankDecl, ConstDecl, GensDecl, WordDecl, AutDeclExpr, AutDeclImages,
    GraphCtorDecl, GraphBlockDecl, GautBuiltinDecl, GautBlockDecl, BasisDecl,
    Assertion, CheckStmt, NoteStmt,
]


@dataclass(frozen=True)
class Layout:
    """Mapping from generator surface names to flattened 1-based indices."""

    items: tuple[LayoutItem, ...]
    rank: int

    def resolve(self, name: str, coords: Optional[tuple[int, ...]]) -> Optional[int]:
        base = 0
        for item in self.items:
            if item.dims is None:
                if name == item.name and coords is None:
                    return base + 1
                base += 1
            else:
                sizes = [hi - lo + 1 for _, lo, hi in item.dims]
                count = 1
                for s in sizes:
                    count *= s
                if name == item.name and coords is not None:
                    if len(coords) != len(item.dims):
                        return None
                    offset = 0
                    mult = 1
                    # Earlier dimensions vary fastest.
                    for c, (_, lo, hi) in zip(coords, item.dims):
                        if not lo <= c <= hi:
                            return None
                        offset += (c - lo) * mult
                        mult *= hi - lo + 1
                    return base + offset + 1
                base += count
        return None

    @staticmethod
    def default(rank: int) -> "Layout":
        return Layout((LayoutItem("x", (("i", 1, rank),)),), rank)

    def is_default(self) -> bool:
        return self.items == (LayoutItem("x", (("i", 1, self.rank),)),)


@dataclass(frozen=True)
class Scenario:
    name: str
    anchor: Optional[str]
    rank: int
    layout: Layout
    statements: tuple[Statement, ...]

    def pretty(self) -> str:
        lines = []
        if self.anchor is not None:
            lines.append(f"# anchor: {self.anchor}")
        lines.append(f"scenario {self.name}")
        lines.extend(stmt.pretty() for stmt in self.statements)
        return "\n".join(lines) + "\n"


# --- parser ------------------------------------------------------------------

_CHECK_FNS = {
    "order": 3, "center": 3, "simple": 3, "kernel": 2, "closure_kernel": 3,
    "closure_span": 2, "splitting": 2, "splitting_fixture": 2, "subreps": 1,
    "obstruction": 1,
}

_GRAPH_CTORS = {"rose": 1, "hairy": 1, "ring": 2, "closedchain": 1, "openchain": 1}


class Parser:
    def __init__(self, text: str):
        self.tokens, self.anchors = lex(text)
        self.pos = 0
        # symbol tables for parse-time name resolution
        self.consts: dict[str, int] = {}
        self.words: set[str] = set()
        self.auts: set[str] = set()
        self.graphs: dict[str, "_GraphShape"] = {}
        self.gauts: dict[str, str] = {}  # gaut name -> graph name
        self.bases: dict[str, str] = {}  # basis name -> graph name
        self.layout: Optional[Layout] = None
        self.rank: Optional[int] = None

    # token helpers

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col, expected)

    def expect_punct(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind != "PUNCT" or tok.value != value:
            raise self.error(f"found {tok.value!r}", (repr(value),))
        return self.next()

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.value == value

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.value in words

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.value != word:
            raise self.error(f"found {tok.value!r}", (word,))
        return self.next()

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "IDENT":
            raise self.error(f"expected {what}, found {tok.value!r}", (what,))
        if tok.value in KEYWORDS or tok.value in AUT_CONSTRUCTORS:
            raise self.error(f"{tok.value!r} is reserved", (what,))
        return self.next()

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return int(tok.value)
        if tok.kind == "IDENT" and tok.value in self.consts:
            self.next()
            return self.consts[tok.value]
        raise self.error(f"expected integer, found {tok.value!r}", ("integer",))

    def fresh_name(self, name: str, line_tok: Token) -> None:
        taken = (
            name in self.words or name in self.auts or name in self.graphs
            or name in self.gauts or name in self.bases or name in self.consts
        )
        if taken:
            raise ParseError(f"name {name!r} already defined", line_tok.line, line_tok.col)

    # entry point

    def parse(self, default_name: str = "scenario") -> Scenario:
        name = default_name
        statements: list[Statement] = []
        if self.at_keyword("scenario"):
            self.next()
            name = self.expect_ident("scenario name").value
        while self.peek().kind != "EOF":
            statements.append(self.parse_statement())
        if self.rank is None:
            raise ParseError("scenario never declares rank or gens", 1, 1)
        return Scenario(
            name=name,
            anchor=self.anchors[0] if self.anchors else None,
            rank=self.rank,
            layout=self.layout if self.layout is not None else Layout.default(self.rank),
            statements=tuple(statements),
        )

    def require_rank(self) -> int:
        if self.rank is None:
            raise self.error("rank (or gens) must be declared first")
        return self.rank

    def parse_statement(self) -> Statement:
        tok = self.peek()
        if tok.kind != "IDENT":
            raise self.error(f"expected a statement, found {tok.value!r}", ("statement",))
        kw = tok.value
        if kw == "rank":
            self.next()
            value = self.expect_int()
            if value < 1:
                raise self.error("rank must be positive")
            if self.rank is not None:
                raise self.error("rank already declared")
            self.rank = value
            self.layout = Layout.default(value)
            return RankDecl(value)
        if kw == "const":
            self.next()
            name_tok = self.expect_ident("constant name")
            self.fresh_name(name_tok.value, name_tok)
            self.expect_punct("=")
            value = self.expect_int()
            self.consts[name_tok.value] = value
            return ConstDecl(name_tok.value, value)
        if kw == "gens":
            return self.parse_gens()
        if kw == "word":
            self.next()
            name_tok = self.expect_ident("word name")
            self.fresh_name(name_tok.value, name_tok)
            self.expect_punct("=")
            lit = self.parse_word_lit()
            self.words.add(name_tok.value)
            return WordDecl(name_tok.value, lit)
        if kw == "aut":
            return self.parse_aut_decl()
        if kw == "graph":
            return self.parse_graph_decl()
        if kw == "gaut":
            return self.parse_gaut_decl()
        if kw == "basis":
            return self.parse_basis_decl()
        if kw == "assert":
            self.next()
            return self.parse_assertion()
        if kw == "check":
            self.next()
            return self.parse_check()
        if kw == "note":
            self.next()
            tok = self.peek()
            if tok.kind != "STRING":
                raise self.error("note takes a quoted string", ("string",))
            self.next()
            return NoteStmt(tok.value)
        raise self.error(f"unknown statement {kw!r}", ("statement keyword",))

    def parse_gens(self) -> GensDecl:
        self.next()
        if self.rank is not None:
            raise self.error("generator layout conflicts with an earlier rank/gens")
        items: list[LayoutItem] = []
        while True:
            tok = self.peek()
            if tok.kind != "IDENT" or tok.value in KEYWORDS:
                break
            if tok.value in AUT_CONSTRUCTORS:
                raise self.error(f"{tok.value!r} is reserved for automorphism constructors")
            self.next()
            if self.at_punct("["):
                self.next()
                dims: list[tuple[str, int, int]] = []
                while True:
                    var = self.expect_ident("dimension variable").value
                    self.expect_punct("=")
                    lo = self.expect_int()
                    self.expect_punct("..")
                    hi = self.expect_int()
                    if hi < lo:
                        raise self.error(f"empty range {lo}..{hi}")
                    dims.append((var, lo, hi))
                    if self.at_punct(","):
                        self.next()
                        continue
                    break
                self.expect_punct("]")
                items.append(LayoutItem(tok.value, tuple(dims)))
            else:
                items.append(LayoutItem(tok.value, None))
        if not items:
            raise self.error("gens needs at least one layout item")
        names = [i.name for i in items]
        if len(set(names)) != len(names):
            raise self.error("duplicate generator family name")
        rank = 0
        for item in items:
            if item.dims is None:
                rank += 1
            else:
                count = 1
                for _, lo, hi in item.dims:
                    count *= hi - lo + 1
                rank += count
        self.rank = rank
        self.layout = Layout(tuple(items), rank)
        return GensDecl(tuple(items))

    # generator references and word literals

    def parse_genref(self) -> GenRef:
        self.require_rank()
        assert self.layout is not None
        tok = self.peek()
        if tok.kind != "IDENT":
            raise self.error("expected a generator reference", ("generator",))
        name = tok.value
        self.next()
        coords: Optional[tuple[int, ...]] = None
        if self.at_punct("("):
            self.next()
            got: list[int] = [self.expect_int()]
            while self.at_punct(","):
                self.next()
                got.append(self.expect_int())
            self.expect_punct(")")
            coords = tuple(got)
        index = self.layout.resolve(name, coords)
        if index is None and coords is None and self.layout.is_default():
            m = re.fullmatch(r"x(\d+)", name)
            if m:
                idx = int(m.group(1))
                if 1 <= idx <= self.rank:
                    return GenRef(name, None, idx)
                raise ParseError(
                    f"generator {name} out of range for rank {self.rank}",
                    tok.line, tok.col,
                )
        if index is None:
            raise ParseError(
                f"unknown generator {name!r}"
                + (f" with coordinates {coords}" if coords else ""),
                tok.line, tok.col,
            )
        return GenRef(name, coords, index)

    def parse_genarg(self) -> GenRef:
        """Named generators accept either a plain index or a generator
        reference, e.g. L(1, 2) or L(x(1,1), x(2,1))."""
        tok = self.peek()
        if tok.kind == "INT" or (tok.kind == "IDENT" and tok.value in self.consts):
            value = self.expect_int()
            rank = self.require_rank()
            if not 1 <= value <= rank:
                raise ParseError(
                    f"generator index {value} out of range for rank {rank}",
                    tok.line, tok.col,
                )
            return GenRef(str(value), None, value)
        return self.parse_genref()

    def _word_atom_ahead(self) -> bool:
        tok = self.peek()
        if tok.kind != "IDENT":
            return False
        if tok.value == "e":
            return True
        if tok.value in KEYWORDS or tok.value in AUT_CONSTRUCTORS:
            return False
        return True

    def parse_word_lit(self) -> WordLit:
        if self.at_keyword("e"):
            self.next()
            return WordLit(())
        atoms: list[tuple[GenRef, int]] = []
        while self._word_atom_ahead():
            ref = self.parse_genref()
            exp = 1
            if self.at_punct("^"):
                self.next()
                exp = self.expect_int()
                if exp == 0:
                    raise self.error("zero exponent in word literal")
            atoms.append((ref, exp))
        if not atoms:
            raise self.error("expected a word literal", ("word",))
        return WordLit(tuple(atoms))

    def parse_path_lit(self, graph: "_GraphShape") -> PathLit:
        if self.at_keyword("e"):
            self.next()
            return PathLit(())
        atoms: list[tuple[str, int]] = []
        while True:
            tok = self.peek()
            if tok.kind != "IDENT" or tok.value in KEYWORDS:
                break
            if tok.value not in graph.edge_ids:
                break
            self.next()
            exp = 1
            if self.at_punct("^"):
                self.next()
                exp = self.expect_int()
                if exp == 0:
                    raise self.error("zero exponent in path literal")
            atoms.append((tok.value, exp))
        if not atoms:
            raise self.error("expected an edge path", ("edge path",))
        return PathLit(tuple(atoms))

    # automorphism declarations and expressions

    def parse_aut_decl(self) -> Statement:
        self.next()
        name_tok = self.expect_ident("automorphism name")
        self.fresh_name(name_tok.value, name_tok)
        if self.at_punct("{"):
            self.next()
            entries: list[tuple[GenRef, WordLit]] = []
            seen: set[int] = set()
            while not self.at_punct("}"):
                ref = self.parse_genref()
                if ref.index in seen:
                    raise self.error(f"duplicate image for {ref.pretty()}")
                seen.add(ref.index)
                self.expect_punct("->")
                lit = self.parse_word_lit()
                entries.append((ref, lit))
                if self.at_punct(";") or self.at_punct(","):
                    self.next()
            self.expect_punct("}")
            self.auts.add(name_tok.value)
            return AutDeclImages(name_tok.value, tuple(entries))
        self.expect_punct("=")
        expr = self.parse_aut_expr()
        self.auts.add(name_tok.value)
        return AutDeclExpr(name_tok.value, expr)

    def parse_aut_expr(self) -> AutExpr:
        factors = [self.parse_aut_term()]
        while self.at_punct("*"):
            self.next()
            factors.append(self.parse_aut_term())
        if len(factors) == 1:
            return factors[0]
        return AutProd(tuple(factors))

    def parse_aut_term(self) -> AutExpr:
        atom = self.parse_aut_atom()
        if self.at_punct("^"):
            self.next()
            exp = self.expect_int()
            return AutPow(atom, exp)
        return atom

    def parse_aut_atom(self) -> AutExpr:
        tok = self.peek()
        if self.at_punct("("):
            self.next()
            expr = self.parse_aut_expr()
            self.expect_punct(")")
            return expr
        if tok.kind != "IDENT":
            raise self.error("expected an automorphism", ("automorphism",))
        if tok.value == "id":
            self.next()
            return AutIdent()
        if tok.value in AUT_CONSTRUCTORS:
            self.next()
            self.expect_punct("(")
            args = [self.parse_genarg()]
            if tok.value != "I":
                self.expect_punct(",")
                args.append(self.parse_genarg())
                if args[0].index == args[1].index:
                    raise ParseError(
                        f"{tok.value} needs distinct generators", tok.line, tok.col
                    )
            self.expect_punct(")")
            return AutNamedGen(tok.value, tuple(args))
        if tok.value == "induced":
            self.next()
            gaut_tok = self.expect_ident("graph automorphism name")
            if gaut_tok.value not in self.gauts:
                raise ParseError(
                    f"unknown graph automorphism {gaut_tok.value!r}",
                    gaut_tok.line, gaut_tok.col,
                )
            graph_name = self.gauts[gaut_tok.value]
            shape = self.graphs[graph_name]
            mode: str
            vertex = None
            delta = None
            if self.at_keyword("at"):
                self.next()
                mode = "at"
                vtok = self.expect_ident("vertex")
                if vtok.value not in shape.vertex_ids:
                    raise ParseError(
                        f"vertex {vtok.value!r} is not in graph {graph_name!r}",
                        vtok.line, vtok.col,
                    )
                vertex = vtok.value
            elif self.at_keyword("delta"):
                self.next()
                mode = "delta"
                delta = self.parse_path_lit(shape)
            else:
                raise self.error("induced needs 'at VERTEX' or 'delta PATH'",
                                 ("at", "delta"))
            basis = None
            if self.at_keyword("basis"):
                self.next()
                btok = self.expect_ident("basis name")
                if btok.value not in self.bases:
                    raise ParseError(
                        f"unknown basis {btok.value!r}", btok.line, btok.col
                    )
                if self.bases[btok.value] != graph_name:
                    raise ParseError(
                        f"basis {btok.value!r} lives on a different graph",
                        btok.line, btok.col,
                    )
                basis = btok.value
            return AutInduced(gaut_tok.value, mode, vertex, delta, basis)
        if tok.value in KEYWORDS:
            raise self.error(f"expected an automorphism, found {tok.value!r}",
                             ("automorphism",))
        if tok.value not in self.auts:
            raise ParseError(f"unknown automorphism {tok.value!r}", tok.line, tok.col)
        self.next()
        return AutName(tok.value)

    # graphs

    def parse_graph_decl(self) -> Statement:
        self.next()
        name_tok = self.expect_ident("graph name")
        self.fresh_name(name_tok.value, name_tok)
        if self.at_punct("="):
            self.next()
            ctor_tok = self.peek()
            if ctor_tok.kind != "IDENT" or ctor_tok.value not in _GRAPH_CTORS:
                raise self.error(
                    "expected a graph constructor", tuple(sorted(_GRAPH_CTORS))
                )
            self.next()
            self.expect_punct("(")
            args = [self.expect_int()]
            while self.at_punct(","):
                self.next()
                args.append(self.expect_int())
            self.expect_punct(")")
            want = _GRAPH_CTORS[ctor_tok.value]
            if len(args) != want:
                raise self.error(f"{ctor_tok.value} takes {want} argument(s)")
            shape = _ctor_shape(ctor_tok.value, tuple(args))
            self.graphs[name_tok.value] = shape
            return GraphCtorDecl(name_tok.value, ctor_tok.value, tuple(args))
        self.expect_punct("{")
        vertices: list[str] = []
        edges: list[tuple[str, str, str]] = []
        ids: set[str] = set()
        while not self.at_punct("}"):
            if self.at_keyword("vertex"):
                self.next()
                while self.peek().kind == "IDENT" and self.peek().value not in KEYWORDS:
                    vtok = self.next()
                    if vtok.value in vertices:
                        raise ParseError(
                            f"duplicate vertex {vtok.value!r}", vtok.line, vtok.col
                        )
                    vertices.append(vtok.value)
            elif self.at_keyword("edge"):
                self.next()
                e = self.expect_ident("edge id").value
                s = self.expect_ident("source vertex").value
                d = self.expect_ident("target vertex").value
                if e in ids:
                    raise self.error(f"duplicate edge id {e!r}")
                ids.add(e)
                edges.append((e, s, d))
            elif self.at_keyword("loop"):
                self.next()
                e = self.expect_ident("loop id").value
                v = self.expect_ident("vertex").value
                if e in ids:
                    raise self.error(f"duplicate edge id {e!r}")
                ids.add(e)
                edges.append((e, v, v))
            else:
                raise self.error("expected vertex/edge/loop", ("vertex", "edge", "loop"))
            if self.at_punct(";"):
                self.next()
        self.expect_punct("}")
        vset = set(vertices)
        for e, s, d in edges:
            if s not in vset or d not in vset:
                raise self.error(f"edge {e!r} uses an undeclared vertex")
        shape = _GraphShape(tuple(vertices), tuple(e for e, _, _ in edges))
        self.graphs[name_tok.value] = shape
        return GraphBlockDecl(name_tok.value, tuple(vertices), tuple(edges))

    def parse_gaut_decl(self) -> Statement:
        self.next()
        name_tok = self.expect_ident("graph automorphism name")
        self.fresh_name(name_tok.value, name_tok)
        if self.at_punct("="):
            self.next()
            kind_tok = self.peek()
            if kind_tok.kind != "IDENT" or kind_tok.value not in ("rotation", "pairswap"):
                raise self.error("expected rotation or pairswap", ("rotation", "pairswap"))
            self.next()
            self.expect_keyword("on")
            gtok = self.expect_ident("graph name")
            if gtok.value not in self.graphs:
                raise ParseError(f"unknown graph {gtok.value!r}", gtok.line, gtok.col)
            self.gauts[name_tok.value] = gtok.value
            return GautBuiltinDecl(name_tok.value, kind_tok.value, gtok.value)
        self.expect_keyword("on")
        gtok = self.expect_ident("graph name")
        if gtok.value not in self.graphs:
            raise ParseError(f"unknown graph {gtok.value!r}", gtok.line, gtok.col)
        shape = self.graphs[gtok.value]
        self.expect_punct("{")
        entries: list[tuple[str, str, bool]] = []
        mapped: set[str] = set()
        while not self.at_punct("}"):
            etok = self.expect_ident("edge id")
            if etok.value not in shape.edge_ids:
                raise ParseError(
                    f"edge {etok.value!r} is not in graph {gtok.value!r}",
                    etok.line, etok.col,
                )
            if etok.value in mapped:
                raise ParseError(f"edge {etok.value!r} mapped twice", etok.line, etok.col)
            mapped.add(etok.value)
            self.expect_punct("->")
            rev = False
            if self.at_punct("~"):
                self.next()
                rev = True
            ttok = self.expect_ident("target edge id")
            if ttok.value not in shape.edge_ids:
                raise ParseError(
                    f"edge {ttok.value!r} is not in graph {gtok.value!r}",
                    ttok.line, ttok.col,
                )
            entries.append((etok.value, ttok.value, rev))
            if self.at_punct(";") or self.at_punct(","):
                self.next()
        self.expect_punct("}")
        self.gauts[name_tok.value] = gtok.value
        return GautBlockDecl(name_tok.value, gtok.value, tuple(entries))

    def parse_basis_decl(self) -> Statement:
        self.next()
        name_tok = self.expect_ident("basis name")
        self.fresh_name(name_tok.value, name_tok)
        self.expect_keyword("on")
        gtok = self.expect_ident("graph name")
        if gtok.value not in self.graphs:
            raise ParseError(f"unknown graph {gtok.value!r}", gtok.line, gtok.col)
        shape = self.graphs[gtok.value]
        self.expect_keyword("at")
        vtok = self.expect_ident("basepoint vertex")
        if vtok.value not in shape.vertex_ids:
            raise ParseError(
                f"vertex {vtok.value!r} is not in graph {gtok.value!r}",
                vtok.line, vtok.col,
            )
        self.expect_punct("{")
        entries: list[tuple[GenRef, PathLit]] = []
        seen: set[int] = set()
        while not self.at_punct("}"):
            ref = self.parse_genref()
            if ref.index in seen:
                raise self.error(f"duplicate basis entry for {ref.pretty()}")
            seen.add(ref.index)
            self.expect_punct("=")
            path = self.parse_path_lit(shape)
            entries.append((ref, path))
            if self.at_punct(";") or self.at_punct(","):
                self.next()
        self.expect_punct("}")
        rank = self.require_rank()
        if len(entries) != rank:
            raise self.error(
                f"basis has {len(entries)} entries but the rank is {rank}"
            )
        self.bases[name_tok.value] = gtok.value
        return BasisDecl(name_tok.value, gtok.value, vtok.value, tuple(entries))

    # assertions and checks

    def parse_assertion(self) -> Assertion:
        if self.at_keyword("order", "outorder"):
            kind = self.next().value
            lhs = self.parse_aut_expr()
            negated = self._eq_or_ne()
            if self.at_keyword("unbounded"):
                self.next()
                return Assertion(kind, lhs, number=None, negated=negated)
            return Assertion(kind, lhs, number=self.expect_int(), negated=negated)
        if self.at_keyword("det"):
            self.next()
            lhs = self.parse_aut_expr()
            self.expect_punct("==")
            return Assertion("det", lhs, number=self.expect_int())
        if self.at_keyword("matrix"):
            self.next()
            lhs = self.parse_aut_expr()
            modulus = 0
            if self.at_keyword("mod"):
                self.next()
                modulus = self.expect_int()
                if modulus < 2:
                    raise self.error("modulus must be at least 2")
            negated = self._eq_or_ne()
            mat = self.parse_mat_lit()
            return Assertion("matrix", lhs, matrix=mat, modulus=modulus, negated=negated)
        if self.at_keyword("level"):
            self.next()
            level = self.expect_int()
            if level < 2:
                raise self.error("level must be at least 2")
            lhs = self.parse_aut_expr()
            return Assertion("level", lhs, number=level)
        if self.at_keyword("torelli"):
            self.next()
            return Assertion("torelli", self.parse_aut_expr())
        if self.at_keyword("not"):
            self.next()
            self.expect_keyword("inner")
            return Assertion("notinner", self.parse_aut_expr())
        if self.at_keyword("inner"):
            self.next()
            lhs = self.parse_aut_expr()
            word = None
            if self.at_keyword("witness"):
                self.next()
                word = self.parse_word_lit()
            return Assertion("inner", lhs, word=word)
        lhs = self.parse_aut_expr()
        if self.at_keyword("fixes"):
            self.next()
            return Assertion("fixes", lhs, word=self.parse_word_lit())
        if self.at_keyword("maps"):
            self.next()
            word = self.parse_word_lit()
            self.expect_punct("->")
            return Assertion("maps", lhs, word=word, word2=self.parse_word_lit())
        if self.at_punct("~"):
            self.next()
            return Assertion("outer", lhs, rhs=self.parse_aut_expr())
        negated = self._eq_or_ne()
        return Assertion("exact", lhs, rhs=self.parse_aut_expr(), negated=negated)

    def _eq_or_ne(self) -> bool:
        if self.at_punct("=="):
            self.next()
            return False
        if self.at_punct("!="):
            self.next()
            return True
        raise self.error("expected == or !=", ("==", "!="))

    def parse_mat_lit(self) -> MatLit:
        if self.at_punct("-"):
            self.next()
            self.expect_keyword("id")
            return MatLit("negid")
        if self.at_keyword("id"):
            self.next()
            return MatLit("id")
        if self.at_keyword("elementary"):
            self.next()
            self.expect_punct("(")
            k = self.expect_int()
            self.expect_punct(",")
            r = self.expect_int()
            self.expect_punct(")")
            power = 1
            if self.at_punct("^"):
                self.next()
                power = self.expect_int()
            rank = self.require_rank()
            if not (1 <= k <= rank and 1 <= r <= rank) or k == r:
                raise self.error(f"elementary({k}, {r}) out of range for rank {rank}")
            return MatLit("elementary", k=k, r=r, power=power)
        if self.at_punct("["):
            self.next()
            rows: list[tuple[int, ...]] = []
            current: list[int] = []
            while not self.at_punct("]"):
                if self.at_punct(";"):
                    self.next()
                    rows.append(tuple(current))
                    current = []
                    continue
                tok = self.peek()
                if tok.kind != "INT":
                    raise self.error("matrix rows are integers", ("integer", ";", "]"))
                current.append(int(self.next().value))
            self.expect_punct("]")
            rows.append(tuple(current))
            rank = self.require_rank()
            if len(rows) != rank or any(len(r) != rank for r in rows):
                raise self.error(f"matrix literal must be {rank}x{rank}")
            return MatLit("rows", rows=tuple(rows))
        raise self.error("expected a matrix expression", ("id", "-id", "elementary", "["))

    def parse_check(self) -> CheckStmt:
        fn_tok = self.peek()
        if fn_tok.kind != "IDENT" or fn_tok.value not in _CHECK_FNS:
            raise self.error("unknown check", tuple(sorted(_CHECK_FNS)))
        self.next()
        self.expect_punct("(")
        args: list[int | str] = []
        while not self.at_punct(")"):
            tok = self.peek()
            if tok.kind == "INT":
                args.append(int(self.next().value))
            elif tok.kind == "IDENT" and tok.value in self.consts:
                args.append(self.consts[self.next().value])
            elif tok.kind == "IDENT":
                args.append(self.next().value)
            else:
                raise self.error("expected a check argument", ("integer", "name"))
            if self.at_punct(","):
                self.next()
        self.expect_punct(")")
        if len(args) != _CHECK_FNS[fn_tok.value]:
            raise self.error(
                f"{fn_tok.value} takes {_CHECK_FNS[fn_tok.value]} argument(s)"
            )
        self.expect_punct("==")
        expected: list[int | str] = []
        if self.at_punct("["):
            self.next()
            while not self.at_punct("]"):
                tok = self.peek()
                if tok.kind == "INT":
                    expected.append(int(self.next().value))
                elif tok.kind == "IDENT":
                    expected.append(self.next().value)
                else:
                    raise self.error("expected a value", ("integer", "name"))
                if self.at_punct(","):
                    self.next()
            self.expect_punct("]")
        else:
            tok = self.peek()
            if tok.kind == "INT":
                expected.append(int(self.next().value))
            elif tok.kind == "IDENT":
                expected.append(self.next().value)
            else:
                raise self.error("expected a value", ("integer", "name"))
        large = False
        if self.at_keyword("large"):
            self.next()
            large = True
        return CheckStmt(fn_tok.value, tuple(args), tuple(expected), large)


@dataclass(frozen=True)
class _GraphShape:
    """Parse-time view of a graph: just its vertex and edge id sets."""

    vertex_ids: tuple[str, ...]
    edge_ids: tuple[str, ...]


def _ctor_shape(ctor: str, args: tuple[int, ...]) -> _GraphShape:
    from . import graphs as g

    builder = {
        "rose": g.rose, "hairy": g.hairy, "ring": g.ring,
        "closedchain": g.closed_chain, "openchain": g.open_chain,
    }[ctor]
    built = builder(*args)
    return _GraphShape(built.vertices, tuple(e for e, _, _ in built.edges))


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    return Parser(text).parse(default_name=name)
