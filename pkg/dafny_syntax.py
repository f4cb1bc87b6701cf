"""Lossless lexer, parser and printer for the Dafny subset that mutdafny mutates.

Every token keeps the whitespace, comments and attributes in front of it as
``trivia``, so concatenating trivia and token text reproduces the input
exactly. Offsets index the decoded source text.
"""
from __future__ import annotations

import bisect
import dataclasses
import logging
import re
from dataclasses import dataclass, field
from decimal import Decimal
from functools import cached_property
from typing import Iterator

logger = logging.getLogger(__name__)


class DafnySyntaxError(Exception):
    def __init__(self, message, line=0, column=0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class LexError(DafnySyntaxError):
    pass


class ParseError(DafnySyntaxError):
    def __init__(self, message, line=0, column=0, expected=None):
        super().__init__(message, line, column)
        self.expected = expected


class SpanOutOfBounds(DafnySyntaxError):
    pass


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def contains(self, other: SourceSpan) -> bool:
        return self.start <= other.start and other.end <= self.end

    def overlaps(self, other: SourceSpan) -> bool:
        return self.start < other.end and other.start < self.end

    def text(self, source: str) -> str:
        return source[self.start:self.end]


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, int, real, char, string, op
    text: str
    span: SourceSpan
    trivia: str = ''


KEYWORDS = frozenset({
    'abstract', 'allocated', 'as', 'assert', 'assume', 'break', 'calc', 'case', 'class',
    'codatatype', 'colemma', 'const', 'constructor', 'continue', 'datatype', 'decreases',
    'downto', 'else', 'ensures', 'exists', 'expect', 'export', 'extends', 'false', 'for',
    'forall', 'fresh', 'function', 'ghost', 'if', 'imap', 'import', 'in', 'include',
    'invariant', 'is', 'iset', 'iterator', 'label', 'lemma', 'map', 'match', 'method',
    'modifies', 'modify', 'module', 'multiset', 'new', 'newtype', 'null', 'old', 'opened',
    'predicate', 'print', 'reads', 'refines', 'requires', 'return', 'returns', 'reveal',
    'seq', 'set', 'static', 'then', 'this', 'to', 'trait', 'true', 'twostate', 'type',
    'unchanged', 'var', 'while', 'witness', 'yield',
})

OPERATORS = sorted([
    '<==>', '==>', '<==', '-->', '==', '!=', '<=', '>=', '&&', '||', '<<', '>>', ':=', ':|',
    ':-', '::', '..', '=>', '->', '~>', '!!',
    '+', '-', '*', '/', '%', '<', '>', '!', '&', '|', '^', '=', '(', ')', '[', ']', '{', '}',
    ',', ';', ':', '.', '?', '@', '#', '~', '`',
], key=len, reverse=True)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_'?]*")
_HEX = re.compile(r"0x[0-9A-Fa-f][0-9A-Fa-f_]*")
_NUMBER = re.compile(r"[0-9][0-9_]*(?:\.[0-9][0-9_]*)?")
_DIGITS = re.compile(r"[0-9][0-9_]*")
_STRING = re.compile(r'"(?:\\.|[^"\\\n])*"')
_VERBATIM = re.compile(r'@"(?:[^"]|"")*"')
_CHAR = re.compile(r"'(?:\\u[0-9A-Fa-f]{4}|\\U\{[0-9A-Fa-f_]{1,8}\}|\\.|[^'\\\n])'")
_IDENT_CHAR = re.compile(r"[A-Za-z0-9_'?]")


class LineIndex:
    """Maps offsets to 1-based (line, column) pairs."""

    def __init__(self, text):
        self.text = text
        self.starts = [0] + [m.end() for m in re.finditer('\n', text)]

    def position(self, offset):
        row = bisect.bisect_right(self.starts, offset) - 1
        return row + 1, offset - self.starts[row] + 1

    def span(self, start, end):
        line, column = self.position(start)
        return SourceSpan(start, end, line, column)


class Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.index = LineIndex(text)
        self.trailing_trivia = ''
        self.previous = None

    def error(self, message, offset=None):
        line, column = self.index.position(self.pos if offset is None else offset)
        return LexError(message, line, column)

    def tokenize(self) -> list[Token]:
        tokens = []
        while True:
            trivia = self.scan_trivia()
            if self.pos >= len(self.text):
                self.trailing_trivia = trivia
                return tokens
            kind, text = self.scan_token()
            start = self.pos
            self.pos += len(text)
            tokens.append(Token(kind, text, self.index.span(start, self.pos), trivia))
            self.previous = text

    def scan_trivia(self):
        text, start = self.text, self.pos
        while self.pos < len(text):
            c = text[self.pos]
            if c.isspace():
                self.pos += 1
            elif text.startswith('//', self.pos):
                newline = text.find('\n', self.pos)
                self.pos = len(text) if newline < 0 else newline
            elif text.startswith('/*', self.pos):
                self.skip_block_comment()
            elif text.startswith('{:', self.pos):
                self.skip_attribute()
            else:
                break
        return text[start:self.pos]

    def skip_block_comment(self):
        opened = self.pos
        depth = 0
        while self.pos < len(self.text):
            if self.text.startswith('/*', self.pos):
                depth += 1
                self.pos += 2
            elif self.text.startswith('*/', self.pos):
                depth -= 1
                self.pos += 2
                if depth == 0:
                    return
            else:
                self.pos += 1
        raise self.error('unterminated comment', opened)

    def skip_attribute(self):
        opened = self.pos
        depth = 0
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == '"':
                match = _STRING.match(self.text, self.pos)
                if not match:
                    raise self.error('unterminated string literal')
                self.pos = match.end()
                continue
            if c == '{':
                depth += 1
            elif c == '}':
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return
            self.pos += 1
        raise self.error('unterminated attribute', opened)

    def scan_token(self):
        text, pos = self.text, self.pos
        c = text[pos]
        if c == '!' and text.startswith('!in', pos) and not _IDENT_CHAR.match(text, pos + 3):
            return 'op', '!in'
        if c.isascii() and (c.isalpha() or c == '_'):
            word = _IDENT.match(text, pos).group()
            return ('keyword' if word in KEYWORDS else 'ident'), word
        if c.isdigit():
            match = _HEX.match(text, pos)
            if match:
                return 'int', match.group()
            if self.previous == '.':
                # tuple member: t.0.1 is two selections
                return 'int', _DIGITS.match(text, pos).group()
            number = _NUMBER.match(text, pos).group()
            return ('real' if '.' in number else 'int'), number
        if c == '"':
            match = _STRING.match(text, pos)
            if not match:
                raise self.error('unterminated string literal')
            return 'string', match.group()
        if c == '@' and text.startswith('@"', pos):
            match = _VERBATIM.match(text, pos)
            if not match:
                raise self.error('unterminated string literal')
            return 'string', match.group()
        if c == "'":
            match = _CHAR.match(text, pos)
            if match:
                return 'char', match.group()
            raise self.error('malformed character literal')
        for op in OPERATORS:
            if text.startswith(op, pos):
                return 'op', op
        raise self.error(f"unrecognized character {c!r}")


def tokenize(text: str) -> list[Token]:
    return Lexer(text).tokenize()


# ---------------------------------------------------------------- syntax tree

@dataclass(frozen=True, eq=False)
class Node:
    span: SourceSpan

    def children(self) -> Iterator[Node]:
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Node):
                yield value
            elif isinstance(value, tuple):
                for item in value:
                    if isinstance(item, Node):
                        yield item


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal in source order."""
    yield node
    for child in node.children():
        yield from walk(child)


@dataclass(frozen=True, eq=False)
class TypeSyntax(Node):
    name: str  # '()' for tuple types, '->' for arrows
    args: tuple = ()


class Expr(Node):
    pass


@dataclass(frozen=True, eq=False)
class Literal(Expr):
    kind: str  # bool, int, real, char, string, null
    value: object
    text: str


@dataclass(frozen=True, eq=False)
class Identifier(Expr):
    name: str


@dataclass(frozen=True, eq=False)
class This(Expr):
    pass


@dataclass(frozen=True, eq=False)
class ParenExpr(Expr):
    inner: Expr


@dataclass(frozen=True, eq=False)
class TupleDisplay(Expr):
    elements: tuple


@dataclass(frozen=True, eq=False)
class FieldAccess(Expr):
    receiver: Expr
    name: str
    name_span: SourceSpan


@dataclass(frozen=True, eq=False)
class TupleAccess(Expr):
    receiver: Expr
    index: int
    index_span: SourceSpan


@dataclass(frozen=True, eq=False)
class IndexExpr(Expr):
    receiver: Expr
    index: Expr


@dataclass(frozen=True, eq=False)
class Slice(Expr):
    receiver: Expr
    lo: Expr | None
    hi: Expr | None


@dataclass(frozen=True, eq=False)
class BinaryOp(Expr):
    lhs: Expr
    op: str
    op_span: SourceSpan
    rhs: Expr


@dataclass(frozen=True, eq=False)
class UnaryOp(Expr):
    op: str
    op_span: SourceSpan
    operand: Expr


@dataclass(frozen=True, eq=False)
class FunctionCall(Expr):
    receiver: Expr | None
    callee: str
    callee_span: SourceSpan
    args: tuple


@dataclass(frozen=True, eq=False)
class MapEntry(Node):
    key: Expr
    value: Expr


@dataclass(frozen=True, eq=False)
class CollectionDisplay(Expr):
    flavor: str  # seq, set, multiset, map
    elements: tuple


@dataclass(frozen=True, eq=False)
class New(Expr):
    type: TypeSyntax
    dims: tuple
    args: tuple
    initializer: tuple
    is_array: bool


@dataclass(frozen=True, eq=False)
class IfThenElse(Expr):
    guard: Expr
    then: Expr
    else_: Expr


@dataclass(frozen=True, eq=False)
class Binding(Node):
    name: str
    name_span: SourceSpan | None
    type: TypeSyntax | None
    is_ghost: bool = False


@dataclass(frozen=True, eq=False)
class LetExpr(Expr):
    bindings: tuple
    values: tuple
    body: Expr


@dataclass(frozen=True, eq=False)
class Cardinality(Expr):
    operand: Expr


@dataclass(frozen=True, eq=False)
class AsExpr(Expr):
    operand: Expr
    op: str  # as, is
    type: TypeSyntax


@dataclass(frozen=True, eq=False)
class OpaqueExpr(Expr):
    """Quantifiers, comprehensions, lambdas, old/fresh and other spec-only forms."""
    kind: str


class Stmt(Node):
    pass


@dataclass(frozen=True, eq=False)
class SpecClause(Node):
    keyword: str


@dataclass(frozen=True, eq=False)
class VarDecl(Stmt):
    bindings: tuple
    values: tuple


@dataclass(frozen=True, eq=False)
class Assign(Stmt):
    lhs: tuple
    rhs: tuple


@dataclass(frozen=True, eq=False)
class CallStmt(Stmt):
    call: FunctionCall


@dataclass(frozen=True, eq=False)
class Block(Stmt):
    stmts: tuple


@dataclass(frozen=True, eq=False)
class If(Stmt):
    guard: Expr
    then: Block
    else_: Block | If | None
    else_span: SourceSpan | None = None


@dataclass(frozen=True, eq=False)
class While(Stmt):
    guard: Expr
    specs: tuple
    body: Block | None


@dataclass(frozen=True, eq=False)
class For(Stmt):
    index: Binding
    lo: Expr
    hi: Expr
    downto: bool
    specs: tuple
    body: Block | None


@dataclass(frozen=True, eq=False)
class MatchCase(Node):
    pattern: str
    pattern_span: SourceSpan
    body: tuple
    body_span: SourceSpan

    @property
    def is_wildcard(self):
        return self.pattern.strip() == '_'


@dataclass(frozen=True, eq=False)
class Match(Stmt):
    scrutinee: Expr
    cases: tuple
    braced: bool


@dataclass(frozen=True, eq=False)
class Break(Stmt):
    label: str | None = None


@dataclass(frozen=True, eq=False)
class Continue(Stmt):
    label: str | None = None


@dataclass(frozen=True, eq=False)
class Return(Stmt):
    values: tuple = ()


@dataclass(frozen=True, eq=False)
class Print(Stmt):
    args: tuple = ()


@dataclass(frozen=True, eq=False)
class OpaqueStmt(Stmt):
    """assert/assume/expect, ghost statements, calc, forall and other pass-through forms."""
    kind: str


class Decl(Node):
    pass


@dataclass(frozen=True, eq=False)
class FunctionBody(Node):
    expr: Expr


@dataclass(frozen=True, eq=False)
class CallableDecl(Decl):
    kind: str  # Method, Function, Predicate, Lemma, Constructor
    name: str
    name_span: SourceSpan | None
    modifiers: frozenset
    params: tuple
    outs: tuple
    result_type: TypeSyntax | None
    specs: tuple
    body: Block | FunctionBody | None

    @property
    def is_ghost(self):
        if self.kind == 'Lemma':
            return True
        return bool(self.modifiers & {'ghost', 'twostate', 'least', 'greatest'})

    @property
    def has_ensures(self):
        return any(spec.keyword == 'ensures' for spec in self.specs)


@dataclass(frozen=True, eq=False)
class FieldDecl(Decl):
    kind: str
    bindings: tuple
    modifiers: frozenset


@dataclass(frozen=True, eq=False)
class ConstDecl(Decl):
    kind: str
    name: str
    name_span: SourceSpan
    modifiers: frozenset
    type: TypeSyntax | None
    value: Expr | None


@dataclass(frozen=True, eq=False)
class ClassDecl(Decl):
    kind: str  # Class, Trait
    name: str
    name_span: SourceSpan
    modifiers: frozenset
    extends: tuple
    members: tuple


@dataclass(frozen=True, eq=False)
class DatatypeCtorDecl(Node):
    name: str
    name_span: SourceSpan
    params: tuple


@dataclass(frozen=True, eq=False)
class DatatypeDecl(Decl):
    kind: str
    name: str
    name_span: SourceSpan
    ctors: tuple
    members: tuple


@dataclass(frozen=True, eq=False)
class ModuleDecl(Decl):
    kind: str
    name: str
    members: tuple


@dataclass(frozen=True, eq=False)
class OpaqueDecl(Decl):
    keyword: str

    @property
    def kind(self):
        return 'Opaque'

    @property
    def name(self):
        return ''


@dataclass(frozen=True)
class Edit:
    span: SourceSpan
    replacement: str


@dataclass(frozen=True)
class SyntaxTree:
    declarations: tuple
    source_text: str
    tokens: tuple
    trailing_trivia: str = ''
    edits: tuple = ()

    @cached_property
    def line_index(self):
        return LineIndex(self.source_text)

    def span(self, start, end) -> SourceSpan:
        return self.line_index.span(start, end)

    def text_of(self, node_or_span) -> str:
        span = node_or_span.span if isinstance(node_or_span, Node) else node_or_span
        return span.text(self.source_text)

    def with_replacement(self, node_or_span, text) -> SyntaxTree:
        span = node_or_span.span if isinstance(node_or_span, Node) else node_or_span
        return dataclasses.replace(self, edits=self.edits + (Edit(span, text),))

    def walk(self) -> Iterator[Node]:
        for decl in self.declarations:
            yield from walk(decl)


# --------------------------------------------------------------------- parser

MODIFIERS = frozenset({'ghost', 'static', 'abstract', 'opaque', 'twostate', 'least', 'greatest'})
CALLABLE_KINDS = {
    'method': 'Method', 'function': 'Function', 'predicate': 'Predicate',
    'lemma': 'Lemma', 'colemma': 'Lemma', 'constructor': 'Constructor',
}
DECL_STARTS = frozenset(set(CALLABLE_KINDS) | {
    'class', 'trait', 'datatype', 'codatatype', 'const', 'var', 'module', 'import', 'include',
    'type', 'newtype', 'iterator', 'ghost', 'static', 'abstract', 'export', 'twostate',
})
SPEC_KEYWORDS = frozenset({'requires', 'ensures', 'reads', 'modifies', 'decreases', 'invariant'})
OPAQUE_STMT_WORDS = frozenset({
    'assert', 'assume', 'expect', 'reveal', 'modify', 'calc', 'forall', 'ghost', 'label',
    'yield', 'new',
})
RELATIONAL = ('==', '!=', '<', '<=', '>', '>=', 'in', '!in', '!!')
OPENERS = {'(': ')', '[': ']', '{': '}'}
CLOSERS = frozenset(OPENERS.values())


class Parser:
    def __init__(self, text):
        self.text = text
        lexer = Lexer(text)
        self.tokens = lexer.tokenize()
        self.trailing_trivia = lexer.trailing_trivia
        self.index = lexer.index
        self._eof = Token('eof', '', self.index.span(len(text), len(text)))
        self.pos = 0
        self._last = None
        self._no_bar = 0
        self._half_gt = False

    # token helpers

    def peek(self, offset=0) -> Token:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else self._eof

    def at(self, *texts, offset=0):
        tok = self.peek(offset)
        return tok.kind in ('op', 'keyword', 'ident') and tok.text in texts

    def at_eof(self):
        return self.pos >= len(self.tokens)

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind == 'eof':
            raise self.error('unexpected end of input')
        self.pos += 1
        self._last = tok
        return tok

    def expect(self, text, what=None) -> Token:
        if not self.at(text):
            raise self.error(f"expected {what or repr(text)}", expected=what or text)
        return self.advance()

    def expect_ident(self, what='identifier') -> Token:
        if self.peek().kind != 'ident':
            raise self.error(f"expected {what}", expected=what)
        return self.advance()

    def error(self, message, expected=None):
        tok = self.peek()
        found = 'end of input' if tok.kind == 'eof' else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.span.line, tok.span.column,
                          expected=expected)

    def span_from(self, start) -> SourceSpan:
        first = start.span if isinstance(start, Token) else start
        end = self._last.span.end if self._last is not None else first.start
        return SourceSpan(first.start, max(end, first.start), first.line, first.column)

    def skip_balanced(self):
        closer = OPENERS[self.advance().text]
        stack = [closer]
        while stack:
            tok = self.advance()
            if tok.kind != 'op':
                continue
            if tok.text in OPENERS:
                stack.append(OPENERS[tok.text])
            elif tok.text in CLOSERS:
                if tok.text != stack[-1]:
                    raise ParseError(f"unbalanced {tok.text!r}", tok.span.line, tok.span.column,
                                     expected=stack[-1])
                stack.pop()

    # declarations

    def parse_program(self) -> SyntaxTree:
        declarations = []
        while not self.at_eof():
            declarations.append(self.parse_decl())
        return SyntaxTree(tuple(declarations), self.text, tuple(self.tokens),
                          self.trailing_trivia)

    def _at_modifier(self):
        if not self.at(*MODIFIERS):
            return False
        following = self.peek(1)
        return following.text in DECL_STARTS or following.text in MODIFIERS

    def parse_decl(self) -> Decl:
        start = self.peek()
        modifiers = set()
        while self._at_modifier():
            modifiers.add(self.advance().text)
        modifiers = frozenset(modifiers)
        tok = self.peek()
        word = tok.text if tok.kind == 'keyword' else None
        if word in CALLABLE_KINDS:
            return self.parse_callable(start, modifiers)
        if word in ('class', 'trait'):
            return self.parse_class(start, modifiers)
        if word == 'datatype':
            return self.parse_datatype(start)
        if word == 'const':
            return self.parse_const(start, modifiers)
        if word == 'var':
            return self.parse_field(start, modifiers)
        if word == 'module':
            return self.parse_module(start)
        if word == 'import':
            return self.parse_import(start)
        if word == 'include':
            self.advance()
            if self.peek().kind == 'string':
                self.advance()
            return OpaqueDecl(self.span_from(start), 'include')
        return self.skip_opaque_decl(start)

    def skip_opaque_decl(self, start):
        keyword = self.advance().text
        while not self.at_eof():
            tok = self.peek()
            if tok.kind == 'keyword' and tok.text in DECL_STARTS or self.at('}'):
                break
            if self.at(*OPENERS):
                self.skip_balanced()
            else:
                self.advance()
        return OpaqueDecl(self.span_from(start), keyword)

    def parse_import(self, start):
        self.advance()
        if self.at('opened'):
            self.advance()
        while self.peek().kind == 'ident' or self.at('.', '=', '`'):
            tok = self.advance()
            if tok.text == '`' and self.at('{'):
                self.skip_balanced()
        return OpaqueDecl(self.span_from(start), 'import')

    def parse_module(self, start):
        self.advance()
        name = self.expect_ident('module name').text
        while self.at('.'):
            self.advance()
            name += '.' + self.expect_ident('module name').text
        if not self.at('{'):
            while not self.at('{'):
                self.advance()
            self.skip_balanced()
            return OpaqueDecl(self.span_from(start), 'module')
        members = self.parse_members()
        return ModuleDecl(self.span_from(start), 'Module', name, members)

    def parse_members(self):
        self.expect('{')
        members = []
        while not self.at('}'):
            if self.at_eof():
                raise self.error("expected '}'", expected='}')
            members.append(self.parse_decl())
        self.advance()
        return tuple(members)

    def skip_type_params(self):
        if not self.at('<'):
            return
        depth = 0
        while True:
            tok = self.advance()
            if tok.text == '<':
                depth += 1
            elif tok.text == '>':
                depth -= 1
            elif tok.text == '>>':
                depth -= 2
            if depth <= 0:
                return

    def parse_callable(self, start, modifiers):
        keyword = self.advance().text
        kind = CALLABLE_KINDS[keyword]
        if kind in ('Function', 'Predicate') and self.at('method'):
            self.advance()
        name, name_span = '', None
        if self.peek().kind == 'ident':
            tok = self.advance()
            name, name_span = tok.text, tok.span
        self.skip_type_params()
        params = self.parse_formals()
        outs, result_type = (), None
        if self.at('returns'):
            self.advance()
            outs = self.parse_formals()
        elif self.at(':'):
            self.advance()
            if self.at('(') and self.peek(1).kind == 'ident' and self.at(':', offset=2):
                outs = self.parse_formals()
                result_type = outs[0].type if outs else None
            else:
                result_type = self.parse_type()
        specs = self.parse_specs()
        body = None
        if self.at('{'):
            if kind in ('Function', 'Predicate'):
                body = self.parse_function_body()
            else:
                body = self.parse_block()
            if self.at('by') and self.at('method', offset=1):
                self.advance()
                self.advance()
                self.parse_block()
        return CallableDecl(self.span_from(start), kind, name, name_span, modifiers, params,
                            outs, result_type, specs, body)

    def parse_function_body(self):
        start = self.expect('{')
        expr = self.parse_expression()
        self.expect('}')
        return FunctionBody(self.span_from(start), expr)

    def parse_formals(self):
        self.expect('(')
        formals = []
        while not self.at(')'):
            start = self.peek()
            ghost = False
            while self.at('ghost', 'nameonly', 'older', 'new'):
                ghost = ghost or self.advance().text == 'ghost'
            name = self.expect_ident('parameter name')
            self.expect(':')
            type_ = self.parse_type()
            if self.at(':='):
                self.advance()
                self.parse_expression()
            formals.append(Binding(self.span_from(start), name.text, name.span, type_, ghost))
            if not self.at(')'):
                self.expect(',', "',' or ')'")
        self.advance()
        return tuple(formals)

    def parse_specs(self):
        specs = []
        while self.at(*SPEC_KEYWORDS):
            specs.append(self.parse_spec_clause())
        return tuple(specs)

    def parse_spec_clause(self):
        start = self.advance()
        saved = self.pos, self._last
        try:
            if start.text in ('reads', 'modifies', 'decreases') and self.at('*'):
                self.advance()
            else:
                self.parse_expression()
                while self.at(','):
                    self.advance()
                    self.parse_expression()
        except ParseError:
            self.pos, self._last = saved
            self.skip_spec_tokens()
        return SpecClause(self.span_from(start), start.text)

    def skip_spec_tokens(self):
        while not self.at_eof():
            tok = self.peek()
            if tok.kind == 'keyword' and (tok.text in SPEC_KEYWORDS or tok.text in DECL_STARTS):
                return
            if self.at('{', '}', ';'):
                return
            if self.at('(', '['):
                self.skip_balanced()
            else:
                self.advance()

    def parse_class(self, start, modifiers):
        keyword = self.advance().text
        name = self.expect_ident('class name')
        self.skip_type_params()
        extends = []
        if self.at('extends'):
            self.advance()
            extends.append(self.parse_type().name)
            while self.at(','):
                self.advance()
                extends.append(self.parse_type().name)
        members = self.parse_members()
        return ClassDecl(self.span_from(start), keyword.capitalize(), name.text, name.span,
                         modifiers, tuple(extends), members)

    def parse_datatype(self, start):
        self.advance()
        name = self.expect_ident('datatype name')
        self.skip_type_params()
        self.expect('=')
        if self.at('|'):
            self.advance()
        ctors = [self.parse_ctor()]
        while self.at('|'):
            self.advance()
            ctors.append(self.parse_ctor())
        members = self.parse_members() if self.at('{') else ()
        return DatatypeDecl(self.span_from(start), 'Datatype', name.text, name.span,
                            tuple(ctors), members)

    def parse_ctor(self):
        start = self.peek()
        if self.at('ghost'):
            self.advance()
        name = self.expect_ident('constructor name')
        params = []
        if self.at('('):
            self.advance()
            while not self.at(')'):
                param_start = self.peek()
                ghost = False
                if self.at('ghost'):
                    self.advance()
                    ghost = True
                param_name, param_span = '', None
                if self.peek().kind == 'ident' and self.at(':', offset=1):
                    tok = self.advance()
                    param_name, param_span = tok.text, tok.span
                    self.advance()
                type_ = self.parse_type()
                params.append(Binding(self.span_from(param_start), param_name, param_span,
                                      type_, ghost))
                if not self.at(')'):
                    self.expect(',', "',' or ')'")
            self.advance()
        return DatatypeCtorDecl(self.span_from(start), name.text, name.span, tuple(params))

    def parse_const(self, start, modifiers):
        self.advance()
        name = self.expect_ident('constant name')
        type_ = value = None
        if self.at(':'):
            self.advance()
            type_ = self.parse_type()
        if self.at(':='):
            self.advance()
            value = self.parse_expression()
        if self.at(';'):
            self.advance()
        return ConstDecl(self.span_from(start), 'Const', name.text, name.span, modifiers,
                         type_, value)

    def parse_field(self, start, modifiers):
        self.advance()
        bindings = [self.parse_binding()]
        while self.at(','):
            self.advance()
            bindings.append(self.parse_binding())
        if self.at(';'):
            self.advance()
        return FieldDecl(self.span_from(start), 'Field', tuple(bindings), modifiers)

    def parse_binding(self):
        name = self.expect_ident('variable name')
        type_ = None
        if self.at(':'):
            self.advance()
            type_ = self.parse_type()
        return Binding(self.span_from(name), name.text, name.span, type_)

    # types

    def parse_type(self) -> TypeSyntax:
        start = self.peek()
        if self.at('('):
            self.advance()
            args = []
            while not self.at(')'):
                args.append(self.parse_type())
                if not self.at(')'):
                    self.expect(',', "',' or ')'")
            self.advance()
            type_ = TypeSyntax(self.span_from(start), '()', tuple(args))
        else:
            if start.kind not in ('ident', 'keyword'):
                raise self.error('expected type', expected='type')
            self.advance()
            name = start.text
            while self.at('.') and self.peek(1).kind == 'ident':
                self.advance()
                name += '.' + self.advance().text
            args, end = (), self._last.span.end
            if self.at('<'):
                args, end = self.parse_type_args()
            type_ = TypeSyntax(SourceSpan(start.span.start, end, start.span.line,
                                          start.span.column), name, args)
        if self.at('->', '-->', '~>'):
            self.advance()
            result = self.parse_type()
            type_ = TypeSyntax(self.span_from(start), '->', (type_, result))
        return type_

    def parse_type_args(self):
        self.advance()
        args = [self.parse_type()]
        while self.at(','):
            self.advance()
            args.append(self.parse_type())
        return tuple(args), self._close_angle()

    def _close_angle(self):
        tok = self.peek()
        if self.at('>'):
            self.advance()
            return tok.span.end
        if self.at('>>'):
            if self._half_gt:
                self._half_gt = False
                self.advance()
                return tok.span.end
            self._half_gt = True
            return tok.span.start + 1
        raise self.error("expected '>'", expected='>')

    # statements

    def parse_block(self) -> Block:
        start = self.expect('{')
        stmts = []
        while not self.at('}'):
            if self.at_eof():
                raise self.error("expected '}'", expected='}')
            stmts.append(self.parse_stmt())
        self.advance()
        return Block(self.span_from(start), tuple(stmts))

    def parse_stmt(self) -> Stmt:
        tok = self.peek()
        word = tok.text if tok.kind == 'keyword' else None
        if self.at('{'):
            return self.parse_block()
        if word == 'var':
            return self.parse_var_decl()
        if word == 'if':
            return self.parse_if()
        if word == 'while':
            return self.parse_while()
        if word == 'for':
            return self.parse_for()
        if word == 'match':
            return self.parse_match()
        if word in ('break', 'continue'):
            return self.parse_jump()
        if word == 'return':
            self.advance()
            values = () if self.at(';') else self.parse_rhs_list()
            self.expect(';')
            return Return(self.span_from(tok), values)
        if word == 'print':
            self.advance()
            args = self.parse_expression_list()
            self.expect(';')
            return Print(self.span_from(tok), args)
        if word in OPAQUE_STMT_WORDS:
            return self.skip_opaque_stmt(self.advance())
        if self.at(';'):
            self.advance()
            return OpaqueStmt(self.span_from(tok), 'empty')
        return self.parse_update()

    def skip_opaque_stmt(self, start):
        kind = start.text
        if kind == 'label':
            self.expect_ident('label name')
            self.expect(':')
            return OpaqueStmt(self.span_from(start), kind)
        if kind in ('calc', 'forall'):
            while not self.at('{'):
                self.advance()
            self.skip_balanced()
            return OpaqueStmt(self.span_from(start), kind)
        while True:
            if self.at_eof():
                raise self.error("expected ';'", expected=';')
            if self.at(';'):
                self.advance()
                break
            if self.at('}'):
                break
            if self.at('by') and self.at('{', offset=1):
                self.advance()
                self.skip_balanced()
                break
            if self.at(*OPENERS):
                self.skip_balanced()
            else:
                self.advance()
        return OpaqueStmt(self.span_from(start), kind)

    def parse_var_decl(self):
        start = self.advance()
        if self.at('('):
            return self.skip_opaque_stmt(start)
        bindings = [self.parse_binding()]
        while self.at(','):
            self.advance()
            bindings.append(self.parse_binding())
        values = ()
        if self.at(':='):
            self.advance()
            values = self.parse_rhs_list()
        elif self.at(':|', ':-'):
            return self.skip_opaque_stmt(start)
        self.expect(';')
        return VarDecl(self.span_from(start), tuple(bindings), values)

    def parse_rhs(self):
        if self.at('*'):
            tok = self.advance()
            return OpaqueExpr(tok.span, 'havoc')
        return self.parse_expression()

    def parse_rhs_list(self):
        values = [self.parse_rhs()]
        while self.at(','):
            self.advance()
            values.append(self.parse_rhs())
        return tuple(values)

    def parse_expression_list(self):
        values = [self.parse_expression()]
        while self.at(','):
            self.advance()
            values.append(self.parse_expression())
        return tuple(values)

    def parse_update(self):
        start = self.peek()
        first = self.parse_expression()
        if self.at(';'):
            if not isinstance(first, FunctionCall):
                raise self.error("expected ':=' or a call statement", expected=':=')
            self.advance()
            return CallStmt(self.span_from(start), first)
        lhs = [first]
        while self.at(','):
            self.advance()
            lhs.append(self.parse_expression())
        if self.at(':|', ':-'):
            return self.skip_opaque_stmt(start)
        self.expect(':=', "':='")
        rhs = self.parse_rhs_list()
        self.expect(';')
        return Assign(self.span_from(start), tuple(lhs), rhs)

    def parse_guard(self):
        if self.at('*'):
            tok = self.advance()
            return OpaqueExpr(tok.span, 'nondeterministic')
        return self.parse_expression()

    def _at_alternative(self):
        return self.at('case') or (self.at('{') and self.at('case', offset=1))

    def skip_alternative(self, start):
        if self.at('{'):
            self.skip_balanced()
        else:
            while self.at('case'):
                self.advance()
                self.parse_expression()
                self.expect('=>')
                while not self.at('case', '}') and not self.at_eof():
                    self.parse_stmt()
        return OpaqueStmt(self.span_from(start), start.text)

    def parse_if(self):
        start = self.advance()
        if self._at_alternative():
            return self.skip_alternative(start)
        guard = self.parse_guard()
        then = self.parse_block()
        else_, else_span = None, None
        if self.at('else'):
            else_span = self.advance().span
            else_ = self.parse_if() if self.at('if') else self.parse_block()
        return If(self.span_from(start), guard, then, else_, else_span)

    def parse_while(self):
        start = self.advance()
        if self._at_alternative():
            return self.skip_alternative(start)
        guard = self.parse_guard()
        specs = self.parse_specs()
        body = self.parse_block() if self.at('{') else None
        return While(self.span_from(start), guard, specs, body)

    def parse_for(self):
        start = self.advance()
        index = self.parse_binding()
        self.expect(':=')
        lo = self.parse_expression()
        if not self.at('to', 'downto'):
            raise self.error("expected 'to' or 'downto'", expected='to')
        downto = self.advance().text == 'downto'
        hi = self.parse_guard()
        specs = self.parse_specs()
        body = self.parse_block() if self.at('{') else None
        return For(self.span_from(start), index, lo, hi, downto, specs, body)

    def parse_match(self):
        start = self.advance()
        scrutinee = self.parse_expression()
        braced = self.at('{')
        if braced:
            self.advance()
        cases = []
        while self.at('case'):
            cases.append(self.parse_case())
        if braced:
            self.expect('}')
        return Match(self.span_from(start), scrutinee, tuple(cases), braced)

    def _skip_pattern(self):
        first = self.peek()
        depth = 0
        while not (depth == 0 and self.at('=>')):
            tok = self.advance()
            if tok.kind == 'op' and tok.text in OPENERS:
                depth += 1
            elif tok.kind == 'op' and tok.text in CLOSERS:
                depth -= 1
        return self.span_from(first)

    def parse_case(self):
        start = self.advance()
        pattern_span = self._skip_pattern()
        arrow = self.advance()
        stmts = []
        while not self.at('case', '}') and not self.at_eof():
            stmts.append(self.parse_stmt())
        if stmts:
            body_span = SourceSpan(stmts[0].span.start, stmts[-1].span.end,
                                   stmts[0].span.line, stmts[0].span.column)
        else:
            body_span = SourceSpan(arrow.span.end, arrow.span.end, arrow.span.line,
                                   arrow.span.column + len(arrow.text))
        return MatchCase(self.span_from(start), pattern_span.text(self.text), pattern_span,
                         tuple(stmts), body_span)

    def parse_jump(self):
        start = self.advance()
        label = None
        if self.peek().kind == 'ident':
            label = self.advance().text
        while self.at('break'):
            self.advance()
        self.expect(';')
        node = Break if start.text == 'break' else Continue
        return node(self.span_from(start), label)

    # expressions, lowest precedence first

    def parse_expression(self) -> Expr:
        return self.parse_equivalence()

    def _binary(self, lhs, operand):
        op = self.advance()
        rhs = operand()
        return BinaryOp(self.span_from(lhs.span), lhs, op.text, op.span, rhs)

    def parse_equivalence(self):
        lhs = self.parse_implication()
        while self.at('<==>'):
            lhs = self._binary(lhs, self.parse_implication)
        return lhs

    def parse_implication(self):
        lhs = self.parse_logical()
        if self.at('==>'):
            return self._binary(lhs, self.parse_implication)
        while self.at('<=='):
            lhs = self._binary(lhs, self.parse_logical)
        return lhs

    def parse_logical(self):
        if self.at('&&', '||'):
            self.advance()
        lhs = self.parse_relational()
        while self.at('&&', '||'):
            lhs = self._binary(lhs, self.parse_relational)
        return lhs

    def parse_relational(self):
        lhs = self.parse_shift()
        while self.at(*RELATIONAL):
            lhs = self._binary(lhs, self.parse_shift)
        return lhs

    def parse_shift(self):
        lhs = self.parse_additive()
        while self.at('<<', '>>'):
            lhs = self._binary(lhs, self.parse_additive)
        return lhs

    def parse_additive(self):
        lhs = self.parse_multiplicative()
        while self.at('+', '-'):
            lhs = self._binary(lhs, self.parse_multiplicative)
        return lhs

    def parse_multiplicative(self):
        lhs = self.parse_bitwise()
        while self.at('*', '/', '%'):
            lhs = self._binary(lhs, self.parse_bitwise)
        return lhs

    def _at_bitwise(self):
        if self.at('&', '^'):
            return True
        return self.at('|') and self._no_bar == 0

    def parse_bitwise(self):
        lhs = self.parse_as()
        while self._at_bitwise():
            lhs = self._binary(lhs, self.parse_as)
        return lhs

    def parse_as(self):
        operand = self.parse_unary()
        while self.at('as', 'is'):
            op = self.advance().text
            type_ = self.parse_type()
            operand = AsExpr(self.span_from(operand.span), operand, op, type_)
        return operand

    def parse_unary(self):
        if self.at('-', '!'):
            op = self.advance()
            operand = self.parse_unary()
            return UnaryOp(self.span_from(op), op.text, op.span, operand)
        return self.parse_postfix()

    def parse_args(self):
        self.expect('(')
        args = []
        while not self.at(')'):
            args.append(self.parse_expression())
            if not self.at(')'):
                self.expect(',', "',' or ')'")
        self.advance()
        return tuple(args)

    def parse_postfix(self):
        expr = self.parse_primary()
        while True:
            if self.at('.'):
                self.advance()
                tok = self.peek()
                if tok.kind == 'int':
                    self.advance()
                    expr = TupleAccess(self.span_from(expr.span), expr, int(tok.text), tok.span)
                elif tok.kind in ('ident', 'keyword'):
                    self.advance()
                    if self.at('('):
                        args = self.parse_args()
                        expr = FunctionCall(self.span_from(expr.span), expr, tok.text, tok.span,
                                            args)
                    else:
                        expr = FieldAccess(self.span_from(expr.span), expr, tok.text, tok.span)
                elif self.at('('):
                    self.skip_balanced()
                    expr = OpaqueExpr(self.span_from(expr.span), 'update')
                else:
                    raise self.error('expected member name', expected='identifier')
            elif self.at('['):
                expr = self.parse_selection(expr)
            elif self.at('(') and isinstance(expr, Identifier):
                args = self.parse_args()
                expr = FunctionCall(self.span_from(expr.span), None, expr.name, expr.span, args)
            elif self.at('('):
                self.skip_balanced()
                expr = OpaqueExpr(self.span_from(expr.span), 'apply')
            else:
                return expr

    def parse_selection(self, receiver):
        self.advance()
        if self.at('..'):
            self.advance()
            hi = None if self.at(']') else self.parse_expression()
            self.expect(']')
            return Slice(self.span_from(receiver.span), receiver, None, hi)
        first = self.parse_expression()
        if self.at('..'):
            self.advance()
            hi = None if self.at(']') else self.parse_expression()
            self.expect(']')
            return Slice(self.span_from(receiver.span), receiver, first, hi)
        if self.at(']'):
            self.advance()
            return IndexExpr(self.span_from(receiver.span), receiver, first)
        kind = 'update' if self.at(':=') else 'selection'
        while not self.at(']'):
            if self.at(*OPENERS):
                self.skip_balanced()
            else:
                self.advance()
        self.advance()
        return OpaqueExpr(self.span_from(receiver.span), kind)

    def _lambda_follows_paren(self):
        depth = 0
        offset = 0
        while True:
            tok = self.peek(offset)
            if tok.kind == 'eof':
                return False
            if tok.kind == 'op' and tok.text in OPENERS:
                depth += 1
            elif tok.kind == 'op' and tok.text in CLOSERS:
                depth -= 1
                if depth == 0:
                    return self.at('=>', offset=offset + 1)
            offset += 1

    def parse_primary(self) -> Expr:
        tok = self.peek()
        kind, text = tok.kind, tok.text
        if kind == 'int':
            self.advance()
            digits = text.replace('_', '')
            value = int(digits, 16) if digits.startswith('0x') else int(digits)
            return Literal(tok.span, 'int', value, text)
        if kind == 'real':
            self.advance()
            return Literal(tok.span, 'real', Decimal(text.replace('_', '')), text)
        if kind == 'char':
            self.advance()
            return Literal(tok.span, 'char', text[1:-1], text)
        if kind == 'string':
            self.advance()
            value = text[2:-1] if text.startswith('@') else text[1:-1]
            return Literal(tok.span, 'string', value, text)
        if kind == 'ident':
            self.advance()
            if self.at('=>'):
                self.advance()
                self.parse_expression()
                return OpaqueExpr(self.span_from(tok), 'lambda')
            return Identifier(tok.span, text)
        if kind == 'keyword':
            return self.parse_keyword_primary(tok)
        if self.at('('):
            return self.parse_paren()
        if self.at('['):
            self.advance()
            elements = self._display_elements(']')
            return CollectionDisplay(self.span_from(tok), 'seq', elements)
        if self.at('{'):
            self.advance()
            elements = self._display_elements('}')
            return CollectionDisplay(self.span_from(tok), 'set', elements)
        if self.at('|'):
            self.advance()
            self._no_bar += 1
            try:
                operand = self.parse_expression()
            finally:
                self._no_bar -= 1
            self.expect('|')
            return Cardinality(self.span_from(tok), operand)
        raise self.error('expected expression', expected='expression')

    def _display_elements(self, closer):
        elements = []
        while not self.at(closer):
            elements.append(self.parse_expression())
            if not self.at(closer):
                self.expect(',', f"',' or {closer!r}")
        self.advance()
        return tuple(elements)

    def parse_paren(self):
        start = self.peek()
        if self._lambda_follows_paren():
            self.skip_balanced()
            self.advance()
            self.parse_expression()
            return OpaqueExpr(self.span_from(start), 'lambda')
        self.advance()
        if self.at(')'):
            self.advance()
            return TupleDisplay(self.span_from(start), ())
        inner = self.parse_expression()
        if self.at(','):
            elements = [inner]
            while self.at(','):
                self.advance()
                elements.append(self.parse_expression())
            self.expect(')')
            return TupleDisplay(self.span_from(start), tuple(elements))
        self.expect(')')
        return ParenExpr(self.span_from(start), inner)

    def parse_keyword_primary(self, tok):
        text = tok.text
        if text in ('true', 'false'):
            self.advance()
            return Literal(tok.span, 'bool', text == 'true', text)
        if text == 'null':
            self.advance()
            return Literal(tok.span, 'null', None, text)
        if text == 'this':
            self.advance()
            return This(tok.span)
        if text == 'new':
            return self.parse_new()
        if text == 'if':
            self.advance()
            guard = self.parse_expression()
            self.expect('then')
            then = self.parse_expression()
            self.expect('else')
            else_ = self.parse_expression()
            return IfThenElse(self.span_from(tok), guard, then, else_)
        if text == 'var':
            return self.parse_let()
        if text == 'match':
            return self.parse_match_expression()
        if text == 'multiset' and self.at('{', offset=1):
            self.advance()
            self.advance()
            elements = self._display_elements('}')
            return CollectionDisplay(self.span_from(tok), 'multiset', elements)
        if text == 'multiset' and self.at('(', offset=1):
            self.advance()
            args = self.parse_args()
            return FunctionCall(self.span_from(tok), None, text, tok.span, args)
        if text == 'map' and self.at('[', offset=1):
            return self.parse_map_display()
        if text in ('iset', 'imap') and self.at('{', '[', offset=1):
            self.advance()
            self.skip_balanced()
            return OpaqueExpr(self.span_from(tok), text)
        if text in ('forall', 'exists', 'set', 'map', 'iset', 'imap'):
            return self.parse_binder_expression()
        if text == 'seq':
            self.advance()
            self.skip_type_params()
            self.skip_balanced()
            return OpaqueExpr(self.span_from(tok), 'seq')
        if text in ('old', 'fresh', 'unchanged', 'allocated'):
            self.advance()
            if self.at('@'):
                self.advance()
                self.expect_ident('label name')
            self.skip_balanced()
            return OpaqueExpr(self.span_from(tok), text)
        if text in ('assert', 'assume', 'expect', 'reveal', 'calc'):
            self.skip_opaque_stmt(self.advance())
            self.parse_expression()
            return OpaqueExpr(self.span_from(tok), text)
        raise self.error('expected expression', expected='expression')

    def parse_new(self):
        start = self.advance()
        type_ = self.parse_type()
        dims, args, initializer, is_array = (), (), (), False
        if self.at('['):
            is_array = True
            self.advance()
            dims = () if self.at(']') else self.parse_expression_list()
            self.expect(']')
            if self.at('('):
                initializer = self.parse_args()
            elif self.at('['):
                display_start = self.advance()
                elements = self._display_elements(']')
                initializer = (CollectionDisplay(self.span_from(display_start), 'seq', elements),)
        elif self.at('('):
            args = self.parse_args()
        return New(self.span_from(start), type_, dims, args, initializer, is_array)

    def parse_let(self):
        start = self.advance()
        bindings = [self.parse_binding()]
        while self.at(','):
            self.advance()
            bindings.append(self.parse_binding())
        if self.at(':|'):
            self.advance()
            self.parse_expression()
            self.expect(';')
            self.parse_expression()
            return OpaqueExpr(self.span_from(start), 'let')
        self.expect(':=', "':='")
        values = self.parse_expression_list()
        self.expect(';')
        body = self.parse_expression()
        return LetExpr(self.span_from(start), tuple(bindings), values, body)

    def parse_match_expression(self):
        start = self.advance()
        self.parse_expression()
        if self.at('{'):
            self.skip_balanced()
        else:
            while self.at('case'):
                self.advance()
                self._skip_pattern()
                self.advance()
                self.parse_expression()
        return OpaqueExpr(self.span_from(start), 'match')

    def parse_map_display(self):
        start = self.advance()
        self.advance()
        entries = []
        while not self.at(']'):
            key = self.parse_expression()
            self.expect(':=')
            value = self.parse_expression()
            entries.append(MapEntry(self.span_from(key.span), key, value))
            if not self.at(']'):
                self.expect(',', "',' or ']'")
        self.advance()
        return CollectionDisplay(self.span_from(start), 'map', tuple(entries))

    def parse_binder_expression(self):
        start = self.advance()
        while not self.at('|', '::'):
            if self.at_eof():
                raise self.error("expected '::'", expected='::')
            if self.at(*OPENERS):
                self.skip_balanced()
            else:
                self.advance()
        if self.at('|'):
            self.advance()
            self.parse_expression()
        if self.at('::'):
            self.advance()
            self.parse_expression()
        return OpaqueExpr(self.span_from(start), start.text)


def parse_program(text: str) -> SyntaxTree:
    tree = Parser(text).parse_program()
    logger.debug(f"Parsed {len(text)} characters into {len(tree.declarations)} declarations")
    return tree


# -------------------------------------------------------------------- printer

def splice(source_text: str, span, replacement_text: str) -> str:
    start, end = (span.start, span.end) if isinstance(span, SourceSpan) else span
    if not 0 <= start <= end <= len(source_text):
        raise SpanOutOfBounds(f"span [{start}, {end}) outside text of length {len(source_text)}")
    return source_text[:start] + replacement_text + source_text[end:]


def apply_edits(source_text: str, edits) -> str:
    """Applies pairwise disjoint edits right to left so earlier offsets stay valid."""
    ordered = sorted(edits, key=lambda e: (e.span.start, e.span.end))
    for before, after in zip(ordered, ordered[1:]):
        if before.span.end > after.span.start:
            raise SpanOutOfBounds(f"overlapping edits at offsets {before.span.start} and "
                                  f"{after.span.start}")
    text = source_text
    for edit in reversed(ordered):
        text = splice(text, edit.span, edit.replacement)
    return text


def print_program(tree: SyntaxTree) -> str:
    text = ''.join(tok.trivia + tok.text for tok in tree.tokens) + tree.trailing_trivia
    return apply_edits(text, tree.edits) if tree.edits else text


# binary operator precedence levels, loosest first
PRECEDENCE = {
    '<==>': 1, '==>': 2, '<==': 2, '&&': 3, '||': 3,
    '==': 4, '!=': 4, '<': 4, '<=': 4, '>': 4, '>=': 4, 'in': 4, '!in': 4, '!!': 4,
    '<<': 5, '>>': 5, '+': 6, '-': 6, '*': 7, '/': 7, '%': 7, '&': 8, '|': 8, '^': 8,
}


def needs_parens(child_op: str, parent_op: str, side: str) -> bool:
    """Whether a `child_op` expression must be parenthesized as the `side` operand of `parent_op`."""
    child, parent = PRECEDENCE[child_op], PRECEDENCE[parent_op]
    if child != parent:
        return child < parent
    # relational operators chain; mixing at these other levels needs parentheses
    if parent == 4:
        return False
    if child_op != parent_op and parent in (2, 3, 8):
        return True
    if parent_op == '==>':
        return side == 'lhs'
    return side == 'rhs'
