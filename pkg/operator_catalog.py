"""Scanner: finds every mutation target of the 32 operators in a resolved Dafny program.

Only compiled callables with a body are scanned. Specification clauses,
assertions and other opaque nodes are never visited, so no edit ever touches them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from itertools import combinations

from dafny_syntax import (
    AsExpr, Assign, BinaryOp, Block, Break, CallStmt, CallableDecl, Cardinality, ClassDecl,
    CollectionDisplay, Continue, DatatypeDecl, FieldAccess, For, FunctionBody, FunctionCall,
    Identifier, If, IfThenElse, IndexExpr, LetExpr, Literal, MapEntry, Match, MatchCase, New,
    OpaqueExpr, OpaqueStmt, ParenExpr, Print, Return, SourceSpan, Slice, SpecClause, This,
    TupleAccess, TupleDisplay, UnaryOp, VarDecl, While, needs_parens,
)
from resolver import INT, ResolvedProgram, flatten

logger = logging.getLogger(__name__)

OPERATORS = (
    'AMR', 'BBR', 'BOR', 'CBE', 'CBR', 'CIR', 'DCR', 'EVR', 'FAR', 'LBI', 'LSR', 'LVR', 'MAP',
    'MCR', 'MMR', 'MNR', 'MRR', 'MVR', 'ODL', 'PRV', 'SAR', 'SDL', 'SLD', 'SWS', 'SWV', 'TAR',
    'THD', 'THI', 'UOD', 'UOI', 'VDL', 'VER',
)

OPERATOR_NAMES = {
    'AMR': 'Accessor Method Replacement',
    'BBR': 'Boolean-Binary Expression Replacement',
    'BOR': 'Binary Operator Replacement',
    'CBE': 'Conditional Block Extraction',
    'CBR': 'Case Block Replacement',
    'CIR': 'Collection Initialization Replacement',
    'DCR': 'Datatype Constructor Replacement',
    'EVR': 'Expression Value Replacement',
    'FAR': 'Field Access Replacement',
    'LBI': 'Loop Break Insertion',
    'LSR': 'Loop Statement Replacement',
    'LVR': 'Literal Value Replacement',
    'MAP': 'Method Argument Propagation',
    'MCR': 'Method Call Replacement',
    'MMR': 'Modifier Method Replacement',
    'MNR': 'Method Naked Receiver',
    'MRR': 'Method Return Value Replacement',
    'MVR': 'Method-Variable Replacement',
    'ODL': 'Operator Deletion',
    'PRV': 'Polymorphic Reference Replacement',
    'SAR': 'Argument Swapping',
    'SDL': 'Statement Deletion',
    'SLD': 'Subsequence Limit Deletion',
    'SWS': 'Statement Swapping',
    'SWV': 'Variable Declaration Swapping',
    'TAR': 'Tuple Access Replacement',
    'THD': 'This Keyword Deletion',
    'THI': 'This Keyword Insertion',
    'UOD': 'Unary Operator Deletion',
    'UOI': 'Unary Operator Insertion',
    'VDL': 'Variable Deletion',
    'VER': 'Variable Expression Replacement',
}

SUBSUMES = {
    'BOR': ('AOR', 'ROR', 'COR', 'LOR', 'SOR'),
    'UOI': ('AOI', 'COI', 'LOI'),
    'UOD': ('AOD', 'COD', 'LOD'),
}

EXCLUDED_OPERATORS = {
    'ORU': "Dafny's unary operators (- for numbers, ! for booleans and bit-vectors) never "
           "share a type, so one cannot replace the other.",
    'Initialization': 'a Dafny class declares at most one constructor, so there is no empty '
                      'constructor to fall back to.',
    'Method Expression': 'Dafny has almost no built-in methods on strings, arrays or numbers.',
    'String Methods': 'Dafny strings are sequences, not objects, and carry no methods.',
    'Argument List Mutation': 'Dafny callables take a fixed number of arguments.',
    'Inheritance': 'Dafny has no method overriding, variable hiding or super keyword.',
    'Parent/child type replacement': 'replacing child types with parent types (or back) yields '
                                     'only invalid or equivalent mutants in Dafny.',
    'Static keyword insertion/deletion': 'toggling static on Dafny members breaks every call '
                                         'site that uses the other form.',
}

ARITHMETIC_GROUPS = (('+', '-', '*'), ('/', '%'))
RELATIONAL = ('==', '!=', '<', '<=', '>', '>=')
CONDITIONAL = ('&&', '||', '==>', '<==', '<==>')
BITWISE = ('&', '|', '^')
SHIFT = ('<<', '>>')
PRIMITIVE_KINDS = ('Bool', 'Int', 'Nat', 'Real', 'BitVector')
ATOMIC = (Identifier, Literal, This, ParenExpr, FieldAccess, TupleAccess, IndexExpr, Slice,
          FunctionCall, CollectionDisplay, TupleDisplay, Cardinality)


class UnknownOperator(ValueError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown mutation operator {name!r}; valid operators: "
                         f"{', '.join(OPERATORS)}")


def parse_operator_filter(text) -> tuple:
    """Turns 'BOR,sdl' (or an iterable of names) into a validated tuple of operator ids."""
    if text is None:
        return OPERATORS
    names = text.split(',') if isinstance(text, str) else list(text)
    selected = []
    for name in names:
        name = name.strip().upper()
        if not name:
            continue
        if name not in OPERATORS:
            raise UnknownOperator(name)
        if name not in selected:
            selected.append(name)
    return tuple(sorted(selected))


@dataclass(frozen=True)
class Rewrite:
    span: SourceSpan
    original: str
    replacement: str


@dataclass(frozen=True)
class MutationTarget:
    operator: str
    edits: tuple
    description: str
    enclosing_callable: str
    callable_has_ensures: bool = False

    @property
    def span(self) -> SourceSpan:
        return self.edits[0].span

    @property
    def original(self):
        return ' | '.join(e.original for e in self.edits)

    @property
    def replacement(self):
        return ' | '.join(e.replacement for e in self.edits)

    @property
    def is_structured(self):
        return len(self.edits) > 1

    @property
    def is_identity(self):
        return all(e.original == e.replacement for e in self.edits)


@dataclass
class Site:
    expr: object
    parent: object
    stmt: object
    lhs: bool = False
    position: str | None = None


@dataclass
class CallableContext:
    decl: CallableDecl
    class_name: str | None
    label: str
    sites: list = field(default_factory=list)
    statements: list = field(default_factory=list)
    blocks: list = field(default_factory=list)
    loops: list = field(default_factory=list)
    matches: list = field(default_factory=list)

    @property
    def is_void(self):
        return not self.decl.outs and self.decl.kind in ('Method', 'Constructor')


class Scanner:
    def __init__(self, program: ResolvedProgram):
        self.program = program
        self.source = program.tree.source_text
        self.parents = {}
        self.contexts = []
        self.spec_spans = []
        self._collect()

    # traversal

    def _collect(self):
        for decl in flatten(self.program.tree.declarations):
            if isinstance(decl, (ClassDecl, DatatypeDecl)):
                for member in decl.members:
                    if isinstance(member, CallableDecl):
                        self._add_callable(member, decl.name)
            elif isinstance(decl, CallableDecl):
                self._add_callable(decl, None)

    def _add_callable(self, decl: CallableDecl, owner):
        self.spec_spans.extend(spec.span for spec in decl.specs)
        if decl.is_ghost or decl.body is None:
            return
        name = decl.name or 'constructor'
        context = CallableContext(decl, owner, f"{owner}.{name}" if owner else name)
        self._context = context
        if isinstance(decl.body, Block):
            self._visit_stmts(decl.body.stmts, decl.body)
        elif isinstance(decl.body, FunctionBody):
            self._visit_expr(decl.body.expr, decl.body, None, position='return')
        self.contexts.append(context)

    def _visit_stmts(self, stmts, owner):
        self._context.blocks.append((owner, stmts))
        for stmt in stmts:
            self._visit_stmt(stmt, owner)

    def _visit_stmt(self, stmt, owner):
        self.parents[stmt] = owner
        self._context.statements.append((stmt, owner))
        visit = self._visit_expr
        if isinstance(stmt, VarDecl):
            for value in stmt.values:
                visit(value, stmt, stmt, position='init')
        elif isinstance(stmt, Assign):
            for lhs in stmt.lhs:
                visit(lhs, stmt, stmt, lhs=True)
            for rhs in stmt.rhs:
                visit(rhs, stmt, stmt, position='rhs')
        elif isinstance(stmt, CallStmt):
            visit(stmt.call, stmt, stmt, position='call')
        elif isinstance(stmt, If):
            visit(stmt.guard, stmt, stmt, position='guard')
            self._visit_stmts(stmt.then.stmts, stmt.then)
            if isinstance(stmt.else_, Block):
                self._visit_stmts(stmt.else_.stmts, stmt.else_)
            elif isinstance(stmt.else_, If):
                self._visit_stmt(stmt.else_, stmt)
        elif isinstance(stmt, (While, For)):
            if isinstance(stmt, While):
                visit(stmt.guard, stmt, stmt, position='guard')
            else:
                visit(stmt.lo, stmt, stmt)
                visit(stmt.hi, stmt, stmt)
            self._context.loops.append(stmt)
            if stmt.body is not None:
                self._visit_stmts(stmt.body.stmts, stmt.body)
        elif isinstance(stmt, Match):
            visit(stmt.scrutinee, stmt, stmt)
            self._context.matches.append(stmt)
            for case in stmt.cases:
                self._visit_stmts(case.body, case)
        elif isinstance(stmt, Return):
            for value in stmt.values:
                visit(value, stmt, stmt, position='return')
        elif isinstance(stmt, Print):
            for arg in stmt.args:
                visit(arg, stmt, stmt)
        elif isinstance(stmt, Block):
            self._visit_stmts(stmt.stmts, stmt)

    def _visit_expr(self, expr, parent, stmt, lhs=False, position=None):
        if isinstance(expr, OpaqueExpr) or expr is None:
            return
        self.parents[expr] = parent
        self._context.sites.append(Site(expr, parent, stmt, lhs, position))
        visit = self._visit_expr
        if isinstance(expr, (FieldAccess, TupleAccess)):
            visit(expr.receiver, expr, stmt, lhs=lhs)
        elif isinstance(expr, IndexExpr):
            visit(expr.receiver, expr, stmt, lhs=lhs)
            visit(expr.index, expr, stmt)
        elif isinstance(expr, FunctionCall):
            if expr.receiver is not None:
                visit(expr.receiver, expr, stmt)
            for arg in expr.args:
                visit(arg, expr, stmt, position='arg')
        elif isinstance(expr, New):
            for e in expr.dims + expr.initializer:
                visit(e, expr, stmt)
            for arg in expr.args:
                visit(arg, expr, stmt, position='arg')
        elif isinstance(expr, CollectionDisplay) and expr.flavor == 'map':
            for entry in expr.elements:
                visit(entry.key, expr, stmt)
                visit(entry.value, expr, stmt)
        else:
            for child in expr.children():
                if _is_expr(child):
                    visit(child, expr, stmt)

    # helpers

    def text(self, node_or_span):
        span = node_or_span if isinstance(node_or_span, SourceSpan) else node_or_span.span
        return self.source[span.start:span.end]

    def rewrite(self, node_or_span, replacement) -> Rewrite:
        span = node_or_span if isinstance(node_or_span, SourceSpan) else node_or_span.span
        return Rewrite(span, self.text(span), replacement)

    def target(self, op, context, edits, description) -> MutationTarget:
        if isinstance(edits, Rewrite):
            edits = (edits,)
        return MutationTarget(op, tuple(edits), description, context.label,
                              context.decl.has_ensures)

    def insertion(self, offset, text) -> Rewrite:
        span = self.program.tree.span(offset, offset)
        return Rewrite(span, '', text)

    def in_expression(self, expr):
        return _is_expr(self.parents.get(expr))

    def operand_text(self, expr, into):
        """Source text of ``expr`` ready to stand where ``into`` stood."""
        text = self.text(expr)
        if isinstance(expr, ATOMIC) or not self.in_expression(into):
            return text
        return f"({text})"

    def type_of(self, expr):
        return self.program.type_of(expr)

    def reads(self, context):
        return [site for site in context.sites if not site.lhs]

    def block_level(self, stmt):
        return isinstance(self.parents.get(stmt), (Block, MatchCase))

    def _in_spec(self, offset):
        return any(span.start < offset < span.end for span in self.spec_spans)

    def targets(self, op) -> list[MutationTarget]:
        if op not in OPERATORS:
            raise UnknownOperator(op)
        found = []
        for context in self.contexts:
            found.extend(getattr(self, f"scan_{op.lower()}")(context))
        kept = [t for t in found if not t.is_identity and not any(
            self._in_spec(e.span.start) or self._in_spec(e.span.end) for e in t.edits)]
        kept.sort(key=lambda t: (t.span.start, t.span.end))
        logger.debug(f"{op}: {len(kept)} targets ({len(found) - len(kept)} dropped)")
        return kept

    def scan(self, operators=OPERATORS) -> list[MutationTarget]:
        result = []
        for op in sorted(operators):
            result.extend(self.targets(op))
        return result

    # binary and unary operators

    def binary_alternatives(self, node: BinaryOp):
        op = node.op
        for group in ARITHMETIC_GROUPS + (CONDITIONAL, BITWISE, SHIFT):
            if op in group:
                return [o for o in group if o != op]
        if op in RELATIONAL:
            if op in ('==', '!='):
                operand_kinds = {self.type_of(node.lhs).kind, self.type_of(node.rhs).kind}
                if not operand_kinds & {'Int', 'Nat', 'Real', 'BitVector', 'Char'}:
                    return ['!=' if op == '==' else '==']
            return [o for o in RELATIONAL if o != op]
        return []

    def render_binary(self, node: BinaryOp, op) -> Rewrite:
        lhs_wrap = isinstance(node.lhs, BinaryOp) and needs_parens(node.lhs.op, op, 'lhs')
        rhs_wrap = isinstance(node.rhs, BinaryOp) and needs_parens(node.rhs.op, op, 'rhs')
        parent = self.parents.get(node)
        outer = isinstance(parent, BinaryOp) and needs_parens(
            op, parent.op, 'lhs' if parent.lhs is node else 'rhs')
        if not (lhs_wrap or rhs_wrap or outer):
            return self.rewrite(node.op_span, op)
        lhs = self.text(node.lhs)
        rhs = self.text(node.rhs)
        text = (f"({lhs})" if lhs_wrap else lhs) \
            + self.source[node.lhs.span.end:node.op_span.start] + op \
            + self.source[node.op_span.end:node.rhs.span.start] \
            + (f"({rhs})" if rhs_wrap else rhs)
        return self.rewrite(node, f"({text})" if outer else text)

    def scan_bor(self, context):
        for site in self.reads(context):
            node = site.expr
            if isinstance(node, BinaryOp):
                for op in self.binary_alternatives(node):
                    yield self.target('BOR', context, self.render_binary(node, op),
                                      f"replace '{node.op}' with '{op}'")

    def scan_bbr(self, context):
        for site in self.reads(context):
            node = site.expr
            if isinstance(node, BinaryOp) and node.op in RELATIONAL + CONDITIONAL:
                for value in ('true', 'false'):
                    yield self.target('BBR', context, self.rewrite(node, value),
                                      f"replace '{self.text(node)}' with {value}")

    def scan_uoi(self, context):
        for site in self.reads(context):
            expr = site.expr
            if isinstance(expr, (Literal, ParenExpr)) or _is_negated_literal(expr):
                continue
            kind = self.type_of(expr).kind
            if kind in ('Int', 'Nat', 'Real'):
                op = '-'
            elif kind in ('Bool', 'BitVector'):
                op = '!'
            else:
                continue
            parent = self.parents.get(expr)
            if isinstance(parent, UnaryOp) and parent.op == op:
                continue
            yield self.target('UOI', context, self.rewrite(expr, f"{op}({self.text(expr)})"),
                              f"insert '{op}' before '{self.text(expr)}'")

    def scan_uod(self, context):
        for site in self.reads(context):
            expr = site.expr
            if isinstance(expr, UnaryOp):
                yield self.target('UOD', context, self.rewrite(expr, self.text(expr.operand)),
                                  f"delete '{expr.op}' from '{self.text(expr)}'")

    # literal and expression values

    def scan_lvr(self, context):
        for site in self.reads(context):
            expr = site.expr
            if _is_negated_literal(expr):
                literal, sign = expr.operand, -1
            elif isinstance(expr, Literal) and not _is_negated_literal(self.parents.get(expr)):
                literal, sign = expr, 1
            else:
                continue
            for value in literal_replacements(literal, sign):
                yield self.target('LVR', context, self.rewrite(expr, value),
                                  f"replace literal {self.text(expr)} with {value}")

    def evr_leaves(self, expr):
        """Bool expressions worth a constant: descends through conditionals, skips relations."""
        if isinstance(expr, ParenExpr):
            yield from self.evr_leaves(expr.inner)
        elif isinstance(expr, BinaryOp) and expr.op in CONDITIONAL:
            yield from self.evr_leaves(expr.lhs)
            yield from self.evr_leaves(expr.rhs)
        elif isinstance(expr, UnaryOp) and expr.op == '!':
            yield from self.evr_leaves(expr.operand)
        elif isinstance(expr, BinaryOp) and expr.op in RELATIONAL + ('in', '!in', '!!'):
            return
        elif not isinstance(expr, Literal) and self.type_of(expr).kind == 'Bool':
            yield expr

    def scan_evr(self, context):
        for site in self.reads(context):
            if site.position not in ('init', 'rhs', 'arg', 'return', 'guard'):
                continue
            expr = site.expr
            if isinstance(expr, Literal) or _is_negated_literal(expr):
                continue
            kind = self.type_of(expr).kind
            if kind == 'Bool':
                for leaf in self.evr_leaves(expr):
                    for value in ('true', 'false'):
                        yield self.target('EVR', context, self.rewrite(leaf, value),
                                          f"replace '{self.text(leaf)}' with {value}")
                continue
            if site.position == 'guard':
                continue
            values = {'Int': ('0', '1', '-1'), 'Nat': ('0', '1'), 'Real': ('0.0',)}.get(kind, ())
            for value in values:
                yield self.target('EVR', context, self.rewrite(expr, value),
                                  f"replace '{self.text(expr)}' with {value}")

    # calls

    def user_calls(self, context):
        for site in self.reads(context):
            expr = site.expr
            if isinstance(expr, FunctionCall):
                signature = self.program.signature_of(expr)
                if signature is not None:
                    yield site, expr, signature

    def scan_mrr(self, context):
        for site, call, signature in self.user_calls(context):
            if not signature.is_method or site.position not in ('init', 'rhs'):
                continue
            stmt = site.stmt
            if not isinstance(stmt, (VarDecl, Assign)):
                continue
            if len(stmt.values if isinstance(stmt, VarDecl) else stmt.rhs) != 1:
                continue
            defaults = [default_literal(t) for t in signature.returns]
            if not defaults or None in defaults:
                continue
            text = ', '.join(defaults)
            yield self.target('MRR', context, self.rewrite(call, text),
                              f"replace call to {call.callee} with {text}")

    def scan_map(self, context):
        for site, call, signature in self.user_calls(context):
            if site.position == 'call' or len(signature.returns) != 1:
                continue
            for arg in call.args:
                if self.type_of(arg) == signature.returns[0]:
                    yield self.target('MAP', context,
                                      self.rewrite(call, self.operand_text(arg, call)),
                                      f"replace call to {call.callee} with argument "
                                      f"'{self.text(arg)}'")

    def scan_mnr(self, context):
        for site, call, signature in self.user_calls(context):
            if site.position == 'call' or call.receiver is None:
                continue
            if isinstance(call.receiver, Identifier) and self.program.symbol_of(call.receiver) is None:
                continue
            if len(signature.returns) == 1 and self.type_of(call.receiver) == signature.returns[0]:
                yield self.target('MNR', context, self.rewrite(call, self.text(call.receiver)),
                                  f"drop call to {call.callee}, keep its receiver")

    def callable_candidates(self, signature):
        if signature.receiver is None:
            pool = [s for s in self.program.table.callables.values() if s.receiver is None]
        elif signature.receiver in self.program.table.classes:
            pool = list(self.program.methods_of(signature.receiver).values())
        else:
            pool = [s for s in self.program.table.callables.values()
                    if s.receiver == signature.receiver]
        return [s for s in pool if s.name != signature.name and not s.is_ghost
                and s.matches(signature)]

    def scan_mcr(self, context):
        for site, call, signature in self.user_calls(context):
            if signature.is_ghost:
                continue
            for other in self.callable_candidates(signature):
                yield self.target('MCR', context, self.rewrite(call.callee_span, other.name),
                                  f"call {other.name} instead of {call.callee}")

    def _accessor_scan(self, op, prefix, context):
        for site, call, signature in self.user_calls(context):
            if signature.receiver is None or not call.callee.lower().startswith(prefix):
                continue
            for other in self.callable_candidates(signature):
                if other.name.lower().startswith(prefix):
                    yield self.target(op, context, self.rewrite(call.callee_span, other.name),
                                      f"call {other.name} instead of {call.callee}")

    def scan_amr(self, context):
        return self._accessor_scan('AMR', 'get', context)

    def scan_mmr(self, context):
        return self._accessor_scan('MMR', 'set', context)

    def scan_mvr(self, context):
        for site, call, signature in self.user_calls(context):
            if site.position == 'call' or len(signature.returns) != 1:
                continue
            for name in self.program.variables_of_type(call, signature.returns[0]):
                yield self.target('MVR', context, self.rewrite(call, name),
                                  f"replace call to {call.callee} with variable {name}")

    def scan_sar(self, context):
        for site in self.reads(context):
            expr = site.expr
            if not isinstance(expr, (FunctionCall, New)) or len(expr.args) < 2:
                continue
            if isinstance(expr, FunctionCall) and expr.receiver is None and expr.callee == 'multiset':
                continue
            for a, b in combinations(expr.args, 2):
                if self.type_of(a) == self.type_of(b):
                    edits = (self.rewrite(a, self.text(b)), self.rewrite(b, self.text(a)))
                    yield self.target('SAR', context, edits,
                                      f"swap arguments '{self.text(a)}' and '{self.text(b)}'")

    # collections, constructors, datatypes

    def scan_cir(self, context):
        empty = {'seq': '[]', 'set': '{}', 'multiset': 'multiset{}', 'map': 'map[]'}
        for site in self.reads(context):
            expr = site.expr
            if isinstance(expr, CollectionDisplay) and expr.elements \
                    and not isinstance(self.parents.get(expr), New):
                yield self.target('CIR', context, self.rewrite(expr, empty[expr.flavor]),
                                  f"replace '{self.text(expr)}' with {empty[expr.flavor]}")
        for stmt, owner in context.statements:
            if not isinstance(stmt, VarDecl) or len(stmt.bindings) != len(stmt.values):
                continue
            for binding, value in zip(stmt.bindings, stmt.values):
                if isinstance(value, New) and binding.type is not None \
                        and binding.type.name.endswith('?'):
                    yield self.target('CIR', context, self.rewrite(value, 'null'),
                                      f"initialize {binding.name} with null")

    def scan_dcr(self, context):
        owners = self.program.table.ctor_owner
        for site in self.reads(context):
            expr = site.expr
            if isinstance(expr, FunctionCall) and self.program.signature_of(expr) is None:
                name, span = expr.callee, expr.callee_span
            elif isinstance(expr, Identifier) and self.program.symbol_of(expr) is None:
                name, span = expr.name, expr.span
            elif isinstance(expr, FieldAccess) and isinstance(expr.receiver, Identifier) \
                    and self.program.symbol_of(expr.receiver) is None:
                name, span = expr.name, expr.name_span
            else:
                continue
            if name not in owners or self.type_of(expr).kind != 'Datatype':
                continue
            for other in self.program.sibling_constructors(self.type_of(expr).name, name):
                yield self.target('DCR', context, self.rewrite(span, other),
                                  f"construct {other} instead of {name}")

    def scan_tar(self, context):
        for site in self.reads(context):
            expr = site.expr
            if not isinstance(expr, TupleAccess):
                continue
            receiver = self.type_of(expr.receiver)
            if receiver.kind != 'Tuple' or expr.index >= len(receiver.args):
                continue
            for j, element in enumerate(receiver.args):
                if j != expr.index and element == receiver.args[expr.index]:
                    yield self.target('TAR', context, self.rewrite(expr.index_span, str(j)),
                                      f"access element {j} instead of {expr.index}")

    # variables and fields

    def scan_ver(self, context):
        for site in self.reads(context):
            expr = site.expr
            if not isinstance(expr, Identifier):
                continue
            symbol = self.program.symbol_of(expr)
            if symbol is None or symbol.kind not in ('var', 'param', 'out-param'):
                continue
            for name in self.program.variables_of_type(expr, symbol.type, exclude=expr.name):
                yield self.target('VER', context, self.rewrite(expr, name),
                                  f"replace variable {expr.name} with {name}")

    def scan_far(self, context):
        for site in self.reads(context):
            expr = site.expr
            if not isinstance(expr, FieldAccess):
                continue
            receiver = self.type_of(expr.receiver)
            if receiver.kind not in ('Class', 'Trait'):
                continue
            fields = self.program.fields_of(receiver.name)
            current = fields.get(expr.name)
            if current is None:
                continue
            for name, symbol in fields.items():
                if name != expr.name and symbol.type == current.type:
                    yield self.target('FAR', context, self.rewrite(expr.name_span, name),
                                      f"access field {name} instead of {expr.name}")

    def scan_thi(self, context):
        if context.class_name is None or 'static' in context.decl.modifiers:
            return
        fields = self.program.fields_of(context.class_name)
        for site in self.reads(context):
            expr = site.expr
            if not isinstance(expr, Identifier) or expr.name not in fields:
                continue
            symbol = self.program.symbol_of(expr)
            if symbol is not None and symbol.kind == 'param':
                yield self.target('THI', context, self.rewrite(expr, f"this.{expr.name}"),
                                  f"read field this.{expr.name} instead of parameter")

    def scan_thd(self, context):
        params = {p.name for p in context.decl.params}
        for site in self.reads(context):
            expr = site.expr
            if isinstance(expr, FieldAccess) and isinstance(expr.receiver, This) \
                    and expr.name in params:
                yield self.target('THD', context, self.rewrite(expr, expr.name),
                                  f"read parameter {expr.name} instead of this.{expr.name}")

    def scan_prv(self, context):
        for stmt, owner in context.statements:
            if not self.program.is_parent_assignment(stmt):
                continue
            lhs, rhs = stmt.lhs[0], stmt.rhs[0]
            current = self.type_of(rhs)
            for child in self.program.children_of_trait(self.type_of(lhs).name):
                if child == current.name:
                    continue
                for nullable in (False, True):
                    child_type = type(current)('Class', name=child, nullable=nullable)
                    for name in self.program.variables_of_type(rhs, child_type):
                        yield self.target('PRV', context, self.rewrite(rhs, name),
                                          f"assign {name} ({child}) instead of {rhs.name}")

    def collapse_edits(self, context, chosen):
        """Edits that replace each outermost chosen node by its kept operand, recursively."""
        def render(node):
            if node in chosen:
                kept = chosen[node]
                text = render(kept)
                parent = self.parents.get(node)
                if isinstance(kept, BinaryOp) and isinstance(parent, BinaryOp) and needs_parens(
                        kept.op, parent.op, 'lhs' if parent.lhs is node else 'rhs'):
                    text = f"({text})"
                return text
            pieces, cursor = [], node.span.start
            for child in _expr_children(node):
                if any(child.span.contains(c.span) for c in chosen):
                    pieces.append(self.source[cursor:child.span.start])
                    pieces.append(render(child))
                    cursor = child.span.end
            pieces.append(self.source[cursor:node.span.end])
            return ''.join(pieces)

        outermost = [n for n in chosen if not any(
            m is not n and m.span.contains(n.span) for m in chosen)]
        outermost.sort(key=lambda n: n.span.start)
        return tuple(self.rewrite(n, render(n)) for n in outermost)

    def scan_vdl(self, context):
        uses = {}
        for site in context.sites:
            if isinstance(site.expr, Identifier):
                symbol = self.program.symbol_of(site.expr)
                if symbol is not None and symbol.kind == 'var':
                    uses.setdefault(id(symbol), (symbol, []))[1].append(site.expr)
        for symbol, identifiers in uses.values():
            parents = [self.parents.get(i) for i in identifiers]
            if not all(isinstance(p, BinaryOp) for p in parents):
                continue
            if len({id(p) for p in parents}) != len(parents):
                continue
            chosen = {p: (p.rhs if p.lhs is i else p.lhs) for p, i in zip(parents, identifiers)}
            yield self.target('VDL', context, self.collapse_edits(context, chosen),
                              f"delete every use of {symbol.name}")

    def scan_odl(self, context):
        binaries, unaries = {}, {}
        for site in self.reads(context):
            if isinstance(site.expr, BinaryOp):
                binaries.setdefault(site.expr.op, []).append(site.expr)
            elif isinstance(site.expr, UnaryOp):
                unaries.setdefault(site.expr.op, []).append(site.expr)
        for op, nodes in binaries.items():
            for side in ('lhs', 'rhs'):
                chosen = {n: getattr(n, side) for n in nodes}
                keep = 'left' if side == 'lhs' else 'right'
                yield self.target('ODL', context, self.collapse_edits(context, chosen),
                                  f"delete every '{op}' keeping the {keep} operand")
        for op, nodes in unaries.items():
            chosen = {n: n.operand for n in nodes}
            yield self.target('ODL', context, self.collapse_edits(context, chosen),
                              f"delete every unary '{op}'")

    def scan_sld(self, context):
        for site in self.reads(context):
            expr = site.expr
            if not isinstance(expr, Slice):
                continue
            for bound in (expr.lo, expr.hi):
                if bound is not None:
                    yield self.target('SLD', context, self.rewrite(bound, ''),
                                      f"drop slice limit '{self.text(bound)}'")

    # statements

    def scan_lsr(self, context):
        for stmt, owner in context.statements:
            if not isinstance(stmt, (Break, Continue)):
                continue
            label = f" {stmt.label}" if stmt.label else ''
            other = 'continue' if isinstance(stmt, Break) else 'break'
            yield self.target('LSR', context, self.rewrite(stmt, f"{other}{label};"),
                              f"replace '{self.text(stmt)}' with {other}")
            if context.is_void:
                yield self.target('LSR', context, self.rewrite(stmt, 'return;'),
                                  f"replace '{self.text(stmt)}' with return")

    def scan_lbi(self, context):
        for loop in context.loops:
            if loop.body is not None:
                yield self.target('LBI', context, self.insertion(loop.body.span.start + 1, ' break;'),
                                  'insert break at the start of the loop body')

    def scan_cbr(self, context):
        for match in context.matches:
            wildcards = [c for c in match.cases if c.is_wildcard]
            others = [c for c in match.cases if not c.is_wildcard]
            if not wildcards or not others:
                continue
            default = wildcards[0]
            for case in others:
                yield self.target('CBR', context, self.case_body(case, default),
                                  f"give case '{case.pattern.strip()}' the default body")
            yield self.target('CBR', context, self.case_body(default, others[0]),
                              f"give the default case the body of '{others[0].pattern.strip()}'")

    def case_body(self, case, source_case) -> Rewrite:
        text = self.text(source_case.body_span)
        if case.body_span.start == case.body_span.end and text:
            text = ' ' + text
        return self.rewrite(case.body_span, text)

    def scan_sdl(self, context):
        simple = (VarDecl, Assign, CallStmt, Print, Break, Continue, Return)
        for stmt, owner in context.statements:
            if isinstance(stmt, simple):
                yield self.target('SDL', context, self.rewrite(stmt, ''),
                                  f"delete '{self.text(stmt)}'")
            elif isinstance(stmt, If):
                if stmt.else_ is None and self.block_level(stmt):
                    yield self.target('SDL', context, self.rewrite(stmt, ''),
                                      'delete if statement')
                elif stmt.else_ is not None:
                    span = SourceSpan(stmt.else_span.start, stmt.else_.span.end,
                                      stmt.else_span.line, stmt.else_span.column)
                    yield self.target('SDL', context, self.rewrite(span, ''),
                                      'delete else branch')
        decl = context.decl
        if isinstance(decl.body, Block) and decl.body.stmts and (
                decl.kind == 'Constructor' or (decl.kind == 'Method' and not decl.outs)):
            yield self.target('SDL', context, self.rewrite(decl.body, '{}'),
                              f"delete the body of {context.label}")

    def scan_sws(self, context):
        for owner, stmts in context.blocks:
            for a, b in zip(stmts, stmts[1:]):
                if isinstance(a, OpaqueStmt) or isinstance(b, OpaqueStmt):
                    continue
                edits = (self.rewrite(a, self.text(b)), self.rewrite(b, self.text(a)))
                yield self.target('SWS', context, edits,
                                  f"swap statements at lines {a.span.line} and {b.span.line}")

    def declared_type(self, stmt: VarDecl):
        binding, value = stmt.bindings[0], stmt.values[0]
        scope = self.program.scope_of(stmt)
        symbol = scope.lookup(binding.name, stmt.span.end) if scope is not None else None
        if symbol is not None:
            return symbol.type
        t = self.type_of(value)
        return INT if t.kind == 'Nat' else t

    def scan_swv(self, context):
        for owner, stmts in context.blocks:
            decls = [s for s in stmts if isinstance(s, VarDecl)
                     and len(s.bindings) == 1 and len(s.values) == 1]
            for a, b in combinations(decls, 2):
                if self.declared_type(a) == self.declared_type(b):
                    va, vb = a.values[0], b.values[0]
                    edits = (self.rewrite(va, self.text(vb)), self.rewrite(vb, self.text(va)))
                    yield self.target('SWV', context, edits,
                                      f"swap initializers of {a.bindings[0].name} and "
                                      f"{b.bindings[0].name}")

    def scan_cbe(self, context):
        for stmt, owner in context.statements:
            if isinstance(stmt, If) and self.block_level(stmt):
                inner = self.source[stmt.then.span.start + 1:stmt.then.span.end - 1]
                yield self.target('CBE', context, self.rewrite(stmt, inner.strip()),
                                  'replace the if statement with its then branch')
                if isinstance(stmt.else_, Block):
                    inner = self.source[stmt.else_.span.start + 1:stmt.else_.span.end - 1]
                    yield self.target('CBE', context, self.rewrite(stmt, inner.strip()),
                                      'replace the if statement with its else branch')
                elif isinstance(stmt.else_, If):
                    yield self.target('CBE', context,
                                      self.rewrite(stmt, self.text(stmt.else_)),
                                      'replace the if statement with its else branch')
        for site in self.reads(context):
            expr = site.expr
            if isinstance(expr, IfThenElse):
                for branch, name in ((expr.then, 'then'), (expr.else_, 'else')):
                    yield self.target('CBE', context,
                                      self.rewrite(expr, self.operand_text(branch, expr)),
                                      f"replace the if expression with its {name} branch")


def _is_expr(node):
    return isinstance(node, (Identifier, Literal, This, ParenExpr, TupleDisplay, FieldAccess,
                             TupleAccess, IndexExpr, Slice, BinaryOp, UnaryOp, FunctionCall,
                             CollectionDisplay, New, IfThenElse, LetExpr, Cardinality, AsExpr))


def _expr_children(node):
    for child in node.children():
        if isinstance(child, MapEntry):
            yield from child.children()
        elif _is_expr(child):
            yield child


def _is_negated_literal(expr):
    return isinstance(expr, UnaryOp) and expr.op == '-' and isinstance(expr.operand, Literal) \
        and expr.operand.kind in ('int', 'real')


def literal_replacements(literal: Literal, sign=1) -> list[str]:
    if literal.kind == 'bool':
        return ['false' if literal.value else 'true']
    if literal.kind == 'int':
        v = sign * literal.value
        result = []
        for candidate in (0, 1, -1, v + 1, v - 1):
            if candidate != v and candidate not in result:
                result.append(candidate)
        return [str(c) for c in result]
    if literal.kind == 'real':
        v = sign * literal.value
        return [text for text in ('0.0', '1.0', '-1.0') if Decimal(text) != v]
    if literal.kind == 'string':
        return ['"A"'] if literal.value == '' else ['""']
    if literal.kind == 'char':
        return ["'b'"] if literal.value == 'a' else ["'a'"]
    return []


def default_literal(t) -> str | None:
    if t.kind in ('Int', 'Nat'):
        return '0'
    if t.kind == 'Bool':
        return 'false'
    if t.kind == 'Real':
        return '0.0'
    if t.kind == 'String':
        return '""'
    if t.kind == 'Seq':
        return '[]'
    if t.kind == 'Set':
        return '{}'
    if t.kind == 'Multiset':
        return 'multiset{}'
    if t.kind == 'Map':
        return 'map[]'
    return None


def scan(program: ResolvedProgram, operators=OPERATORS) -> list[MutationTarget]:
    """All targets of the selected operators, operator by operator in id order."""
    targets = Scanner(program).scan(operators)
    logger.info(f"Scan found {len(targets)} targets for {len(operators)} operators")
    return targets


def _targets_of(op):
    def targets(program: ResolvedProgram) -> list[MutationTarget]:
        return Scanner(program).targets(op)
    targets.__name__ = targets.__qualname__ = f"targets_{op}"
    targets.__doc__ = f"{OPERATOR_NAMES[op]} targets of a resolved program."
    return targets


# exported as targets_<OP>
TARGET_FUNCTIONS = {op: _targets_of(op) for op in OPERATORS}
globals().update({f.__name__: f for f in TARGET_FUNCTIONS.values()})
