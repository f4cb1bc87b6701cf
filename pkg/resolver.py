"""Scopes, symbol tables and a lightweight type assignment over a parsed Dafny file.

There is no type inference beyond declarations, literals, operator result types and
declared callable signatures; whatever cannot be derived that way is ``Unknown``.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from dafny_syntax import (
    AsExpr, Assign, Binding, BinaryOp, Block, CallStmt, Cardinality, CallableDecl, ClassDecl,
    CollectionDisplay, ConstDecl, DatatypeDecl, FieldAccess, FieldDecl, For, FunctionBody,
    FunctionCall, Identifier, If, IfThenElse, IndexExpr, LetExpr, Literal, MapEntry, Match,
    ModuleDecl, New, OpaqueExpr, ParenExpr, Print, Return, Slice, SyntaxTree, This, TupleAccess,
    TupleDisplay, TypeSyntax, UnaryOp, VarDecl, While,
)

logger = logging.getLogger(__name__)

NEVER = float('inf')

ARITHMETIC = frozenset({'+', '-', '*', '/', '%'})
BOOLEAN_RESULT = frozenset({
    '==', '!=', '<', '<=', '>', '>=', 'in', '!in', '!!', '&&', '||', '==>', '<==', '<==>',
})


@dataclass(frozen=True, eq=False)
class TypeRef:
    kind: str
    args: tuple = ()
    name: str = ''
    nullable: bool = False
    width: int = 0

    def _key(self):
        return self.kind, self.args, self.name, self.nullable, self.width

    def __eq__(self, other):
        if not isinstance(other, TypeRef) or not self.is_known or not other.is_known:
            return False
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def is_known(self):
        return self.kind != 'Unknown' and all(arg.is_known for arg in self.args)

    @property
    def is_numeric(self):
        return self.kind in ('Int', 'Nat', 'Real', 'BitVector')

    def __str__(self):
        simple = {'Bool': 'bool', 'Int': 'int', 'Nat': 'nat', 'Real': 'real', 'Char': 'char',
                  'String': 'string', 'Unknown': '?'}
        if self.kind in simple:
            return simple[self.kind]
        if self.kind == 'BitVector':
            return f"bv{self.width}"
        if self.kind in ('Class', 'Trait', 'Datatype'):
            return self.name + ('?' if self.nullable else '')
        if self.kind == 'Tuple':
            return '(' + ', '.join(str(a) for a in self.args) + ')'
        inner = ', '.join(str(a) for a in self.args)
        prefix = self.kind.lower() + ('?' if self.nullable else '')
        return f"{prefix}<{inner}>"


BOOL = TypeRef('Bool')
INT = TypeRef('Int')
NAT = TypeRef('Nat')
REAL = TypeRef('Real')
CHAR = TypeRef('Char')
STRING = TypeRef('String')
UNKNOWN = TypeRef('Unknown')

_SIMPLE_TYPES = {'bool': BOOL, 'int': INT, 'nat': NAT, 'real': REAL, 'char': CHAR,
                 'string': STRING}
_COLLECTIONS = {'seq': 'Seq', 'set': 'Set', 'iset': 'Set', 'multiset': 'Multiset',
                'map': 'Map', 'imap': 'Map'}
_PATTERN_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_'?]*")


@dataclass
class Symbol:
    name: str
    kind: str  # var, param, out-param, field, const, bound
    type: TypeRef
    span: object
    visible_from: float = 0
    ready_from: float = 0


@dataclass(eq=False)
class Scope:
    parent: Scope | None = None
    symbols: list = field(default_factory=list)
    class_name: str | None = None

    def chain(self):
        scope, chain = self, []
        while scope is not None:
            chain.append(scope)
            scope = scope.parent
        return chain

    def lookup(self, name, offset):
        for scope in self.chain():
            found = None
            for symbol in scope.symbols:
                if symbol.name == name and symbol.visible_from <= offset:
                    found = symbol
            if found is not None:
                return found
        return None

    def visible(self, offset):
        """Unshadowed symbols visible at ``offset``, outermost scope first, in declaration order."""
        seen, result = set(), []
        for scope in self.chain():
            for symbol in reversed(scope.symbols):
                if symbol.visible_from <= offset and symbol.name not in seen:
                    seen.add(symbol.name)
                    result.append(symbol)
        chain = self.chain()
        depth = {id(scope): len(chain) - i for i, scope in enumerate(chain)}
        owner = {id(symbol): depth[id(scope)] for scope in chain for symbol in scope.symbols}
        return sorted(result, key=lambda s: (owner[id(s)], s.span.start))


@dataclass(frozen=True)
class CallableSignature:
    receiver: str | None
    name: str
    params: tuple
    returns: tuple
    is_method: bool
    is_ghost: bool
    has_body: bool
    has_ensures: bool = False

    def matches(self, other: CallableSignature) -> bool:
        return (self.is_method == other.is_method
                and len(self.params) == len(other.params)
                and len(self.returns) == len(other.returns)
                and all(a == b for a, b in zip(self.params, other.params))
                and all(a == b for a, b in zip(self.returns, other.returns)))

    @property
    def result(self):
        return self.returns[0] if len(self.returns) == 1 else UNKNOWN


@dataclass
class ClassInfo:
    name: str
    kind: str
    extends: tuple
    decl: ClassDecl
    fields: dict = field(default_factory=dict)
    methods: dict = field(default_factory=dict)


@dataclass
class DatatypeInfo:
    name: str
    decl: DatatypeDecl
    ctors: dict = field(default_factory=dict)


@dataclass
class SymbolTable:
    classes: dict = field(default_factory=dict)
    datatypes: dict = field(default_factory=dict)
    ctor_owner: dict = field(default_factory=dict)
    callables: dict = field(default_factory=dict)
    globals: Scope = field(default_factory=Scope)


@dataclass
class ResolvedProgram:
    tree: SyntaxTree
    table: SymbolTable
    types: dict = field(default_factory=dict)
    symbols: dict = field(default_factory=dict)
    scopes: dict = field(default_factory=dict)
    calls: dict = field(default_factory=dict)
    callable_scopes: dict = field(default_factory=dict)

    def type_of(self, expr) -> TypeRef:
        return self.types.get(expr, UNKNOWN)

    def symbol_of(self, identifier) -> Symbol | None:
        return self.symbols.get(identifier)

    def signature_of(self, call) -> CallableSignature | None:
        return self.calls.get(call)

    def scope_of(self, node) -> Scope | None:
        return self.scopes.get(node)

    def variables_of_type(self, location, t: TypeRef, exclude=None) -> list[str]:
        if isinstance(location, tuple):
            scope, offset = location
        else:
            scope, offset = self.scopes.get(location), location.span.start
        if scope is None:
            return []
        return [symbol.name for symbol in scope.visible(offset)
                if symbol.kind in ('var', 'param', 'out-param')
                and symbol.ready_from <= offset and symbol.type == t and symbol.name != exclude]

    def sibling_constructors(self, datatype: str, ctor: str) -> list[str]:
        info = self.table.datatypes.get(datatype)
        if info is None or ctor not in info.ctors:
            return []
        params = info.ctors[ctor]
        return [name for name, other in info.ctors.items()
                if name != ctor and len(other) == len(params)
                and all(a == b for a, b in zip(other, params))]

    def children_of_trait(self, trait: str) -> list[str]:
        return [info.name for info in self.table.classes.values()
                if info.kind == 'Class' and trait in info.extends]

    def is_parent_assignment(self, stmt) -> bool:
        if not isinstance(stmt, Assign) or len(stmt.lhs) != 1 or len(stmt.rhs) != 1:
            return False
        lhs, rhs = stmt.lhs[0], stmt.rhs[0]
        if not isinstance(lhs, Identifier) or not isinstance(rhs, Identifier):
            return False
        parent, child = self.type_of(lhs), self.type_of(rhs)
        return (parent.kind == 'Trait' and child.kind == 'Class'
                and child.name in self.children_of_trait(parent.name))

    def fields_of(self, class_name) -> dict:
        """Fields and constants of a class, including those inherited from its traits."""
        info = self.table.classes.get(class_name)
        if info is None:
            return {}
        result = {}
        for parent in info.extends:
            for name, symbol in self.fields_of(parent).items():
                result.setdefault(name, symbol)
        result.update(info.fields)
        return result

    def methods_of(self, class_name) -> dict:
        info = self.table.classes.get(class_name)
        if info is None:
            return {}
        result = {}
        for parent in info.extends:
            result.update(self.methods_of(parent))
        result.update(info.methods)
        return result


def flatten(declarations):
    for decl in declarations:
        if isinstance(decl, ModuleDecl):
            yield from flatten(decl.members)
        else:
            yield decl


class Resolver:
    def __init__(self, tree: SyntaxTree):
        self.tree = tree
        self.table = SymbolTable()
        self.program = ResolvedProgram(tree, self.table)
        self.class_name = None

    # declarations

    def type_from_syntax(self, syntax: TypeSyntax | None) -> TypeRef:
        if syntax is None:
            return UNKNOWN
        name, args = syntax.name, syntax.args
        if name == '()':
            if len(args) == 1:
                return self.type_from_syntax(args[0])
            return TypeRef('Tuple', tuple(self.type_from_syntax(a) for a in args))
        nullable = name.endswith('?')
        base = name.rstrip('?').rsplit('.', 1)[-1]
        if base in _SIMPLE_TYPES and not args:
            return _SIMPLE_TYPES[base]
        if re.fullmatch(r'bv[0-9]+', base):
            return TypeRef('BitVector', width=int(base[2:]))
        if base in _COLLECTIONS:
            return TypeRef(_COLLECTIONS[base], tuple(self.type_from_syntax(a) for a in args))
        if base == 'array' and len(args) == 1:
            return TypeRef('Array', (self.type_from_syntax(args[0]),), nullable=nullable)
        if base in self.table.classes:
            info = self.table.classes[base]
            return TypeRef(info.kind, name=base, nullable=nullable)
        if base in self.table.datatypes:
            return TypeRef('Datatype', name=base)
        return UNKNOWN

    def collect(self):
        decls = list(flatten(self.tree.declarations))
        for decl in decls:
            if isinstance(decl, ClassDecl):
                self.table.classes[decl.name] = ClassInfo(decl.name, decl.kind, decl.extends, decl)
            elif isinstance(decl, DatatypeDecl):
                self.table.datatypes[decl.name] = DatatypeInfo(decl.name, decl)
        for decl in decls:
            if isinstance(decl, ClassDecl):
                self.collect_class(decl)
            elif isinstance(decl, DatatypeDecl):
                info = self.table.datatypes[decl.name]
                for ctor in decl.ctors:
                    info.ctors[ctor.name] = tuple(self.type_from_syntax(p.type) for p in ctor.params)
                    self.table.ctor_owner.setdefault(ctor.name, decl.name)
                for member in decl.members:
                    if isinstance(member, CallableDecl):
                        self.table.callables.setdefault(member.name, self.signature(member, decl.name))
            elif isinstance(decl, CallableDecl):
                self.table.callables.setdefault(decl.name, self.signature(decl, None))
            elif isinstance(decl, ConstDecl):
                self.table.globals.symbols.append(Symbol(
                    decl.name, 'const', self.const_type(decl), decl.name_span))

    def collect_class(self, decl: ClassDecl):
        info = self.table.classes[decl.name]
        for member in decl.members:
            if isinstance(member, FieldDecl):
                for binding in member.bindings:
                    info.fields[binding.name] = Symbol(
                        binding.name, 'field', self.type_from_syntax(binding.type), binding.name_span)
            elif isinstance(member, ConstDecl):
                info.fields[member.name] = Symbol(
                    member.name, 'const', self.const_type(member), member.name_span)
            elif isinstance(member, CallableDecl) and member.kind != 'Constructor':
                info.methods[member.name] = self.signature(member, decl.name)

    def const_type(self, decl: ConstDecl):
        if decl.type is not None:
            return self.type_from_syntax(decl.type)
        if isinstance(decl.value, Literal):
            return self.literal_type(decl.value)
        return UNKNOWN

    def signature(self, decl: CallableDecl, receiver):
        params = tuple(self.type_from_syntax(p.type) for p in decl.params)
        if decl.kind == 'Predicate':
            returns = (BOOL,)
        elif decl.kind == 'Function':
            returns = (self.type_from_syntax(decl.result_type),)
        else:
            returns = tuple(self.type_from_syntax(o.type) for o in decl.outs)
        return CallableSignature(receiver, decl.name, params, returns,
                                 decl.kind in ('Method', 'Constructor'), decl.is_ghost,
                                 decl.body is not None, decl.has_ensures)

    # bodies

    def resolve(self) -> ResolvedProgram:
        self.collect()
        for decl in flatten(self.tree.declarations):
            if isinstance(decl, ClassDecl):
                class_scope = Scope(self.table.globals, class_name=decl.name)
                class_scope.symbols.extend(self.program.fields_of(decl.name).values())
                self.class_name = decl.name
                for member in decl.members:
                    if isinstance(member, CallableDecl):
                        self.resolve_callable(member, class_scope)
                    elif isinstance(member, ConstDecl) and member.value is not None:
                        self.expr(member.value, class_scope)
                self.class_name = None
            elif isinstance(decl, DatatypeDecl):
                for member in decl.members:
                    if isinstance(member, CallableDecl):
                        self.resolve_callable(member, Scope(self.table.globals))
            elif isinstance(decl, CallableDecl):
                self.resolve_callable(decl, Scope(self.table.globals))
            elif isinstance(decl, ConstDecl) and decl.value is not None:
                self.expr(decl.value, self.table.globals)
        logger.info(f"Resolved {len(self.table.callables)} top-level callables, "
                    f"{len(self.table.classes)} classes/traits, "
                    f"{len(self.table.datatypes)} datatypes, {len(self.program.types)} typed expressions")
        return self.program

    def resolve_callable(self, decl: CallableDecl, outer: Scope):
        scope = Scope(outer, class_name=outer.class_name)
        self.program.callable_scopes[decl] = scope
        for param in decl.params:
            scope.symbols.append(Symbol(param.name, 'param', self.type_from_syntax(param.type),
                                        param.name_span))
        body = decl.body
        for out in decl.outs:
            ready = NEVER
            if isinstance(body, Block):
                for stmt in body.stmts:
                    if isinstance(stmt, Assign) and any(
                            isinstance(lhs, Identifier) and lhs.name == out.name for lhs in stmt.lhs):
                        ready = stmt.span.end
                        break
            kind = 'out-param' if decl.kind != 'Function' else 'bound'
            scope.symbols.append(Symbol(out.name, kind, self.type_from_syntax(out.type),
                                        out.name_span, 0, ready))
        if isinstance(body, Block):
            self.block(body, scope)
        elif isinstance(body, FunctionBody):
            self.expr(body.expr, scope)

    def block(self, block: Block, outer: Scope):
        scope = Scope(outer, class_name=outer.class_name)
        self.program.scopes[block] = scope
        for stmt in block.stmts:
            self.stmt(stmt, scope)

    def stmt(self, stmt, scope: Scope):
        self.program.scopes[stmt] = scope
        if isinstance(stmt, VarDecl):
            value_types = [self.expr(v, scope) for v in stmt.values]
            if len(stmt.values) == 1 and len(stmt.bindings) > 1:
                sig = self.program.signature_of(stmt.values[0])
                value_types = list(sig.returns) if sig else []
            for i, binding in enumerate(stmt.bindings):
                declared = self.type_from_syntax(binding.type) if binding.type else None
                if declared is None:
                    declared = value_types[i] if i < len(value_types) else UNKNOWN
                    if declared.kind == 'Nat':
                        declared = INT
                scope.symbols.append(Symbol(binding.name, 'var', declared, binding.name_span,
                                            stmt.span.end, stmt.span.end))
        elif isinstance(stmt, Assign):
            for expr in stmt.lhs + stmt.rhs:
                self.expr(expr, scope)
        elif isinstance(stmt, CallStmt):
            self.expr(stmt.call, scope)
        elif isinstance(stmt, If):
            self.expr(stmt.guard, scope)
            self.block(stmt.then, scope)
            if isinstance(stmt.else_, Block):
                self.block(stmt.else_, scope)
            elif isinstance(stmt.else_, If):
                self.stmt(stmt.else_, scope)
        elif isinstance(stmt, While):
            self.expr(stmt.guard, scope)
            if stmt.body is not None:
                self.block(stmt.body, scope)
        elif isinstance(stmt, For):
            self.expr(stmt.lo, scope)
            self.expr(stmt.hi, scope)
            loop = Scope(scope, class_name=scope.class_name)
            index_type = self.type_from_syntax(stmt.index.type) if stmt.index.type else INT
            loop.symbols.append(Symbol(stmt.index.name, 'var', index_type, stmt.index.name_span,
                                       stmt.index.span.end, stmt.index.span.end))
            if stmt.body is not None:
                self.block(stmt.body, loop)
        elif isinstance(stmt, Match):
            self.expr(stmt.scrutinee, scope)
            for case in stmt.cases:
                case_scope = Scope(scope, class_name=scope.class_name)
                for name in _PATTERN_NAME.findall(case.pattern):
                    if name != '_' and name not in self.table.ctor_owner:
                        case_scope.symbols.append(Symbol(name, 'bound', UNKNOWN, case.pattern_span))
                self.program.scopes[case] = case_scope
                for inner in case.body:
                    self.stmt(inner, case_scope)
        elif isinstance(stmt, Return):
            for value in stmt.values:
                self.expr(value, scope)
        elif isinstance(stmt, Print):
            for arg in stmt.args:
                self.expr(arg, scope)
        elif isinstance(stmt, Block):
            self.block(stmt, scope)

    def literal_type(self, literal: Literal):
        return {'bool': BOOL, 'int': INT, 'real': REAL, 'char': CHAR,
                'string': STRING}.get(literal.kind, UNKNOWN)

    def expr(self, expr, scope: Scope) -> TypeRef:
        if expr is None:
            return UNKNOWN
        self.program.scopes[expr] = scope
        result = self.infer(expr, scope)
        self.program.types[expr] = result
        return result

    def infer(self, expr, scope: Scope) -> TypeRef:
        if isinstance(expr, Literal):
            return self.literal_type(expr)
        if isinstance(expr, Identifier):
            symbol = scope.lookup(expr.name, expr.span.start)
            if symbol is not None:
                self.program.symbols[expr] = symbol
                return symbol.type
            owner = self.table.ctor_owner.get(expr.name)
            if owner is not None:
                return TypeRef('Datatype', name=owner)
            return UNKNOWN
        if isinstance(expr, This):
            return TypeRef('Class', name=scope.class_name) if scope.class_name else UNKNOWN
        if isinstance(expr, ParenExpr):
            return self.expr(expr.inner, scope)
        if isinstance(expr, TupleDisplay):
            return TypeRef('Tuple', tuple(self.expr(e, scope) for e in expr.elements))
        if isinstance(expr, FieldAccess):
            return self.field_access(expr, scope)
        if isinstance(expr, TupleAccess):
            receiver = self.expr(expr.receiver, scope)
            if receiver.kind == 'Tuple' and expr.index < len(receiver.args):
                return receiver.args[expr.index]
            return UNKNOWN
        if isinstance(expr, IndexExpr):
            receiver = self.expr(expr.receiver, scope)
            self.expr(expr.index, scope)
            if receiver.kind in ('Seq', 'Array') and receiver.args:
                return receiver.args[0]
            if receiver.kind == 'Map' and len(receiver.args) == 2:
                return receiver.args[1]
            if receiver.kind == 'Multiset':
                return INT
            if receiver.kind == 'String':
                return CHAR
            return UNKNOWN
        if isinstance(expr, Slice):
            receiver = self.expr(expr.receiver, scope)
            self.expr(expr.lo, scope)
            self.expr(expr.hi, scope)
            if receiver.kind in ('Seq', 'String'):
                return receiver
            if receiver.kind == 'Array':
                return TypeRef('Seq', receiver.args)
            return UNKNOWN
        if isinstance(expr, BinaryOp):
            return self.binary(expr, scope)
        if isinstance(expr, UnaryOp):
            operand = self.expr(expr.operand, scope)
            if expr.op == '-' and operand.kind == 'Nat':
                return INT
            return operand
        if isinstance(expr, FunctionCall):
            return self.call(expr, scope)
        if isinstance(expr, CollectionDisplay):
            return self.display(expr, scope)
        if isinstance(expr, New):
            for e in expr.dims + expr.args + expr.initializer:
                self.expr(e, scope)
            if expr.is_array:
                if len(expr.dims) > 1:
                    return UNKNOWN
                return TypeRef('Array', (self.type_from_syntax(expr.type),))
            parts = expr.type.name.split('.')
            for name in reversed(parts[-2:]):
                if name in self.table.classes:
                    return TypeRef('Class', name=name)
            return UNKNOWN
        if isinstance(expr, IfThenElse):
            self.expr(expr.guard, scope)
            then = self.expr(expr.then, scope)
            other = self.expr(expr.else_, scope)
            return then if then.is_known else other
        if isinstance(expr, LetExpr):
            let_scope = Scope(scope, class_name=scope.class_name)
            values = [self.expr(v, scope) for v in expr.values]
            for i, binding in enumerate(expr.bindings):
                t = self.type_from_syntax(binding.type) if binding.type else (
                    values[i] if i < len(values) else UNKNOWN)
                let_scope.symbols.append(Symbol(binding.name, 'var', t, binding.name_span,
                                                expr.body.span.start, expr.body.span.start))
            return self.expr(expr.body, let_scope)
        if isinstance(expr, Cardinality):
            self.expr(expr.operand, scope)
            return INT
        if isinstance(expr, AsExpr):
            self.expr(expr.operand, scope)
            return self.type_from_syntax(expr.type) if expr.op == 'as' else BOOL
        if isinstance(expr, OpaqueExpr):
            return UNKNOWN
        return UNKNOWN

    def field_access(self, expr: FieldAccess, scope: Scope):
        if isinstance(expr.receiver, Identifier) and scope.lookup(
                expr.receiver.name, expr.receiver.span.start) is None:
            name = expr.receiver.name
            if name in self.table.datatypes and expr.name in self.table.datatypes[name].ctors:
                self.program.scopes[expr.receiver] = scope
                return TypeRef('Datatype', name=name)
        receiver = self.expr(expr.receiver, scope)
        if expr.name.endswith('?'):
            return BOOL
        if receiver.kind == 'Array' and expr.name == 'Length':
            return INT
        if receiver.kind in ('Class', 'Trait'):
            symbol = self.program.fields_of(receiver.name).get(expr.name)
            return symbol.type if symbol else UNKNOWN
        if receiver.kind == 'Datatype':
            info = self.table.datatypes.get(receiver.name)
            if info is not None:
                for ctor in info.decl.ctors:
                    for param, t in zip(ctor.params, info.ctors[ctor.name]):
                        if param.name == expr.name:
                            return t
        return UNKNOWN

    def binary(self, expr: BinaryOp, scope: Scope):
        lhs = self.expr(expr.lhs, scope)
        rhs = self.expr(expr.rhs, scope)
        if expr.op in BOOLEAN_RESULT:
            return BOOL
        if expr.op in ARITHMETIC:
            kinds = {lhs.kind, rhs.kind}
            if 'Real' in kinds:
                return REAL
            if kinds <= {'Int', 'Nat'}:
                return INT
            if lhs.kind == 'BitVector':
                return lhs
            if lhs.kind in ('Seq', 'Set', 'Multiset', 'Map', 'String'):
                return lhs
            if rhs.kind in ('Seq', 'Set', 'Multiset', 'Map', 'String') and expr.op == '+':
                return rhs
            return UNKNOWN
        return lhs if lhs.kind == 'BitVector' else UNKNOWN

    def call(self, expr: FunctionCall, scope: Scope):
        for arg in expr.args:
            self.expr(arg, scope)
        signature = None
        if expr.receiver is None:
            if expr.callee == 'multiset' and expr.args:
                arg = self.program.type_of(expr.args[0])
                return TypeRef('Multiset', arg.args[:1]) if arg.args else UNKNOWN
            if scope.class_name is not None:
                signature = self.program.methods_of(scope.class_name).get(expr.callee)
            if signature is None:
                signature = self.table.callables.get(expr.callee)
            if signature is None and expr.callee in self.table.ctor_owner:
                return TypeRef('Datatype', name=self.table.ctor_owner[expr.callee])
        else:
            receiver = expr.receiver
            if isinstance(receiver, Identifier) and scope.lookup(receiver.name,
                                                                 receiver.span.start) is None:
                self.program.scopes[receiver] = scope
                if receiver.name in self.table.datatypes:
                    if expr.callee in self.table.datatypes[receiver.name].ctors:
                        return TypeRef('Datatype', name=receiver.name)
                if receiver.name in self.table.classes:
                    signature = self.program.methods_of(receiver.name).get(expr.callee)
            else:
                receiver_type = self.expr(receiver, scope)
                if receiver_type.kind in ('Class', 'Trait'):
                    signature = self.program.methods_of(receiver_type.name).get(expr.callee)
        if signature is None:
            return UNKNOWN
        self.program.calls[expr] = signature
        return signature.result

    def display(self, expr: CollectionDisplay, scope: Scope):
        if expr.flavor == 'map':
            key = value = UNKNOWN
            for entry in expr.elements:
                self.program.scopes[entry] = scope
                key = self.expr(entry.key, scope)
                value = self.expr(entry.value, scope)
            return TypeRef('Map', (key, value))
        element = UNKNOWN
        for e in expr.elements:
            t = self.expr(e, scope)
            if not element.is_known:
                element = INT if t.kind == 'Nat' else t
        return TypeRef({'seq': 'Seq', 'set': 'Set', 'multiset': 'Multiset'}[expr.flavor],
                       (element,))


def resolve(tree: SyntaxTree) -> ResolvedProgram:
    return Resolver(tree).resolve()
