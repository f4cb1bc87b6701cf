"""Brute-force target counts for the purely syntactic operators.

Counts come straight from the syntax tree, without the scanner's traversal, so
the two can be checked against each other over the fixture corpus.
"""
from dafny_syntax import (
    Assign, BinaryOp, Block, Break, CallStmt, CallableDecl, ClassDecl, Continue, DatatypeDecl,
    For, If, Literal, Match, MatchCase, OpaqueStmt, Print, Return, Slice, UnaryOp, VarDecl,
    While, walk,
)
from resolver import flatten

ARITHMETIC = (('+', '-', '*'), ('/', '%'))
RELATIONAL = ('==', '!=', '<', '<=', '>', '>=')
CONDITIONAL = ('&&', '||', '==>', '<==', '<==>')


def callables(program):
    for decl in flatten(program.tree.declarations):
        if isinstance(decl, (ClassDecl, DatatypeDecl)):
            for member in decl.members:
                if isinstance(member, CallableDecl):
                    yield member
        elif isinstance(decl, CallableDecl):
            yield decl


def compiled_bodies(program):
    for decl in callables(program):
        if not decl.is_ghost and decl.body is not None:
            yield decl


def nodes_with_parents(root):
    stack = [(root, None)]
    while stack:
        node, parent = stack.pop()
        yield node, parent
        for child in node.children():
            stack.append((child, node))


def count_bbr(program):
    return 2 * sum(1 for decl in compiled_bodies(program) for node in walk(decl.body)
                   if isinstance(node, BinaryOp) and node.op in RELATIONAL + CONDITIONAL)


def count_bor(program):
    total = 0
    for decl in compiled_bodies(program):
        for node in walk(decl.body):
            if not isinstance(node, BinaryOp):
                continue
            if node.op in RELATIONAL:
                kinds = {program.type_of(node.lhs).kind, program.type_of(node.rhs).kind}
                numeric = kinds & {'Int', 'Nat', 'Real', 'BitVector', 'Char'}
                total += 5 if node.op not in ('==', '!=') or numeric else 1
                continue
            for group in ARITHMETIC + (CONDITIONAL, ('&', '|', '^'), ('<<', '>>')):
                if node.op in group:
                    total += len(group) - 1
    return total


def count_uod(program):
    return sum(1 for decl in compiled_bodies(program) for node in walk(decl.body)
               if isinstance(node, UnaryOp))


def count_sld(program):
    return sum((node.lo is not None) + (node.hi is not None)
               for decl in compiled_bodies(program) for node in walk(decl.body)
               if isinstance(node, Slice))


def count_lbi(program):
    return sum(1 for decl in compiled_bodies(program) for node in walk(decl.body)
               if isinstance(node, (While, For)) and node.body is not None)


def count_lsr(program):
    total = 0
    for decl in compiled_bodies(program):
        void = not decl.outs and decl.kind in ('Method', 'Constructor')
        for node in walk(decl.body):
            if isinstance(node, (Break, Continue)):
                total += 2 if void else 1
    return total


def count_cbr(program):
    total = 0
    for decl in compiled_bodies(program):
        for node in walk(decl.body):
            if isinstance(node, Match):
                wild = sum(1 for c in node.cases if c.pattern.strip() == '_')
                others = len(node.cases) - wild
                if wild and others:
                    total += others + 1
    return total


def count_sdl(program):
    simple = (VarDecl, Assign, CallStmt, Print, Break, Continue, Return)
    total = 0
    for decl in compiled_bodies(program):
        for node, parent in nodes_with_parents(decl.body):
            if isinstance(node, simple):
                total += 1
            elif isinstance(node, If):
                if node.else_ is not None:
                    total += 1
                elif isinstance(parent, (Block, MatchCase)):
                    total += 1
        if isinstance(decl.body, Block) and decl.body.stmts and (
                decl.kind == 'Constructor' or (decl.kind == 'Method' and not decl.outs)):
            total += 1
    return total


def count_sws(program):
    total = 0
    for decl in compiled_bodies(program):
        for node in walk(decl.body):
            if isinstance(node, Block):
                stmts = node.stmts
            elif isinstance(node, MatchCase):
                stmts = node.body
            else:
                continue
            total += sum(1 for a, b in zip(stmts, stmts[1:])
                         if not isinstance(a, OpaqueStmt) and not isinstance(b, OpaqueStmt))
    return total


def _literal_count(literal, sign):
    if literal.kind in ('bool', 'string', 'char'):
        return 1
    if literal.kind == 'int':
        v = sign * literal.value
        return len({0, 1, -1, v + 1, v - 1} - {v})
    if literal.kind == 'real':
        v = sign * literal.value
        return 3 - (1 if v in (0, 1, -1) else 0)
    return 0


def count_lvr(program):
    total = 0
    for decl in compiled_bodies(program):
        for node, parent in nodes_with_parents(decl.body):
            if not isinstance(node, Literal):
                continue
            if isinstance(parent, UnaryOp) and parent.op == '-' and node.kind in ('int', 'real'):
                total += _literal_count(node, -1)
            else:
                total += _literal_count(node, 1)
    return total


COUNTERS = {
    'BBR': count_bbr,
    'BOR': count_bor,
    'CBR': count_cbr,
    'LBI': count_lbi,
    'LSR': count_lsr,
    'LVR': count_lvr,
    'SDL': count_sdl,
    'SLD': count_sld,
    'SWS': count_sws,
    'UOD': count_uod,
}
