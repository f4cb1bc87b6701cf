from conftest import resolve_text
from dafny_syntax import FieldAccess, FunctionCall, Identifier, walk
from resolver import BOOL, INT, REAL, TypeRef, UNKNOWN


def nodes(program, kind, predicate=lambda n: True):
    return [n for n in program.tree.walk() if isinstance(n, kind) and predicate(n)]


def body(program, name):
    for decl in program.tree.declarations:
        if getattr(decl, 'name', None) == name:
            return decl.body
    raise KeyError(name)


def test_unknown_types_never_compare_equal():
    assert UNKNOWN != UNKNOWN
    assert TypeRef('Seq', (UNKNOWN,)) != TypeRef('Seq', (UNKNOWN,))
    assert TypeRef('Seq', (INT,)) == TypeRef('Seq', (INT,))
    assert TypeRef('Class', name='Node', nullable=True) != TypeRef('Class', name='Node')


def test_type_names():
    assert str(TypeRef('Map', (INT, BOOL))) == 'map<int, bool>'
    assert str(TypeRef('Tuple', (INT, REAL))) == '(int, real)'
    assert str(TypeRef('Class', name='Node', nullable=True)) == 'Node?'
    assert str(TypeRef('BitVector', width=8)) == 'bv8'


def test_shared_elements_types(resolved):
    program = resolved('shared_elements')
    method = body(program, 'SharedElements')
    guard = method.stmts[1].body.stmts[0].guard
    assert program.type_of(guard) == BOOL
    assert program.type_of(guard.lhs) == BOOL
    assert program.type_of(guard.lhs.args[1]) == INT
    res_plus = method.stmts[1].body.stmts[0].then.stmts[0].rhs[0]
    assert program.type_of(res_plus) == TypeRef('Seq', (INT,))
    length = method.stmts[1].hi
    assert isinstance(length, FieldAccess) and program.type_of(length) == INT


def test_predicate_call_has_a_signature(resolved):
    program = resolved('shared_elements')
    (call,) = [c for c in nodes(program, FunctionCall) if c.callee == 'InArray']
    signature = program.signature_of(call)
    assert signature.name == 'InArray'
    assert signature.returns == (BOOL,)
    assert not signature.is_method


def test_out_parameter_is_ready_after_its_first_assignment(resolved):
    program = resolved('shared_elements')
    method = body(program, 'SharedElements')
    loop = method.stmts[1]
    result_type = TypeRef('Seq', (INT,))
    assert program.variables_of_type(loop.hi, result_type) == ['res']
    last = method.stmts[2]
    after = (program.scope_of(last), last.span.end)
    assert program.variables_of_type(after, result_type) == ['result', 'res']


def test_variables_of_type_respects_declaration_order(resolved):
    program = resolved('vdl_locals')
    first, second, assign = body(program, 'Compute').stmts
    assert program.variables_of_type(first.values[0], INT) == ['a', 'b']
    assert program.variables_of_type(assign.rhs[0], INT) == ['a', 'b', 'offset', 'scale']
    assert program.variables_of_type(assign.rhs[0], INT, exclude='a') == ['b', 'offset', 'scale']


def test_inferred_local_types(resolved):
    program = resolved('swv_circle')
    scope = program.scope_of(body(program, 'Circle'))
    end = body(program, 'Circle').span.end
    assert scope.lookup('perimeter', end).type == REAL
    assert scope.lookup('area', end).type == REAL


def test_new_gives_a_class_type(resolved):
    program = resolved('prv_shapes')
    main = body(program, 'Main')
    scope = program.scope_of(main)
    assert scope.lookup('rectangle', main.span.end).type == TypeRef('Class', name='Rectangle')
    assert scope.lookup('shape', main.span.end).type == TypeRef('Trait', name='Shape')


def test_trait_children_and_parent_assignment(resolved):
    program = resolved('prv_shapes')
    assert program.children_of_trait('Shape') == ['Rectangle', 'Triangle']
    stmts = body(program, 'Main').stmts
    assert [program.is_parent_assignment(s) for s in stmts] == [False, False, False, True, False]


def test_inherited_fields(resolved):
    program = resolved('prv_shapes')
    assert list(program.fields_of('Rectangle')) == ['numSides', 'width', 'height']
    assert program.fields_of('Triangle')['numSides'].type == INT


def test_sibling_constructors_need_equal_parameter_types(resolved):
    program = resolved('dcr_quantifier')
    assert program.sibling_constructors('MyQuantifier', 'Some') == ['All']
    assert program.sibling_constructors('MyQuantifier', 'None') == []
    assert program.sibling_constructors('Missing', 'Some') == []
    (call,) = [c for c in nodes(program, FunctionCall) if c.callee == 'Some']
    assert program.signature_of(call) is None
    assert program.type_of(call) == TypeRef('Datatype', name='MyQuantifier')


def test_method_call_on_object(resolved):
    program = resolved('amr_accessors')
    calls = {c.callee: c for c in nodes(program, FunctionCall)}
    assert program.signature_of(calls['getX']).receiver == 'Point'
    assert program.type_of(calls['getY']) == INT
    assert set(program.methods_of('Point')) == {'getX', 'getY'}


def test_tuple_access_type(resolved):
    program = resolved('tar_tuple')
    (assign,) = body(program, 'Pick').stmts
    assert program.type_of(assign.rhs[0]) == INT
    assert program.type_of(assign.rhs[0].receiver) == TypeRef('Tuple', (INT, INT, BOOL))


def test_parameters_shadow_fields(resolved):
    program = resolved('thi_thd_item')
    reads = [i for i in nodes(program, Identifier, lambda i: i.name == 'price')]
    assert reads and all(program.symbol_of(i).kind == 'param' for i in reads)


def test_module_constants_are_global(resolved):
    program = resolved('geometry_module')
    pi = [i for i in nodes(program, Identifier, lambda i: i.name == 'Pi')]
    assert program.symbol_of(pi[0]).kind == 'const'
    assert program.type_of(pi[0]) == REAL


def test_multi_return_call_binds_each_variable(resolved):
    program = resolved('mrr_returns')
    main = body(program, 'Main')
    scope = program.scope_of(main)
    assert scope.lookup('t', main.span.end).type == INT
    assert scope.lookup('ok', main.span.end).type == BOOL


def test_every_expression_of_a_compiled_body_has_a_scope(resolved):
    program = resolved('cir_collections')
    for node in walk(body(program, 'Collections')):
        if isinstance(node, (Identifier, FunctionCall)):
            assert program.scope_of(node) is not None


def test_unresolvable_names_are_unknown():
    program = resolve_text('method M() returns (r: int)\n{\n  r := mystery(1) + ghostly;\n}')
    plus = program.tree.declarations[0].body.stmts[0].rhs[0]
    assert not program.type_of(plus).is_known
    assert program.symbol_of(plus.rhs) is None
