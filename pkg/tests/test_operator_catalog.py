import pytest

import oracle
from conftest import ALL_FIXTURES, resolve_text
from dafny_syntax import Literal
from operator_catalog import (
    EXCLUDED_OPERATORS, OPERATORS, SUBSUMES, TARGET_FUNCTIONS, Scanner, UnknownOperator,
    default_literal, literal_replacements, parse_operator_filter, scan,
)
from resolver import INT, REAL, TypeRef


def counts(program, *operators):
    scanner = Scanner(program)
    return {op: len(scanner.targets(op)) for op in operators}


def replacements(program, op):
    return [t.replacement for t in Scanner(program).targets(op)]


def test_catalog_has_exactly_32_operators():
    assert len(OPERATORS) == 32
    assert list(OPERATORS) == sorted(OPERATORS)
    assert set(SUBSUMES['BOR']) == {'AOR', 'ROR', 'COR', 'LOR', 'SOR'}
    assert 'ORU' in EXCLUDED_OPERATORS


def test_every_operator_has_a_scanner_and_a_module_function():
    import operator_catalog
    for op in OPERATORS:
        assert callable(getattr(Scanner, f"scan_{op.lower()}"))
        assert callable(getattr(operator_catalog, f"targets_{op}"))
        assert TARGET_FUNCTIONS[op].__name__ == f"targets_{op}"


def test_operator_filter():
    assert parse_operator_filter(None) == OPERATORS
    assert parse_operator_filter('sdl, BOR,bor') == ('BOR', 'SDL')
    assert parse_operator_filter(['UOI']) == ('UOI',)
    with pytest.raises(UnknownOperator) as info:
        parse_operator_filter('BOR,AOR')
    assert info.value.name == 'AOR'


def test_unknown_operator_in_targets(resolved):
    with pytest.raises(UnknownOperator):
        Scanner(resolved('empty')).targets('XYZ')


@pytest.mark.parametrize('name', ALL_FIXTURES)
def test_scanner_agrees_with_brute_force_counts(name, resolved):
    program = resolved(name)
    scanner = Scanner(program)
    for op, counter in oracle.COUNTERS.items():
        assert len(scanner.targets(op)) == counter(program), op


@pytest.mark.parametrize('name', ALL_FIXTURES)
def test_targets_are_sorted_and_never_identity(name, resolved):
    program = resolved(name)
    source = program.tree.source_text
    for target in scan(program):
        assert not target.is_identity
        for edit in target.edits:
            assert source[edit.span.start:edit.span.end] == edit.original
    for op in OPERATORS:
        spans = [(t.span.start, t.span.end) for t in Scanner(program).targets(op)]
        assert spans == sorted(spans)


@pytest.mark.parametrize('name', ALL_FIXTURES)
def test_no_edit_touches_a_specification(name, resolved):
    program = resolved(name)
    scanner = Scanner(program)
    for target in scan(program):
        for edit in target.edits:
            for spec in scanner.spec_spans:
                # a moved or deleted loop carries its invariants along whole
                assert not spec.overlaps(edit.span) or edit.span.contains(spec)


def test_shared_elements_counts(resolved):
    program = resolved('shared_elements')
    assert counts(program, 'BBR', 'BOR', 'CBE', 'CIR', 'EVR', 'LBI', 'LVR', 'SDL', 'SWS',
                  'UOI', 'VER') == {
        'BBR': 2, 'BOR': 6, 'CBE': 1, 'CIR': 1, 'EVR': 5, 'LBI': 1, 'LVR': 2, 'SDL': 4,
        'SWS': 2, 'UOI': 10, 'VER': 5,
    }
    assert counts(program, 'MCR', 'MAP', 'MVR', 'LSR', 'SLD', 'CBR', 'SWV') == dict.fromkeys(
        ('MCR', 'MAP', 'MVR', 'LSR', 'SLD', 'CBR', 'SWV'), 0)


def test_shared_elements_targets_sit_in_the_method_with_ensures(resolved):
    targets = scan(resolved('shared_elements'))
    assert targets
    assert {t.enclosing_callable for t in targets} == {'SharedElements'}
    assert all(t.callable_has_ensures for t in targets)


def test_predicate_body_yields_nothing():
    program = resolve_text('predicate P(x: int)\n{ exists i :: i == x }\n')
    assert scan(program) == []


def test_ghost_code_is_never_mutated(resolved):
    program = resolved('ghost_code')
    assert {t.enclosing_callable for t in scan(program)} == {'Triple'}
    assert len(TARGET_FUNCTIONS['BOR'](program)) == 4


@pytest.mark.parametrize('fixture, expected', [
    ('prv_shapes', {'PRV': 1}),
    ('far_item', {'FAR': 2, 'EVR': 3}),
    ('mcr_sum', {'MCR': 1, 'MAP': 2, 'SAR': 1, 'MRR': 1, 'MVR': 0, 'EVR': 9}),
    ('dcr_quantifier', {'DCR': 1, 'CIR': 1}),
    ('cbe_function', {'CBE': 2, 'CIR': 1, 'BBR': 2}),
    ('swv_circle', {'SWV': 1}),
    ('amr_accessors', {'AMR': 2, 'MCR': 2, 'MMR': 0}),
    ('mmr_modifiers', {'MMR': 1, 'MCR': 1, 'AMR': 0}),
    ('thi_thd_item', {'THI': 3, 'THD': 1}),
    ('tar_tuple', {'TAR': 1}),
    ('tar_nested', {'TAR': 1}),
    ('mnr_normalize', {'MNR': 1}),
    ('sld_slices', {'SLD': 4}),
    ('cbr_match', {'CBR': 3}),
    ('lsr_loops', {'LSR': 5, 'LBI': 2}),
    ('vdl_locals', {'VDL': 2}),
    ('odl_operators', {'ODL': 2}),
    ('mrr_returns', {'MRR': 1}),
    ('cir_collections', {'CIR': 4}),
    ('bor_operators', {'BOR': 18, 'BBR': 8}),
    ('lvr_literals', {'LVR': 16}),
    ('uoi_unary', {'UOI': 4, 'UOD': 1}),
    ('sws_statements', {'SWS': 1}),
    ('geometry_module', {'BOR': 6}),
])
def test_operator_counts_per_fixture(fixture, expected, resolved):
    assert counts(resolved(fixture), *expected) == expected


def test_binary_operator_replacements(resolved):
    program = resolved('bor_operators')
    targets = Scanner(program).targets('BOR')
    by_original = {}
    for target in targets:
        by_original.setdefault(target.original, []).append(target.replacement)
    assert by_original['+'] == ['-', '*']
    assert by_original['/'] == ['%']
    assert by_original['==>'] == ['&&', '||', '<==', '<==>']
    assert sorted(by_original['<']) == sorted(['==', '!=', '<=', '>', '>='])
    assert by_original['=='] == ['!=', '!=', '<', '<=', '>', '>=']


def test_replacing_the_outer_operator_adds_parentheses(resolved):
    program = resolved('ghost_code')
    replaced = replacements(program, 'BOR')
    assert '(x + x) * x' in replaced
    assert '*' in replaced


def test_literal_replacements():
    def lit(kind, value):
        return Literal(None, kind, value, str(value))
    assert literal_replacements(lit('int', 0)) == ['1', '-1']
    assert literal_replacements(lit('int', 10)) == ['0', '1', '-1', '11', '9']
    assert literal_replacements(lit('int', 1), sign=-1) == ['0', '1', '-2']
    assert literal_replacements(lit('bool', True)) == ['false']
    assert literal_replacements(lit('string', '')) == ['"A"']
    assert literal_replacements(lit('char', 'a')) == ["'b'"]
    assert literal_replacements(lit('null', None)) == []


def test_default_literals():
    assert default_literal(INT) == '0'
    assert default_literal(REAL) == '0.0'
    assert default_literal(TypeRef('Seq', (INT,))) == '[]'
    assert default_literal(TypeRef('Class', name='Node')) is None


def test_uoi_wraps_expressions(resolved):
    assert sorted(replacements(resolved('uoi_unary'), 'UOI')) == sorted(
        ['-(a + b)', '-(a)', '-(b)', '!(!p)'])
    assert replacements(resolved('uoi_unary'), 'UOD') == ['p']


def test_field_access_replacement(resolved):
    assert replacements(resolved('far_item'), 'FAR') == ['stock', 'price']


def test_this_insertion_and_deletion(resolved):
    program = resolved('thi_thd_item')
    assert replacements(program, 'THI') == ['this.price', 'this.stock', 'this.stock']
    assert replacements(program, 'THD') == ['stock']


def test_call_operators(resolved):
    program = resolved('mcr_sum')
    assert replacements(program, 'MCR') == ['Multiply']
    assert replacements(program, 'MAP') == ['10', '20']
    assert replacements(program, 'SAR') == ['20 | 10']
    assert replacements(program, 'MRR') == ['0']
    assert replacements(resolved('mrr_returns'), 'MRR') == ['0, false']
    assert replacements(resolved('mnr_normalize'), 'MNR') == ['s']
    assert replacements(resolved('amr_accessors'), 'AMR') == ['getY', 'getX']
    assert replacements(resolved('mmr_modifiers'), 'MMR') == ['setY']


def test_datatype_and_collection_operators(resolved):
    assert replacements(resolved('dcr_quantifier'), 'DCR') == ['All']
    assert replacements(resolved('cir_collections'), 'CIR') == \
        ['[]', 'map[]', 'multiset{}', 'null']
    assert replacements(resolved('tar_tuple'), 'TAR') == ['1']
    assert replacements(resolved('tar_nested'), 'TAR') == ['0']
    assert replacements(resolved('prv_shapes'), 'PRV') == ['triangle']


def test_case_block_replacement(resolved):
    assert replacements(resolved('cbr_match'), 'CBR') == \
        ['code := 0;', 'code := 0;', 'code := 1;']


def test_loop_statement_replacement(resolved):
    assert replacements(resolved('lsr_loops'), 'LSR') == \
        ['break;', 'return;', 'continue;', 'return;', 'continue;']


def test_conditional_block_extraction(resolved):
    assert replacements(resolved('cbe_function'), 'CBE') == \
        ['[]', 'var b, c := a + a, a * a;\n    [a, b, c]']


def test_deletions_collapse_operators(resolved):
    assert replacements(resolved('vdl_locals'), 'VDL') == ['a', 'b']
    assert replacements(resolved('odl_operators'), 'ODL') == ['a', 'c']


def test_statement_deletion_in_a_void_method_empties_the_body(resolved):
    targets = TARGET_FUNCTIONS['SDL'](resolved('mmr_modifiers'))
    assert [t.replacement for t in targets if t.replacement == '{}'] == ['{}'] * 4
    descriptions = [t.description for t in targets]
    assert 'delete the body of Main' in descriptions
    assert 'delete the body of Point.constructor' in descriptions


def test_literal_value_replacement_for_negative_literal(resolved):
    program = resolved('lvr_literals')
    negated = [t for t in Scanner(program).targets('LVR') if t.original == '-1']
    assert [t.replacement for t in negated] == ['0', '1', '-2']


def test_empty_multiset_replaces_the_whole_display(resolved):
    (target,) = [t for t in Scanner(resolved('cir_collections')).targets('CIR')
                 if t.replacement == 'multiset{}']
    assert target.original == 'multiset{4, 5}'
