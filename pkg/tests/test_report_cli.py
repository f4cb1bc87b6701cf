import json

import pytest
from click.testing import CliRunner

from conftest import fixture_path
from operator_catalog import OPERATORS
from report_cli import (
    EXIT_BAD_OPERATOR, EXIT_IO_ERROR, EXIT_ORIGINAL_NOT_VERIFIED, EXIT_PARSE_ERROR, mutdafny,
)


@pytest.fixture
def invoke(tmp_path):
    runner = CliRunner()

    def call(*args):
        return runner.invoke(mutdafny, ['--log-file', str(tmp_path / 'mutdafny.log'), *args])
    return call


@pytest.fixture
def stub(tmp_path):
    def write(verdicts):
        path = tmp_path / 'stub.json'
        path.write_text(json.dumps(verdicts), encoding='utf-8')
        return str(path)
    return write


def run_json(invoke, stub, prefix, *extra):
    result = invoke('run', fixture_path('shared_elements'), '--stub-verdicts',
                    stub({'*': 'Killed'}), '--format', 'json', '--report', str(prefix), *extra)
    assert result.exit_code == 0, result.output
    with open(f"{prefix}.json", encoding='utf-8') as f:
        return json.load(f)


def test_run_with_stub_verdicts(tmp_path, invoke, stub):
    report = run_json(invoke, stub, tmp_path / 'shared')
    assert report['original_verdict'] == 'Alive'
    assert report['totals']['score'] == 1.0
    assert report['totals']['generated'] == len(report['mutants'])
    assert report['survivors_with_ensures'] == []
    assert {row['operator'] for row in report['operators']} == set(OPERATORS)


def test_report_is_the_same_for_any_job_count(tmp_path, invoke, stub):
    def stable(report):
        report.pop('timings')
        for mutant in report['mutants']:
            mutant['verdict'].pop('duration')
        return report
    sequential = run_json(invoke, stub, tmp_path / 'one', '--jobs', '1')
    parallel = run_json(invoke, stub, tmp_path / 'eight', '--jobs', '8')
    assert stable(sequential) == stable(parallel)


def test_text_and_csv_reports(tmp_path, invoke, stub):
    prefix = tmp_path / 'sdl'
    result = invoke('run', fixture_path('shared_elements'), '--operators', 'SDL',
                    '--stub-verdicts', stub({'*': 'Alive'}), '--format', 'text',
                    '--format', 'csv', '--report', str(prefix))
    assert result.exit_code == 0, result.output
    assert 'Mutation score K/(K+S): 0.00%' in result.output
    assert f"csv report written to {prefix}.csv" in result.output
    assert 'SDL-' in result.output
    with open(f"{prefix}.csv", encoding='utf-8') as f:
        assert f.read().splitlines() == [
            'operator,generated,killed,survived,invalid,timedout',
            'SDL,4,0,4,0,0',
            'Total,4,0,4,0,0',
        ]


def test_xlsx_report(tmp_path, invoke, stub):
    prefix = tmp_path / 'bor'
    result = invoke('run', fixture_path('bor_operators'), '--operators', 'BOR',
                    '--stub-verdicts', stub({'*': 'Killed'}), '--format', 'xlsx',
                    '--report', str(prefix))
    assert result.exit_code == 0, result.output
    assert (tmp_path / 'bor.xlsx').exists()


def test_original_that_does_not_verify_aborts(tmp_path, invoke, stub):
    result = invoke('run', fixture_path('shared_elements'), '--stub-verdicts',
                    stub({'__original__': 'Killed', '*': 'Killed'}),
                    '--report', str(tmp_path / 'r'))
    assert result.exit_code == EXIT_ORIGINAL_NOT_VERIFIED
    assert not (tmp_path / 'r.json').exists()


def test_malformed_file_is_a_parse_error(tmp_path, invoke):
    broken = tmp_path / 'broken.dfy'
    broken.write_text('method M( {\n}\n', encoding='utf-8')
    result = invoke('scan', str(broken))
    assert result.exit_code == EXIT_PARSE_ERROR


def test_unknown_operator(invoke):
    result = invoke('scan', fixture_path('shared_elements'), '--operators', 'BOR,XYZ')
    assert result.exit_code == EXIT_BAD_OPERATOR


def test_missing_input_file(tmp_path, invoke):
    result = invoke('scan', str(tmp_path / 'missing.dfy'))
    assert result.exit_code == EXIT_IO_ERROR


def test_input_that_is_not_utf8(tmp_path, invoke):
    latin = tmp_path / 'latin.dfy'
    latin.write_bytes('method M() { var s := "caf\u00e9"; }\n'.encode('latin-1'))
    result = invoke('scan', str(latin))
    assert result.exit_code == EXIT_IO_ERROR
    assert 'cannot read' in result.output


def test_unwritable_mutant_directory(tmp_path, invoke):
    blocker = tmp_path / 'blocker'
    blocker.write_text('file', encoding='utf-8')
    result = invoke('mutate', fixture_path('bor_operators'), '--out', str(blocker / 'out'))
    assert result.exit_code == EXIT_IO_ERROR


def test_bad_verifier_config(tmp_path, invoke):
    config = tmp_path / 'verifier.json'
    config.write_text(json.dumps({'timeout_seconds': -1}), encoding='utf-8')
    result = invoke('run', fixture_path('shared_elements'), '--verifier-config', str(config))
    assert result.exit_code == EXIT_IO_ERROR


def test_scan_text_and_json(invoke):
    result = invoke('scan', fixture_path('bor_operators'), '--operators', 'BOR')
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[-1] == '18 targets'
    assert lines[0].startswith('BOR-3-10-1')
    result = invoke('scan', fixture_path('bor_operators'), '--operators', 'BOR', '--format', 'json')
    scanned = json.loads(result.output)
    assert len(scanned['mutants']) == 18
    assert scanned['mutants'][0]['replacement'] == '-'


def test_mutate_writes_files_and_manifest(tmp_path, invoke):
    out = tmp_path / 'mutants'
    result = invoke('mutate', fixture_path('bor_operators'), '--operators', 'bor,bbr',
                    '--out', str(out))
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == ['BBR  8', 'BOR  18', f"26 mutants written to {out}"]
    with open(out / 'manifest.json', encoding='utf-8') as f:
        manifest = json.load(f)
    assert len(manifest['mutants']) == 26
    assert (out / 'BOR' / 'bor_operators.BOR-3-10-1.dfy').exists()


def test_operators_listing(invoke):
    result = invoke('operators')
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert [line.split()[0] for line in lines[:32]] == list(OPERATORS)
    assert any(line.startswith('BOR  Binary Operator Replacement  (covers ') for line in lines)
    assert 'Not applicable to Dafny:' in lines
    assert any(line.strip().startswith('ORU:') for line in lines)


@pytest.mark.parametrize('op', OPERATORS)
def test_every_operator_can_be_scanned_alone(invoke, op):
    result = invoke('scan', fixture_path('shared_elements'), '--operators', op)
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[-1].endswith(' targets')
