import pytest
from openpyxl import load_workbook

from analysis import ALIVE, KILLED, StubAdapter, Verdict, run_campaign
from excel_manager import MUTANTS_SHEET_NAME, TABLE_SHEET_NAME, ExcelManager
from mutator import generate_all
from report_cli import CampaignReport


@pytest.fixture
def report(resolved):
    mutants = generate_all(resolved('bor_operators'), ('BBR', 'BOR'))
    survivor = next(m for m in mutants if m.operator == 'BOR')
    verdicts = dict(run_campaign(mutants, StubAdapter({'*': KILLED, survivor.id: ALIVE})))
    report = CampaignReport('bor_operators.dfy', ('BBR', 'BOR'))
    report.original_verdict = Verdict(ALIVE, 0)
    report.results = [(m, verdicts[m.id]) for m in mutants]
    return report


def test_table_rows_round_trip(tmp_path, report):
    manager = ExcelManager(str(tmp_path / 'report.xlsx'))
    manager.write_report(report)
    assert manager.read_table() == [
        ('BBR', 8, 8, 0, 0, 0),
        ('BOR', 18, 17, 1, 0, 0),
        ('Total', 26, 25, 1, 0, 0),
    ]


def test_workbook_layout(tmp_path, report):
    path = tmp_path / 'report.xlsx'
    ExcelManager(str(path)).write_report(report)
    workbook = load_workbook(path)
    assert workbook.sheetnames == [TABLE_SHEET_NAME, MUTANTS_SHEET_NAME]
    mutants = workbook[MUTANTS_SHEET_NAME]
    assert mutants['A1'].value == 'Id'
    assert mutants.max_row == 27
    assert {mutants.cell(row=r, column=5).value for r in range(2, 28)} == {KILLED, ALIVE}
    assert workbook[TABLE_SHEET_NAME]['A1'].value == 'Mutation analysis of bor_operators.dfy'


def test_missing_workbook(tmp_path):
    with pytest.raises(FileNotFoundError):
        ExcelManager(str(tmp_path / 'nope.xlsx')).read_table()


def test_text_report(report):
    text = report.to_text()
    assert text.startswith('Mutation analysis of bor_operators.dfy\n')
    assert 'Original program: Alive' in text
    assert 'Mutation score K/(K+S): 96.15%' in text
    assert 'Killed ratio K/M:       96.15%' in text
    survivor = report.survivors_with_ensures
    assert [m.id for m in survivor] == [line.split()[0] for line in text.splitlines()
                                        if ' in Ops: ' in line]


def test_csv_report(report):
    lines = report.to_csv().splitlines()
    assert lines[0] == 'operator,generated,killed,survived,invalid,timedout'
    assert lines[1:] == ['BBR,8,8,0,0,0', 'BOR,18,17,1,0,0', 'Total,26,25,1,0,0']
