"""mutdafny command line: scan, mutate and run mutation campaigns on Dafny files."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from dataclasses import dataclass, field

import click
from colorama import Fore, Style, just_fix_windows_console
from jinja2 import Environment, FileSystemLoader

from analysis import (ALIVE, INVALID, KILLED, TIMED_OUT, AdapterSpawnError, MutationScore,
                      StubAdapter, Verdict, VerifierAdapter, run_campaign, score, verify_original)
from dafny_syntax import DafnySyntaxError, parse_program
from excel_manager import ExcelManager
from mutator import SCHEMA_VERSION, MutantManager, MutantWriteError
from operator_catalog import (EXCLUDED_OPERATORS, OPERATOR_NAMES, OPERATORS, SUBSUMES, Scanner,
                              UnknownOperator, parse_operator_filter)
from resolver import resolve
from verifier_config import ConfigError, load_config

logger = logging.getLogger(__name__)

TEMPLATES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'templates')
CSV_HEADER = ['operator', 'generated', 'killed', 'survived', 'invalid', 'timedout']
FORMATS = ('text', 'json', 'csv', 'xlsx')

EXIT_OK = 0
EXIT_PARSE_ERROR = 2
EXIT_BAD_OPERATOR = 3
EXIT_IO_ERROR = 4
EXIT_ORIGINAL_NOT_VERIFIED = 5

VERDICT_COLORS = {KILLED: Fore.GREEN, ALIVE: Fore.RED, INVALID: Fore.YELLOW, TIMED_OUT: Fore.CYAN}


@dataclass
class CampaignReport:
    file: str
    operators: tuple
    results: list = field(default_factory=list)
    original_verdict: Verdict | None = None
    timings: dict = field(default_factory=lambda: dict.fromkeys(
        ('scan', 'mutate', 'analyze', 'total'), 0.0))

    @property
    def totals(self) -> MutationScore:
        return score((mutant.id, verdict) for mutant, verdict in self.results)

    @property
    def rows(self):
        by_operator = self.totals.by_operator
        return [(op, by_operator.get(op, MutationScore())) for op in self.operators]

    @property
    def duplicates(self):
        return [mutant for mutant, _ in self.results if mutant.duplicate_of]

    @property
    def survivors_with_ensures(self):
        return [mutant for mutant, verdict in self.results
                if verdict.status == ALIVE and mutant.callable_has_ensures]

    def to_dict(self):
        totals = self.totals
        return {
            'schema_version': SCHEMA_VERSION,
            'file': self.file,
            'original_verdict': self.original_verdict.status if self.original_verdict else None,
            'operators': [{'operator': op, 'generated': counts.total, **counts.to_dict()}
                          for op, counts in self.rows],
            'totals': {'generated': totals.total, **totals.to_dict()},
            'timings': {name: round(seconds, 3) for name, seconds in self.timings.items()},
            'mutants': [{
                'id': mutant.id,
                'operator': mutant.operator,
                'line': mutant.line,
                'column': mutant.column,
                'callable': mutant.enclosing_callable,
                'callable_has_ensures': mutant.callable_has_ensures,
                'duplicate_of': mutant.duplicate_of,
                'original': mutant.target.original,
                'replacement': mutant.target.replacement,
                'verdict': verdict.to_dict(),
            } for mutant, verdict in self.results],
            'survivors_with_ensures': [m.id for m in self.survivors_with_ensures],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + '\n'

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for op, counts in self.rows + [('Total', self.totals)]:
            writer.writerow([op, counts.total, counts.killed, counts.survived, counts.invalid,
                             counts.timed_out])
        return buffer.getvalue()

    def to_text(self):
        environment = Environment(loader=FileSystemLoader(TEMPLATES_DIR),
                                  keep_trailing_newline=True)
        template = environment.get_template('report.txt.j2')
        return template.render(report=self, row=_text_row, percent=_percent)


def _percent(value):
    return 'n/a' if value is None else f"{value * 100:.2f}%"


def _text_row(label, counts: MutationScore):
    def cell(count):
        share = count / counts.total * 100 if counts.total else 0.0
        return f"{count} ({share:.2f}%)"
    return (f"{label:<6} {counts.total:>8} {cell(counts.killed):>17} {cell(counts.survived):>17} "
            f"{cell(counts.invalid):>17} {cell(counts.timed_out):>17}")


def read_source(path):
    try:
        with open(path, 'r', encoding='utf-8', newline='') as f:
            return f.read()
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Cannot read {path}: {e}")
        click.echo(f"error: cannot read {path}: {e}", err=True)
        raise SystemExit(EXIT_IO_ERROR)


def load_program(path):
    text = read_source(path)
    try:
        tree = parse_program(text)
    except DafnySyntaxError as e:
        logger.error(f"Parse error in {path}: {e}")
        click.echo(f"{path}:{e.line}:{e.column}: error: {e}", err=True)
        raise SystemExit(EXIT_PARSE_ERROR)
    logger.info(f"Parsed {path}: {len(text)} characters, {len(tree.declarations)} declarations")
    return resolve(tree)


def selected_operators(text):
    try:
        return parse_operator_filter(text)
    except UnknownOperator as e:
        logger.error(str(e))
        click.echo(f"error: {e}", err=True)
        raise SystemExit(EXIT_BAD_OPERATOR)


def generate(path, operators, out_dir=None):
    program = load_program(path)
    try:
        return MutantManager(out_dir).generate_all(program, operators, path)
    except MutantWriteError as e:
        click.echo(f"error: {e}", err=True)
        raise SystemExit(EXIT_IO_ERROR)


def build_adapter(verifier_config, stub_verdicts, timeout):
    try:
        if stub_verdicts:
            return StubAdapter.from_file(stub_verdicts)
        return VerifierAdapter(load_config(verifier_config, timeout))
    except (ConfigError, ValueError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        raise SystemExit(EXIT_IO_ERROR)


def write_reports(report: CampaignReport, formats, prefix):
    for fmt in formats:
        if fmt == 'text':
            click.echo(report.to_text(), nl=False)
            continue
        path = f"{prefix}.{fmt}"
        try:
            if fmt == 'xlsx':
                ExcelManager(path).write_report(report)
            else:
                with open(path, 'w', encoding='utf-8', newline='') as f:
                    f.write(report.to_json() if fmt == 'json' else report.to_csv())
        except OSError as e:
            logger.error(f"Cannot write {fmt} report: {e}")
            click.echo(f"error: cannot write {path}: {e}", err=True)
            raise SystemExit(EXIT_IO_ERROR)
        logger.info(f"Wrote {fmt} report to {path}")
        click.echo(f"{fmt} report written to {path}")


def colored(status):
    return f"{VERDICT_COLORS.get(status, '')}{status}{Style.RESET_ALL}"


operators_option = click.option('--operators', 'operator_filter', default=None,
                                help='Comma separated operator ids (default: all 32).')


@click.group()
@click.option('--log-file', default='mutdafny.log', show_default=True, help='Log file path.')
@click.option('--verbose', is_flag=True, help='Log at debug level.')
def mutdafny(log_file, verbose):
    """Mutation testing for Dafny programs."""
    logging.basicConfig(filename=log_file, level=logging.DEBUG if verbose else logging.INFO,
                        format='%(asctime)s - %(levelname)s - %(message)s')
    just_fix_windows_console()


@mutdafny.command()
@click.argument('file', type=click.Path(dir_okay=False))
@operators_option
@click.option('--format', 'fmt', type=click.Choice(['text', 'json']), default='text',
              show_default=True)
def scan(file, operator_filter, fmt):
    """List the mutation targets of FILE."""
    operators = selected_operators(operator_filter)
    started = time.monotonic()
    mutants = generate(file, operators)
    logger.info(f"Scan of {file}: {len(mutants)} targets in {time.monotonic() - started:.2f}s")
    if fmt == 'json':
        click.echo(json.dumps({'schema_version': SCHEMA_VERSION, 'file': file,
                               'mutants': [m.manifest_entry() for m in mutants]},
                              ensure_ascii=False, indent=2))
        return
    for mutant in mutants:
        click.echo(f"{mutant.id:<22} {mutant.line}:{mutant.column}  "
                   f"{mutant.target.original!r} -> {mutant.target.replacement!r}")
    click.echo(f"{len(mutants)} targets")


@mutdafny.command()
@click.argument('file', type=click.Path(dir_okay=False))
@operators_option
@click.option('--out', 'out_dir', default='mutants', show_default=True,
              help='Directory receiving the mutant files and manifest.json.')
def mutate(file, operator_filter, out_dir):
    """Write one mutant file per target of FILE."""
    operators = selected_operators(operator_filter)
    mutants = generate(file, operators, out_dir)
    counts = {}
    for mutant in mutants:
        counts[mutant.operator] = counts.get(mutant.operator, 0) + 1
    for op in operators:
        if counts.get(op):
            click.echo(f"{op}  {counts[op]}")
    click.echo(f"{len(mutants)} mutants written to {out_dir}")


@mutdafny.command()
@click.argument('file', type=click.Path(dir_okay=False))
@operators_option
@click.option('--out', 'out_dir', default=None, help='Keep the mutant files in this directory.')
@click.option('--jobs', default=1, show_default=True, type=click.IntRange(min=1))
@click.option('--timeout', type=float, default=None, help='Seconds per verifier run.')
@click.option('--format', 'formats', type=click.Choice(FORMATS), multiple=True,
              help='Report format, repeatable (default: text).')
@click.option('--report', 'report_prefix', default=None,
              help='Path prefix of json/csv/xlsx reports (default: FILE without extension).')
@click.option('--verifier-config', default=None, type=click.Path(dir_okay=False),
              help='Verifier adapter JSON file.')
@click.option('--stub-verdicts', default=None, type=click.Path(dir_okay=False),
              help='JSON map of mutant id to verdict, used instead of a verifier.')
def run(file, operator_filter, out_dir, jobs, timeout, formats, report_prefix,
        verifier_config, stub_verdicts):
    """Generate the mutants of FILE and verify each of them."""
    operators = selected_operators(operator_filter)
    adapter = build_adapter(verifier_config, stub_verdicts, timeout)
    report = CampaignReport(file, operators)
    started = time.monotonic()
    program = load_program(file)
    try:
        report.original_verdict = verify_original(file, adapter)
    except AdapterSpawnError as e:
        click.echo(f"error: {e}", err=True)
        raise SystemExit(EXIT_IO_ERROR)
    if report.original_verdict.status != ALIVE:
        logger.error(f"Original {file} is {report.original_verdict.status}, campaign aborted")
        click.echo(f"error: {file} does not verify ({report.original_verdict.status})", err=True)
        raise SystemExit(EXIT_ORIGINAL_NOT_VERIFIED)

    phase = time.monotonic()
    targets = Scanner(program).scan(operators)
    scan_seconds = time.monotonic() - phase
    phase = time.monotonic()
    try:
        mutants = MutantManager(out_dir).build(program.tree.source_text, targets, file)
    except MutantWriteError as e:
        click.echo(f"error: {e}", err=True)
        raise SystemExit(EXIT_IO_ERROR)
    mutate_seconds = time.monotonic() - phase

    phase = time.monotonic()
    try:
        verdicts = dict(run_campaign(mutants, adapter, jobs))
    except AdapterSpawnError as e:
        click.echo(f"error: {e}", err=True)
        raise SystemExit(EXIT_IO_ERROR)
    report.results = [(mutant, verdicts[mutant.id]) for mutant in mutants]
    report.timings = {'scan': scan_seconds, 'mutate': mutate_seconds,
                      'analyze': time.monotonic() - phase, 'total': time.monotonic() - started}

    totals = report.totals
    logger.info(f"Campaign on {file}: {totals.total} mutants, {totals.killed} killed, "
                f"{totals.survived} survived, {totals.invalid} invalid, "
                f"{totals.timed_out} timed out, score {_percent(totals.score)}")
    if not formats:
        formats = ('text',)
    write_reports(report, formats, report_prefix or os.path.splitext(file)[0])
    for mutant in report.survivors_with_ensures:
        click.echo(f"{colored(ALIVE)} {mutant.id} in {mutant.enclosing_callable}")


@mutdafny.command('operators')
def list_operators():
    """Describe the 32 mutation operators and the ones left out."""
    for op in OPERATORS:
        family = f"  (covers {', '.join(SUBSUMES[op])})" if op in SUBSUMES else ''
        click.echo(f"{op}  {OPERATOR_NAMES[op]}{family}")
    click.echo('')
    click.echo('Not applicable to Dafny:')
    for name, reason in EXCLUDED_OPERATORS.items():
        click.echo(f"  {name}: {reason}")


if __name__ == '__main__':
    mutdafny()
