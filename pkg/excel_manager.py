import logging
import os

from openpyxl import Workbook, load_workbook
from openpyxl.styles import Font
from openpyxl.utils import get_column_letter

logger = logging.getLogger(__name__)

TABLE_SHEET_NAME = 'Summary'
MUTANTS_SHEET_NAME = 'Mutants'
TABLE_HEADER = ['Op.', '# Mut', '# Killed', '% Killed', '# Survived', '% Survived',
                '# Invalid', '% Invalid', '# Timeout', '% Timeout']
MUTANTS_HEADER = ['Id', 'Operator', 'Line', 'Column', 'Verdict', 'Duration (s)', 'Callable',
                  'Has ensures', 'Duplicate of', 'Original', 'Replacement']


class ExcelManager:
    def __init__(self, excel_path):
        self.excel_path = excel_path

    def write_report(self, report):
        try:
            workbook = Workbook()
            workbook.remove(workbook.active)
            self.write_table(workbook.create_sheet(TABLE_SHEET_NAME), report)
            self.write_mutants(workbook.create_sheet(MUTANTS_SHEET_NAME), report)
            workbook.save(self.excel_path)
            logger.info(f"Report workbook saved to {self.excel_path}")
        except Exception as e:
            logger.error(f"Failed to save report workbook {self.excel_path}: {e}")
            raise

    def write_row(self, sheet, row, values, bold=False):
        for column, value in enumerate(values, start=1):
            cell = sheet.cell(row=row, column=column, value=value)
            if bold:
                cell.font = Font(bold=True)

    def table_values(self, label, counts):
        values = [label, counts.total]
        for count in (counts.killed, counts.survived, counts.invalid, counts.timed_out):
            values.extend([count, count / counts.total if counts.total else None])
        return values

    def write_table(self, sheet, report):
        sheet['A1'] = f"Mutation analysis of {report.file}"
        sheet['A1'].font = Font(bold=True)
        self.write_row(sheet, 3, TABLE_HEADER, bold=True)
        row = 4
        for operator, counts in report.rows:
            self.write_row(sheet, row, self.table_values(operator, counts))
            row += 1
        self.write_row(sheet, row, self.table_values('Total', report.totals), bold=True)
        for r in range(4, row + 1):
            for column in range(4, len(TABLE_HEADER) + 1, 2):
                sheet.cell(row=r, column=column).number_format = '0.00%'
        row += 2
        sheet.cell(row=row, column=1, value='Mutation score K/(K+S)')
        sheet.cell(row=row, column=2, value=report.totals.score)
        sheet.cell(row=row + 1, column=1, value='Killed ratio K/M')
        sheet.cell(row=row + 1, column=2, value=report.totals.killed_ratio)
        sheet.cell(row=row, column=2).number_format = '0.00%'
        sheet.cell(row=row + 1, column=2).number_format = '0.00%'
        sheet.column_dimensions['A'].width = 26
        for column in range(2, len(TABLE_HEADER) + 1):
            sheet.column_dimensions[get_column_letter(column)].width = 12

    def write_mutants(self, sheet, report):
        self.write_row(sheet, 1, MUTANTS_HEADER, bold=True)
        for row, (mutant, verdict) in enumerate(report.results, start=2):
            self.write_row(sheet, row, [
                mutant.id, mutant.operator, mutant.line, mutant.column, verdict.status,
                round(verdict.duration, 3), mutant.enclosing_callable,
                mutant.callable_has_ensures, mutant.duplicate_of,
                mutant.target.original, mutant.target.replacement,
            ])
        widths = [22, 10, 8, 8, 10, 12, 24, 12, 22, 40, 40]
        for column, width in enumerate(widths, start=1):
            sheet.column_dimensions[get_column_letter(column)].width = width

    def read_table(self):
        """Operator rows of a saved workbook as (operator, generated, killed, survived, invalid, timeout)."""
        if not os.path.exists(self.excel_path):
            raise FileNotFoundError(self.excel_path)
        try:
            sheet = load_workbook(self.excel_path)[TABLE_SHEET_NAME]
            rows = []
            for values in sheet.iter_rows(min_row=4, values_only=True):
                if values[0] is None:
                    break
                rows.append((values[0], values[1], values[2], values[4], values[6], values[8]))
            return rows
        except Exception as e:
            logger.error(f"Failed to read report workbook {self.excel_path}: {e}")
            raise
