import pandas as pd
from openpyxl.styles import Font
from openpyxl.utils import get_column_letter

from .tables import records_frame, summary_frame

MIN_COLUMN_WIDTH = 10


def _style_sheet(ws):
    for cell in ws[1]:
        cell.font = Font(bold=True)
    ws.freeze_panes = "A2"
    for col_i, column in enumerate(ws.iter_cols(min_row=1, max_row=1), start=1):
        width = max(MIN_COLUMN_WIDTH, len(str(column[0].value)) + 2)
        ws.column_dimensions[get_column_letter(col_i)].width = width


def write_workbook(records, summary, path):
    """Summary and records as two sheets of one xlsx workbook."""
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        summary_frame(summary).to_excel(writer, sheet_name="summary", index=False)
        records_frame(records).to_excel(writer, sheet_name="records", index=False)
        for ws in writer.book.worksheets:
            _style_sheet(ws)
    return path
