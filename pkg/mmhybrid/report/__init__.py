from .tables import (
    RECORDS_COLUMNS,
    SUMMARY_COLUMNS,
    read_csv,
    records_frame,
    summary_frame,
    write_channel_csv,
    write_records_csv,
    write_summary_csv,
)
from .workbook import write_workbook

__all__ = [
    "RECORDS_COLUMNS",
    "SUMMARY_COLUMNS",
    "read_csv",
    "records_frame",
    "summary_frame",
    "write_channel_csv",
    "write_records_csv",
    "write_summary_csv",
    "write_workbook",
]
