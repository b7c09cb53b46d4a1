from .wilson import (
    BASELINE, CANDIDATE, TIE, PreferenceRecord, WinRate, WinRateReport, format_table,
    parse_records, percent, win_rate, win_rate_reports, wilson_interval
)
