"""
Pairwise preference statistics: win rates among decisive comparisons with Wilson score intervals.
"""
import csv
import io
import json
import math
from collections import namedtuple
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from scipy.stats import norm

from paramcaption.errors import EvaluationError, SchemaError

CANDIDATE = 'candidate'
BASELINE = 'baseline'
TIE = 'tie'
VERDICTS = (CANDIDATE, BASELINE, TIE)

WinRate = namedtuple('WinRate', ['wins', 'n', 'rate'])

@dataclass(frozen=True)
class PreferenceRecord:
    item_id: str
    candidate: str
    baseline: str
    verdict: str

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise SchemaError('verdict', 'must be one of %s, got "%s"' % (', '.join(VERDICTS), self.verdict))

@dataclass(frozen=True)
class WinRateReport:
    candidate: str
    baseline: str
    wins: int
    losses: int
    ties: int
    win_rate: float
    ci_low: float
    ci_high: float

    def to_dict(self, decimals=3):
        return {
            'candidate': self.candidate,
            'baseline': self.baseline,
            'wins': self.wins,
            'losses': self.losses,
            'ties': self.ties,
            'winRate': round(self.win_rate, decimals),
            'ciLow': round(self.ci_low, decimals),
            'ciHigh': round(self.ci_high, decimals),
        }

def win_rate(records):
    """Wins over decisive comparisons of one model pair; ties are ignored.

    Raises:
        EvaluationError: no decisive record.
    """
    wins = sum(1 for record in records if record.verdict == CANDIDATE)
    losses = sum(1 for record in records if record.verdict == BASELINE)
    n = wins + losses
    if n == 0:
        raise EvaluationError('no decisive comparisons (all %d records are ties)' % len(records))

    return WinRate(wins, n, wins / n)

def wilson_interval(wins, n, confidence=0.95):
    """Wilson score interval for a binomial proportion wins / n."""
    if n < 1 or not 0 <= wins <= n:
        raise ValueError('Need 0 <= wins <= n and n >= 1, got wins=%s n=%s' % (wins, n))
    if not 0 < confidence < 1:
        raise ValueError('confidence must be in (0, 1), got %s' % confidence)

    z = norm.ppf(1 - (1 - confidence) / 2)
    p = wins / n
    z2 = z * z
    denominator = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denominator
    half_width = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denominator

    low = 0.0 if wins == 0 else max(0.0, center - half_width)
    high = 1.0 if wins == n else min(1.0, center + half_width)

    return low, high

def win_rate_reports(records, confidence=0.95):
    """One WinRateReport per (candidate, baseline) pair, sorted by baseline then candidate."""
    pairs = {}
    for record in records:
        pairs.setdefault((record.candidate, record.baseline), []).append(record)

    reports = []
    for (candidate, baseline), group in sorted(pairs.items(), key=lambda item: (item[0][1], item[0][0])):
        wins, n, rate = win_rate(group)
        low, high = wilson_interval(wins, n, confidence)
        reports.append(WinRateReport(
            candidate=candidate,
            baseline=baseline,
            wins=wins,
            losses=n - wins,
            ties=len(group) - n,
            win_rate=rate,
            ci_low=low,
            ci_high=high,
        ))

    return reports

def percent(value):
    """Half-up rounding to one decimal of a percentage, as printed in tables."""
    return float(Decimal(repr(float(value * 100))).quantize(Decimal('0.1'), rounding=ROUND_HALF_UP))

def format_table(reports, confidence=0.95):
    """Text table: one row per baseline with win rate and confidence interval in percent."""
    lines = ['%-24s %10s   %s' % ('Model (vs. candidate)', 'Win rate', '%d%% CI' % round(confidence * 100))]
    for report in reports:
        lines.append('%-24s %9.1f%%   [%.1f, %.1f]' % (
            report.baseline, percent(report.win_rate), percent(report.ci_low), percent(report.ci_high)))
    return '\n'.join(lines) + '\n'

def _record(raw, where):
    try:
        return PreferenceRecord(
            item_id=str(raw['item_id']),
            candidate=str(raw['candidate']),
            baseline=str(raw['baseline']),
            verdict=str(raw['verdict']).strip().lower(),
        )
    except KeyError as error:
        raise SchemaError(where, 'missing field %s' % error)
    except SchemaError as error:
        raise SchemaError(where, error.message)

def parse_records(text, filename=''):
    """Records from CSV (header item_id,candidate,baseline,verdict) or a JSON array."""
    if filename.endswith('.json') or text.lstrip().startswith('['):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as error:
            raise SchemaError(filename or '$', 'malformed JSON: %s' % error)
        if not isinstance(rows, list):
            raise SchemaError(filename or '$', 'expected a JSON array of records')
    else:
        rows = list(csv.DictReader(io.StringIO(text)))

    return [_record(row, '%s[%d]' % (filename, i)) for i, row in enumerate(rows)]
