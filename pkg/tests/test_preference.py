import json

import pytest

from paramcaption.errors import EvaluationError, SchemaError
from paramcaption.preference import (
    PreferenceRecord, format_table, parse_records, percent, win_rate, win_rate_reports, wilson_interval
)

# Decisive wins, losses and ties against three baselines
COUNTS = {'sdxl': (42, 3, 15), 'flux': (30, 16, 14), 'gemini': (35, 11, 14)}

def _records(counts=COUNTS, candidate='ours'):
    records = []
    for baseline, (wins, losses, ties) in sorted(counts.items()):
        verdicts = ['candidate'] * wins + ['baseline'] * losses + ['tie'] * ties
        records.extend(PreferenceRecord('%s-%d' % (baseline, i), candidate, baseline, verdict)
                       for i, verdict in enumerate(verdicts))
    return records

def test_wilson_interval_goldens():
    assert wilson_interval(42, 45) == pytest.approx((0.821, 0.977), abs=5e-4)
    assert wilson_interval(30, 46) == pytest.approx((0.508, 0.773), abs=5e-4)
    assert wilson_interval(35, 46) == pytest.approx((0.621, 0.861), abs=5e-4)

def test_wilson_edges():
    low, high = wilson_interval(0, 1)
    assert low == 0.0
    assert 0 < high < 1
    low, high = wilson_interval(1, 1)
    assert high == 1.0
    assert 0 < low < 1

    with pytest.raises(ValueError):
        wilson_interval(3, 2)
    with pytest.raises(ValueError):
        wilson_interval(0, 0)

def test_wilson_contains_the_rate():
    for n in range(1, 60):
        for wins in range(n + 1):
            low, high = wilson_interval(wins, n)
            assert 0 <= low <= wins / n <= high <= 1

def test_win_rate_ignores_ties():
    wins, n, rate = win_rate(_records({'x': (3, 1, 10)}))
    assert (wins, n) == (3, 4)
    assert rate == 0.75

    with pytest.raises(EvaluationError):
        win_rate(_records({'x': (0, 0, 5)}))

def test_reports_reproduce_table():
    reports = {report.baseline: report for report in win_rate_reports(_records())}
    assert [percent(reports[b].win_rate) for b in ('sdxl', 'flux', 'gemini')] == [93.3, 65.2, 76.1]
    assert (percent(reports['sdxl'].ci_low), percent(reports['sdxl'].ci_high)) == (82.1, 97.7)
    assert (percent(reports['flux'].ci_low), percent(reports['flux'].ci_high)) == (50.8, 77.3)
    assert (percent(reports['gemini'].ci_low), percent(reports['gemini'].ci_high)) == (62.1, 86.1)
    assert reports['sdxl'].ties == 15

def test_reports_sorted_by_baseline():
    assert [report.baseline for report in win_rate_reports(_records())] == ['flux', 'gemini', 'sdxl']

def test_format_table():
    table = format_table(win_rate_reports(_records()))
    lines = table.splitlines()
    assert lines[0].startswith('Model (vs. candidate)')
    assert '95% CI' in lines[0]
    assert 'sdxl' in lines[3] and '93.3%' in lines[3] and '[82.1, 97.7]' in lines[3]

def test_percent_rounding():
    assert percent(0.1234) == 12.3
    assert percent(0.12345) == 12.3
    assert percent(0.12351) == 12.4
    assert percent(0.5) == 50.0

def test_parse_csv_and_json():
    csv_text = 'item_id,candidate,baseline,verdict\n1,ours,flux,Candidate\n2,ours,flux,tie\n'
    records = parse_records(csv_text, 'records.csv')
    assert [record.verdict for record in records] == ['candidate', 'tie']

    json_text = json.dumps([{'item_id': 1, 'candidate': 'ours', 'baseline': 'flux', 'verdict': 'baseline'}])
    assert parse_records(json_text, 'records.json')[0].baseline == 'flux'

    with pytest.raises(SchemaError):
        parse_records('item_id,candidate,baseline,verdict\n1,ours,flux,maybe\n', 'bad.csv')

def test_wilson_is_symmetric():
    for n in range(1, 40):
        for wins in range(n + 1):
            low, high = wilson_interval(wins, n)
            mirror_low, mirror_high = wilson_interval(n - wins, n)
            assert low == pytest.approx(1 - mirror_high, abs=1e-12)
            assert high == pytest.approx(1 - mirror_low, abs=1e-12)

@pytest.mark.parametrize('wins, n', [(0, 4), (1, 4), (2, 4), (3, 5), (7, 10), (1, 1)])
def test_wilson_narrows_with_more_data(wins, n):
    widths = []
    for scale in (1, 2, 4, 8, 16, 32):
        low, high = wilson_interval(wins * scale, n * scale)
        widths.append(high - low)
    assert all(later <= earlier + 1e-12 for earlier, later in zip(widths, widths[1:]))
