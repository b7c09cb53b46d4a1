import json
import logging
import os
from collections import namedtuple
from multiprocessing import Pool

from paramcaption.errors import EmptyForegroundError, EvaluationError, SchemaError
from paramcaption.palette import METRICS, aggregate_color, eval_color_case, load_image
from paramcaption.schema.parser import parse_color

ColorCase = namedtuple('ColorCase', ['case_id', 'image_path', 'target', 'model'])

def evaluate_task(task):
    """Worker entry point: (ColorCase, k, PaletteConfig) -> ('ok', result) or ('excluded', reason)."""
    case, k, palette_config = task
    try:
        image = load_image(case.image_path)
        result = eval_color_case(image, case.target, k, palette_config, case_id=case.case_id,
                                 model=case.model)
    except EmptyForegroundError as error:
        return case, k, 'excluded', str(error)
    except EvaluationError as error:
        return case, k, 'excluded', str(error)

    return case, k, 'ok', result

class ColorRunner:
    def __init__(self, config):
        self.config = config
        self.palette_config = config.palette_config()
        self.workers = config.workers
        self.k_values = list(config.k)

    def load_manifest(self, path):
        """Case manifest: JSON array of {caseId, imagePath, target: [r, g, b], model?}.
        Image paths are relative to the manifest."""
        with open(path, 'r', encoding='utf-8') as manifest_file:
            try:
                records = json.load(manifest_file)
            except json.JSONDecodeError as error:
                raise SchemaError(path, 'malformed JSON: %s' % error)
        if not isinstance(records, list):
            raise SchemaError(path, 'manifest must be a JSON array')

        base = os.path.dirname(os.path.abspath(path))
        cases = []
        seen = set()
        for i, record in enumerate(records):
            where = '%s[%d]' % (path, i)
            if not isinstance(record, dict) or 'caseId' not in record or 'imagePath' not in record:
                raise SchemaError(where, 'case needs case_id, image_path and target')
            case_id = str(record['caseId'])
            if case_id in seen:
                raise SchemaError(where, 'duplicate case_id "%s"' % case_id)
            seen.add(case_id)

            target = parse_color(record.get('target'), where + '.target')
            if target.problems():
                raise SchemaError(where + '.target', '; '.join(target.problems()))
            model = record.get('model')
            cases.append(ColorCase(case_id, os.path.join(base, record['imagePath']), target,
                                   str(model) if model is not None else None))

        logging.info('Loaded %d color cases from %s' % (len(cases), path))

        return cases

    def evaluate(self, cases):
        """Score every case for every k.

        Returns:
            dict with 'cases' (per case results), 'stats' (per model and k) and 'excluded'.
        """
        if not cases:
            raise EvaluationError('no color cases to evaluate')

        tasks = [(case, k, self.palette_config) for k in self.k_values for case in cases]
        if self.workers > 1:
            with Pool(self.workers) as pool:
                outcomes = pool.map(evaluate_task, tasks)
        else:
            outcomes = [evaluate_task(task) for task in tasks]

        # Output never depends on completion order
        outcomes.sort(key=lambda outcome: (outcome[0].model or '', outcome[1], outcome[0].case_id))

        results = []
        excluded = {}
        for case, k, status, value in outcomes:
            if status == 'ok':
                results.append(value)
            else:
                excluded.setdefault(case.case_id, value)
                logging.info('Excluded case %s (k=%d): %s' % (case.case_id, k, value))

        stats = []
        models = sorted(set(case.model or '' for case in cases))
        for model in models:
            for k in self.k_values:
                group = [r for r in results if (r.model or '') == model and r.k == k]
                if not group:
                    raise EvaluationError('no usable cases for model "%s" at k=%d' % (model, k))
                summary = aggregate_color(group)
                stats.append((model or None, k, summary))
                logging.info('k=%d %s: %s' % (k, model or '-', ', '.join(
                    '%s mean %.3f median %.3f p90 %.3f' % (metric, s.mean, s.median, s.p90)
                    for metric, s in sorted(summary.stats.items()))))

        return {'results': results, 'stats': stats, 'excluded': sorted(excluded.items())}

    @staticmethod
    def to_document(report):
        stats = []
        for model, k, summary in report['stats']:
            entry = summary.to_dict()
            entry['model'] = model
            entry['k'] = k
            stats.append(entry)
        return {
            'cases': [result.to_dict() for result in report['results']],
            'stats': stats,
            'excluded': [{'caseId': case_id, 'reason': reason} for case_id, reason in report['excluded']],
        }

    @staticmethod
    def to_rows(report):
        """Color fidelity table: one row per model and k."""
        header = ['model', 'k', 'count']
        for metric in METRICS:
            header.extend(['%s_mean' % metric, '%s_median' % metric, '%s_p90' % metric])

        rows = []
        for model, k, summary in report['stats']:
            row = [model or '', k, summary.count]
            for metric in METRICS:
                s = summary.stats[metric]
                row.extend(['%.4f' % s.mean, '%.4f' % s.median, '%.4f' % s.p90])
            rows.append(row)

        return header, rows
