"""
Report writers. JSON reports use sorted keys and a fixed indent so identical results give
identical bytes.
"""
import csv
import json
import logging
import os

def write_json(document, path):
    with open(path, 'w', encoding='utf-8') as report_file:
        json.dump(document, report_file, indent=2, sort_keys=True, ensure_ascii=False)
        report_file.write('\n')
    logging.info('Wrote %s' % path)

def write_csv(header, rows, path):
    with open(path, 'w', encoding='utf-8', newline='') as report_file:
        writer = csv.writer(report_file, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
    logging.info('Wrote %s' % path)

def report_paths(out, report_format):
    """JSON and/or CSV paths for an output path given with or without extension."""
    stem, extension = os.path.splitext(out)
    if extension not in ('.json', '.csv'):
        stem = out
    paths = {}
    if report_format in ('json', 'both'):
        paths['json'] = stem + '.json'
    if report_format in ('csv', 'both'):
        paths['csv'] = stem + '.csv'
    return paths

def ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(parent):
        os.makedirs(parent)
