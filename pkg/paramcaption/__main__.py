"""
For the package's command line commands.
"""
import argparse
import logging
import os
import sys
import time
from datetime import datetime

from paramcaption import ParamConfig
from paramcaption.errors import ParamCaptionError, SchemaError
from paramcaption.preference import format_table, parse_records, win_rate_reports
from paramcaption.render import load_png, overlay_boxes, rasterize, save_png
from paramcaption.runners import (
    BoxRunner, ColorRunner, ensure_parent, report_paths, write_csv, write_json
)
from paramcaption.schema import (
    apply_edits, caption_diff, enrich_caption, parse_annotations, parse_caption, parse_edit_script,
    serialize_caption
)

def _read(path):
    with open(path, 'r', encoding='utf-8') as input_file:
        return input_file.read()

def _write(text, path):
    ensure_parent(path)
    with open(path, 'w', encoding='utf-8') as output_file:
        output_file.write(text)
    logging.info('Wrote %s' % path)

def _caption_files(path):
    """A single caption file, or every *.json file of a directory in name order."""
    if os.path.isdir(path):
        return [os.path.join(path, name) for name in sorted(os.listdir(path)) if name.endswith('.json')]
    if not os.path.exists(path):
        raise FileNotFoundError('No such file or directory: %s' % path)
    return [path]

def _output_path(out, source, extension):
    if os.path.isdir(out) or out.endswith(os.sep):
        stem = os.path.splitext(os.path.basename(source))[0]
        return os.path.join(out, stem + extension)
    return out

def validate(args, config):
    violations = []
    files = _caption_files(args.captions)
    for path in files:
        try:
            parse_caption(_read(path))
        except SchemaError as error:
            found = error.violations or ['%s: %s' % (error.path, error.message)]
            violations.extend('%s: %s' % (path, violation) for violation in found)

    for line in violations:
        print(line)
    logging.info('Validated %d captions, %d violations' % (len(files), len(violations)))

    return 1 if violations else 0

def enrich(args, config):
    files = _caption_files(args.captions)
    single = not os.path.isdir(args.captions)
    if not single:
        os.makedirs(args.out, exist_ok=True)

    report = {'captions': {}, 'errors': {}}
    for path in files:
        name = os.path.basename(path)
        if os.path.isdir(args.annotations):
            annotation_path = os.path.join(args.annotations, name)
        else:
            annotation_path = args.annotations
        try:
            caption = parse_caption(_read(path))
            annotations = parse_annotations(_read(annotation_path))
            result = enrich_caption(caption, annotations, config.semantic_keys)
        except (ParamCaptionError, FileNotFoundError) as error:
            report['errors'][name] = str(error)
            logging.error('%s: %s' % (name, error))
            continue

        out = args.out if single else os.path.join(args.out, name)
        _write(serialize_caption(result.caption, config.form), out)
        report['captions'][name] = {'unannotated': list(result.unannotated)}

    report_path = args.report or (os.path.splitext(args.out)[0] + '_report.json' if single
                                  else os.path.join(args.out, 'enrich_report.json'))
    write_json(report, report_path)

    return 1 if report['errors'] else 0

def refine(args, config):
    caption = parse_caption(_read(args.caption))
    edits = parse_edit_script(_read(args.script))
    edited = apply_edits(caption, edits)

    for path in caption_diff(caption, edited, config.form):
        logging.info('Changed %s' % path)
    _write(serialize_caption(edited, config.form), args.out)

def eval_color(args, config):
    runner = ColorRunner(config)
    report = runner.evaluate(runner.load_manifest(args.manifest))

    paths = report_paths(args.out, config.format)
    for path in paths.values():
        ensure_parent(path)
    if 'json' in paths:
        write_json(ColorRunner.to_document(report), paths['json'])
    if 'csv' in paths:
        write_csv(*ColorRunner.to_rows(report), paths['csv'])

def eval_box(args, config):
    runner = BoxRunner(config)
    detections, ground_truths, image_dims = runner.load(args.detections, args.ground_truth, args.dims)
    report = runner.evaluate(detections, ground_truths, image_dims, args.meta)

    paths = report_paths(args.out, config.format)
    for path in paths.values():
        ensure_parent(path)
    if 'json' in paths:
        write_json(report.to_dict(), paths['json'])
    if 'csv' in paths:
        write_csv(*BoxRunner.to_rows(report), paths['csv'])

def tabr(args, config):
    records = parse_records(_read(args.records), args.records)
    reports = win_rate_reports(records, config.confidence)
    table = format_table(reports, config.confidence)
    print(table, end='')

    paths = report_paths(args.out, config.format)
    for path in paths.values():
        ensure_parent(path)
    if 'json' in paths:
        write_json({'confidence': config.confidence, 'reports': [r.to_dict() for r in reports]},
                   paths['json'])
    if 'csv' in paths:
        header = ['candidate', 'baseline', 'wins', 'losses', 'ties', 'winRate', 'ciLow', 'ciHigh']
        rows = [[r.candidate, r.baseline, r.wins, r.losses, r.ties] +
                ['%.4f' % value for value in (r.win_rate, r.ci_low, r.ci_high)] for r in reports]
        write_csv(header, rows, paths['csv'])
    _write(table, os.path.splitext(args.out)[0] + '.txt')

def render(args, config):
    render_config = config.render_config()
    files = _caption_files(args.captions)
    if os.path.isdir(args.captions):
        os.makedirs(args.out, exist_ok=True)

    for path in files:
        image = rasterize(parse_caption(_read(path)), render_config)
        out = _output_path(args.out, path, '.png')
        ensure_parent(out)
        save_png(image, out)
        logging.info('Rendered %s -> %s' % (path, out))

def overlay(args, config):
    image = load_png(args.image)
    caption = parse_caption(_read(args.caption))
    boxes = [(obj.box, obj.colors[0] if obj.colors else config.render_config().background)
             for obj in caption.objects if obj.box is not None]

    ensure_parent(args.out)
    save_png(overlay_boxes(image, boxes, config.stroke), args.out)
    logging.info('Drew %d boxes on %s -> %s' % (len(boxes), args.image, args.out))

def _parser():
    parser = argparse.ArgumentParser(prog='paramcaption',
                                     description='Parametric structured captions and their evaluation.')
    parser.add_argument('-p', '--print_logs', action='store_true', help='Use to print logs to console.')
    parser.add_argument('-i', '--ini', help='.ini config file or preset name ("default", "lvis").')
    parser.add_argument('--config', help='JSON file of flag values; explicit flags override it.')
    parser.add_argument('--log', default='paramcaption.log', help='Log file.')
    parser.add_argument('--seed', type=int, default=None, help='K-means seed.')
    parser.add_argument('-w', '--workers', type=int, default=None, help='Worker processes for color cases.')
    parser.add_argument('--format', choices=('json', 'csv', 'both'), default=None, help='Report format.')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    # Validate arguments
    parser_validate = subparsers.add_parser('validate', help='Check captions against the schema.')
    parser_validate.add_argument('captions', help='Caption file or directory of captions.')
    parser_validate.set_defaults(func=validate)

    # Enrich arguments
    parser_enrich = subparsers.add_parser('enrich', help='Merge grounded annotations into base captions.')
    parser_enrich.add_argument('captions', help='Caption file or directory.')
    parser_enrich.add_argument('annotations', help='Annotation file or directory with matching file names.')
    parser_enrich.add_argument('-o', '--out', required=True, help='Output caption file or directory.')
    parser_enrich.add_argument('--report', default=None, help='Enrichment report path.')
    parser_enrich.add_argument('--semantic_keys', default=None, help='Comma list of attributes to drop.')
    parser_enrich.add_argument('--form', choices=('unit', 'percent'), default=None, help='Output box form.')
    parser_enrich.set_defaults(func=enrich)

    # Refine arguments
    parser_refine = subparsers.add_parser('refine', help='Apply an edit script to a caption.')
    parser_refine.add_argument('caption', help='Caption file.')
    parser_refine.add_argument('script', help='JSON array of edit operations.')
    parser_refine.add_argument('-o', '--out', required=True, help='Edited caption file.')
    parser_refine.add_argument('--form', choices=('unit', 'percent'), default=None, help='Output box form.')
    parser_refine.set_defaults(func=refine)

    # Color evaluation arguments
    parser_color = subparsers.add_parser('eval-color', help='Color fidelity over a case manifest.')
    parser_color.add_argument('manifest', help='JSON array of {caseId, imagePath, target, model?}.')
    parser_color.add_argument('-k', '--k', type=int, nargs='+', default=None, help='Cluster counts.')
    parser_color.add_argument('--white_threshold', type=int, default=None, help='Near-white channel floor.')
    parser_color.add_argument('--min_fraction', type=float, default=None, help='Minimum cluster weight.')
    parser_color.add_argument('-o', '--out', required=True, help='Report path (extension optional).')
    parser_color.set_defaults(func=eval_color)

    # Box evaluation arguments
    parser_box = subparsers.add_parser('eval-box', help='COCO style box alignment.')
    parser_box.add_argument('detections', help='COCO results file or directory of captions.')
    parser_box.add_argument('ground_truth', help='COCO annotations file or directory of captions.')
    parser_box.add_argument('--dims', default=None, help='JSON {image id: [width, height]}.')
    parser_box.add_argument('--meta', default=None, help='JSON {category: rare|common|frequent}.')
    parser_box.add_argument('--rarity', dest='rarity_buckets', action='store_const', const=True,
                            default=None, help='Report AP_r, AP_c and AP_f.')
    parser_box.add_argument('--no-area', dest='area_buckets', action='store_const', const=False,
                            default=None, help='Skip AP_s, AP_m and AP_l.')
    parser_box.add_argument('--max_detections', type=int, default=None, help='Detections per image.')
    parser_box.add_argument('-o', '--out', required=True, help='Report path (extension optional).')
    parser_box.set_defaults(func=eval_box)

    # Preference arguments
    parser_tabr = subparsers.add_parser('tabr', help='Win rates with Wilson score intervals.')
    parser_tabr.add_argument('records', help='CSV or JSON preference records.')
    parser_tabr.add_argument('--confidence', type=float, default=None, help='Interval confidence level.')
    parser_tabr.add_argument('-o', '--out', required=True, help='Report path (extension optional).')
    parser_tabr.set_defaults(func=tabr)

    # Render arguments
    parser_render = subparsers.add_parser('render', help='Rasterize captions to PNG.')
    parser_render.add_argument('captions', help='Caption file or directory.')
    parser_render.add_argument('-o', '--out', required=True, help='PNG file or directory.')
    parser_render.add_argument('--shape', choices=('rectangle', 'ellipse'), default=None)
    parser_render.add_argument('--width', type=int, default=None)
    parser_render.add_argument('--height', type=int, default=None)
    parser_render.add_argument('--palette_background', action='store_const', const=True, default=None,
                               help='Fill the background with the first palette color.')
    parser_render.set_defaults(func=render)

    # Overlay arguments
    parser_overlay = subparsers.add_parser('overlay', help='Draw caption boxes on an image.')
    parser_overlay.add_argument('image', help='PNG image.')
    parser_overlay.add_argument('caption', help='Caption whose boxes are drawn.')
    parser_overlay.add_argument('-o', '--out', required=True, help='Output PNG.')
    parser_overlay.add_argument('--stroke', type=int, default=None, help='Outline width in pixels.')
    parser_overlay.set_defaults(func=overlay)

    return parser

# Flags that map onto ParamConfig attributes
CONFIG_FLAGS = ('seed', 'workers', 'format', 'semantic_keys', 'form', 'k', 'white_threshold',
                'min_fraction', 'rarity_buckets', 'area_buckets', 'max_detections', 'confidence',
                'shape', 'width', 'height', 'palette_background', 'stroke')

def _configure(args):
    config = ParamConfig(args.ini)
    if args.config is not None:
        config.load_json(args.config)
    config.update({name: getattr(args, name) for name in CONFIG_FLAGS if hasattr(args, name)})
    config.check()
    return config

def main(argv=None):
    """Main function for parsing command line arguments. Returns the exit code.
    """
    args = _parser().parse_args(argv)

    # Logging
    logging.basicConfig(filename=args.log, format='%(asctime)-15s: %(message)s', level=logging.INFO)
    if args.print_logs:
        logging.getLogger().addHandler(logging.StreamHandler())
    start_time = time.time()
    current_time = datetime.fromtimestamp(start_time).strftime('%Y_%m_%d_%H.%M.%S')
    logging.info('\nSTART TIME: ' + current_time)
    logging.info('Command: %s' % args.command)

    # Run proper function
    try:
        config = _configure(args)
        code = args.func(args, config) or 0
    except ParamCaptionError as error:
        logging.error(str(error))
        print('error: %s' % error, file=sys.stderr)
        code = 1
    except (OSError, ValueError) as error:
        logging.error(str(error))
        print('error: %s' % error, file=sys.stderr)
        code = 2

    # Calculate/print end time
    end_time = time.time()
    current_time = datetime.fromtimestamp(end_time).strftime('%Y_%m_%d_%H.%M.%S')
    logging.info('END TIME: ' + current_time)

    # Calculate/print time elapsed
    seconds_elapsed = end_time - start_time
    minutes_elapsed, seconds_elapsed = divmod(seconds_elapsed, 60)
    hours_elapsed, minutes_elapsed = divmod(minutes_elapsed, 60)

    logging.info('H:M:S ELAPSED: %d:%d:%d' % (hours_elapsed, minutes_elapsed, seconds_elapsed))

    return code


if __name__ == '__main__':
    sys.exit(main())
