import json
import logging
import os
from configparser import ConfigParser

from paramcaption.palette import PaletteConfig
from paramcaption.render import RenderConfig
from paramcaption.schema import PERCENT, UNIT

PRESETS = ('default', 'lvis')
REPORT_FORMATS = ('json', 'csv', 'both')

def _split(text):
    return [part.strip() for part in text.split(',') if part.strip()]

class ParamConfig:
    def __init__(self, configfile=None):
        dirname = os.path.dirname(__file__)
        default_file = os.path.join(dirname, 'config/default.ini')

        # Default config files
        json_file = None
        if configfile is None:
            configfile = default_file
        if configfile.endswith('.json'):
            json_file, configfile = configfile, default_file
        if not configfile.endswith('.ini'):
            if configfile not in PRESETS:
                raise ValueError('Invalid default ini. Try "default" or "lvis".')
            configfile = os.path.join(dirname, 'config/%s.ini' % configfile)
        if not os.path.exists(configfile):
            raise FileNotFoundError('Config file not found: %s' % configfile)

        logging.info('Configfile: %s' % configfile)
        config = ConfigParser()
        # Custom files only need the keys they change
        config.read([default_file, configfile])
        self.configfile = configfile

        schema = config['schema']
        self.semantic_keys = _split(schema.get('semantic_keys'))
        self.form = schema.get('form')

        color = config['color']
        self.k = [int(k) for k in _split(color.get('k_values'))]
        self.seed = color.getint('seed')
        self.white_threshold = color.getint('white_threshold')
        self.erosion = color.getint('erosion')
        self.min_fraction = color.getfloat('min_fraction')
        self.max_iter = color.getint('max_iter')
        self.tol = color.getfloat('tol')

        box = config['box']
        self.area_buckets = box.getboolean('area_buckets')
        self.rarity_buckets = box.getboolean('rarity_buckets')
        self.max_detections = box.getint('max_detections')

        preference = config['preference']
        self.confidence = preference.getfloat('confidence')

        render = config['render']
        self.width = render.getint('width')
        self.height = render.getint('height')
        self.shape = render.get('shape')
        self.stroke = render.getint('stroke')
        self.palette_background = render.getboolean('palette_background')

        run = config['run']
        self.workers = run.getint('workers')
        self.format = run.get('report_format')

        if json_file is not None:
            self.load_json(json_file)

    def update(self, options):
        """Override settings from a mapping keyed like the command line flags. None values are
        skipped so unset flags keep the file values."""
        for name, value in options.items():
            if value is None:
                continue
            if not hasattr(self, name) or name == 'configfile':
                raise ValueError('Unknown config option "%s"' % name)
            if name == 'k' and isinstance(value, int):
                value = [value]
            if name == 'semantic_keys' and isinstance(value, str):
                value = _split(value)
            setattr(self, name, value)

    def load_json(self, path):
        """Apply a flat JSON object of flag names to values."""
        logging.info('JSON config: %s' % path)
        with open(path, 'r', encoding='utf-8') as config_file:
            options = json.load(config_file)
        if not isinstance(options, dict):
            raise ValueError('%s must hold a JSON object' % path)
        self.update({name.replace('-', '_'): value for name, value in options.items()})

    def check(self):
        """Raise ValueError for settings outside what the evaluators accept."""
        if not self.k or min(self.k) < 1:
            raise ValueError('k values must be >= 1, got %s' % self.k)
        if not 0 <= self.white_threshold <= 255:
            raise ValueError('white_threshold must be in [0, 255]')
        if self.erosion < 0:
            raise ValueError('erosion must be >= 0')
        if not 0 < self.min_fraction <= 1:
            raise ValueError('min_fraction must be in (0, 1]')
        if self.max_iter < 1 or self.tol < 0:
            raise ValueError('max_iter must be >= 1 and tol >= 0')
        if not 0 < self.confidence < 1:
            raise ValueError('confidence must be in (0, 1)')
        if self.workers < 1:
            raise ValueError('workers must be >= 1')
        if self.max_detections < 1:
            raise ValueError('max_detections must be >= 1')
        if self.width < 1 or self.height < 1 or self.stroke < 1:
            raise ValueError('width, height and stroke must be >= 1')
        if self.format not in REPORT_FORMATS:
            raise ValueError('Invalid format "%s". Try json, csv or both.' % self.format)
        if self.form not in (UNIT, PERCENT):
            raise ValueError('Invalid form "%s". Try unit or percent.' % self.form)

    def palette_config(self):
        return PaletteConfig(
            white_threshold=self.white_threshold,
            erosion=self.erosion,
            min_fraction=self.min_fraction,
            seed=self.seed,
            max_iter=self.max_iter,
            tol=self.tol,
        )

    def render_config(self):
        return RenderConfig(
            width=self.width,
            height=self.height,
            shape=self.shape,
            palette_background=self.palette_background,
        )
