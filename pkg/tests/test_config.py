import json

import pytest

from paramcaption import ParamConfig

def test_default_preset():
    config = ParamConfig()
    assert config.k == [5, 8]
    assert config.seed == 0
    assert config.white_threshold == 245
    assert config.min_fraction == 0.05
    assert config.area_buckets is True
    assert config.rarity_buckets is False
    assert config.max_detections == 100
    assert config.confidence == 0.95
    assert config.semantic_keys == ['location', 'position', 'color']
    assert config.format == 'both'
    config.check()

def test_lvis_preset():
    config = ParamConfig('lvis')
    assert config.rarity_buckets is True
    assert config.max_detections == 300

def test_unknown_preset():
    with pytest.raises(ValueError):
        ParamConfig('coco')

def test_partial_ini_keeps_defaults(tmp_path):
    path = tmp_path / 'custom.ini'
    path.write_text('[color]\nk_values = 3\nseed = 7\n')
    config = ParamConfig(str(path))
    assert config.k == [3]
    assert config.seed == 7
    assert config.white_threshold == 245

def test_json_then_flags(tmp_path):
    path = tmp_path / 'flags.json'
    path.write_text(json.dumps({'seed': 4, 'workers': 2, 'min_fraction': 0.1}))
    config = ParamConfig()
    config.load_json(str(path))
    config.update({'seed': 9, 'workers': None, 'k': 6})
    assert config.seed == 9
    assert config.workers == 2
    assert config.min_fraction == 0.1
    assert config.k == [6]

    assert ParamConfig(str(path)).workers == 2

def test_unknown_option():
    with pytest.raises(ValueError):
        ParamConfig().update({'colour': 1})

@pytest.mark.parametrize('name, value', [
    ('k', [0]),
    ('white_threshold', 300),
    ('min_fraction', 0.0),
    ('confidence', 1.0),
    ('workers', 0),
    ('format', 'xml'),
    ('form', 'pixels'),
])
def test_check_rejects(name, value):
    config = ParamConfig()
    config.update({name: value})
    with pytest.raises(ValueError):
        config.check()

def test_derived_configs():
    config = ParamConfig()
    config.update({'seed': 3, 'width': 64, 'shape': 'ellipse'})
    assert config.palette_config().seed == 3
    assert config.render_config().width == 64
    assert config.render_config().shape == 'ellipse'
