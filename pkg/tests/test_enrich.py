import json

import pytest

from paramcaption.errors import EnrichError
from paramcaption.schema import (
    AnnotationBundle, BoundingBox, ObjectAnnotation, RgbColor, ScenePalette, enrich_caption,
    parse_annotations, parse_caption, validate_caption
)

BASE = json.dumps({
    'scene': 'a lamp beside a sofa',
    'objects': [
        {'id': 'lamp', 'description': 'a brass lamp', 'colors': [[181, 166, 66]],
         'attributes': {'location': 'left of the sofa', 'color': 'golden', 'material': 'brass'}},
        {'id': 'sofa', 'description': 'a green sofa', 'attributes': {'position': 'center'}},
    ],
})

def test_annotated_objects_get_numbers_and_lose_semantic_terms():
    annotations = parse_annotations(json.dumps({
        'objects': {
            'lamp': {'box': [0.05, 0.1, 0.25, 0.9], 'depth': 2.5},
            'sofa': {'box': [0.3, 0.4, 0.95, 0.95], 'colors': [[30, 120, 60]]},
        },
        'palette': [[30, 120, 60], [181, 166, 66]],
    }))
    result = enrich_caption(parse_caption(BASE), annotations)

    lamp = result.caption.get('lamp')
    assert lamp.box == BoundingBox(0.05, 0.1, 0.25, 0.9)
    assert lamp.depth == 2.5
    # No annotated colors: the caption's own colors stay
    assert lamp.colors == (RgbColor(181, 166, 66),)
    assert lamp.attributes == {'material': 'brass'}

    sofa = result.caption.get('sofa')
    assert sofa.colors == (RgbColor(30, 120, 60),)
    assert sofa.attributes == {}
    assert result.caption.palette == ScenePalette((RgbColor(30, 120, 60), RgbColor(181, 166, 66)))
    assert result.unannotated == ()
    assert validate_caption(result.caption) == []

def test_unannotated_objects_are_listed_and_untouched():
    annotations = parse_annotations(json.dumps({'objects': {'lamp': {'box': [5, 10, 25, 90]}}}))
    base = parse_caption(BASE)
    result = enrich_caption(base, annotations)

    assert result.unannotated == ('sofa',)
    assert result.caption.get('sofa') == base.get('sofa')
    assert result.caption.get('lamp').box.as_tuple() == pytest.approx((0.05, 0.1, 0.25, 0.9))
    assert result.caption.palette is None

def test_unknown_id_is_an_error():
    annotations = parse_annotations(json.dumps({'objects': {'chair': {'box': [0.1, 0.1, 0.2, 0.2]}}}))
    with pytest.raises(EnrichError) as error:
        enrich_caption(parse_caption(BASE), annotations)
    assert error.value.object_id == 'chair'

def test_invalid_annotation_box_is_an_error():
    annotations = parse_annotations(json.dumps({'objects': {'lamp': {'box': [0.5, 0.1, 0.2, 0.2]}}}))
    with pytest.raises(EnrichError):
        enrich_caption(parse_caption(BASE), annotations)

def test_custom_semantic_keys():
    annotations = parse_annotations(json.dumps({'objects': {'lamp': {'box': [0.1, 0.1, 0.2, 0.2]}}}))
    result = enrich_caption(parse_caption(BASE), annotations, semantic_keys=('material',))
    assert result.caption.get('lamp').attributes == {'location': 'left of the sofa', 'color': 'golden'}

@pytest.mark.parametrize('depth', [float('nan'), float('inf'), -1.0])
def test_bad_depth_is_an_error(depth):
    annotations = AnnotationBundle({'lamp': ObjectAnnotation(BoundingBox(0.1, 0.1, 0.2, 0.2), depth=depth)})
    with pytest.raises(EnrichError) as error:
        enrich_caption(parse_caption(BASE), annotations)
    assert error.value.object_id == 'lamp'

@pytest.mark.parametrize('colors', [
    (),
    tuple(RgbColor(i, i, i) for i in range(17)),
    (RgbColor(0, 0, 300),),
])
def test_bad_palette_is_an_error(colors):
    annotations = AnnotationBundle({'lamp': ObjectAnnotation(BoundingBox(0.1, 0.1, 0.2, 0.2))},
                                   palette=ScenePalette(colors))
    with pytest.raises(EnrichError) as error:
        enrich_caption(parse_caption(BASE), annotations)
    assert error.value.object_id == 'palette'

def test_nan_depth_from_document_is_an_error():
    annotations = parse_annotations('{"objects": {"lamp": {"box": [0.1, 0.1, 0.2, 0.2], "depth": NaN}}}')
    with pytest.raises(EnrichError):
        enrich_caption(parse_caption(BASE), annotations)

def test_enriched_boxes_are_snapped():
    annotations = AnnotationBundle({'lamp': ObjectAnnotation(BoundingBox(0.100004, 0.1, 0.23456789, 0.2))})
    result = enrich_caption(parse_caption(BASE), annotations)
    assert result.caption.get('lamp').box == BoundingBox(0.1, 0.1, 0.2346, 0.2)
