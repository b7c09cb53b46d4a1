import numpy as np
import pytest
from PIL import Image

from paramcaption.color import ColorDifference, LabColor, ab_distance, ciede2000, srgb_to_lab
from paramcaption.errors import EmptyForegroundError, EvaluationError
from paramcaption.palette import (
    AB_DISTANCE, DELTA_E00, Cluster, ColorCaseResult, PaletteConfig, PaletteResult, aggregate_color,
    eval_color_case, extract_foreground, filter_clusters, kmeans_lab, load_image, nearest_cluster,
    summarize
)
from paramcaption.schema import RgbColor

def _canvas(size=32):
    return np.full((size, size, 3), 255, dtype=np.uint8)

def test_foreground_of_a_square():
    image = _canvas()
    image[8:24, 8:24] = (200, 30, 30)
    mask = extract_foreground(image)
    # One erosion pass peels the 1 pixel rim
    assert mask.sum() == 14 * 14
    assert mask[9:23, 9:23].all()

    assert extract_foreground(image, erosion=0).sum() == 16 * 16

def test_enclosed_white_is_foreground():
    image = _canvas()
    image[4:28, 4:28] = (0, 0, 0)
    image[12:20, 12:20] = (255, 255, 255)
    mask = extract_foreground(image, erosion=0)
    # The white hole is not connected to the border
    assert mask[12:20, 12:20].all()
    assert mask.sum() == 24 * 24

def test_blank_image_has_no_foreground():
    with pytest.raises(EmptyForegroundError):
        extract_foreground(_canvas())

def test_thin_line_erodes_away():
    image = _canvas()
    image[10, 4:28] = (0, 0, 0)
    with pytest.raises(EmptyForegroundError):
        extract_foreground(image, erosion=1)

def test_load_image_composites_alpha_over_white(tmp_path):
    pixels = np.zeros((4, 4, 4), dtype=np.uint8)
    pixels[:2, :, :] = (10, 20, 30, 255)
    path = tmp_path / 'alpha.png'
    Image.fromarray(pixels).save(path)

    image = load_image(str(path))
    assert image.shape == (4, 4, 3)
    assert tuple(image[0, 0]) == (10, 20, 30)
    assert tuple(image[3, 3]) == (255, 255, 255)

def test_kmeans_separates_two_colors():
    red = np.tile(srgb_to_lab(RgbColor(220, 20, 20)).as_tuple(), (300, 1))
    blue = np.tile(srgb_to_lab(RgbColor(20, 20, 220)).as_tuple(), (100, 1))
    palette = kmeans_lab(np.vstack([red, blue]), 2, seed=3)

    weights = sorted(cluster.weight for cluster in palette.clusters)
    assert weights == pytest.approx([0.25, 0.75])
    assert palette.total_foreground_pixels == 400

def test_kmeans_is_deterministic():
    rng = np.random.default_rng(5)
    pixels = rng.uniform(-50, 80, size=(500, 3))
    first = kmeans_lab(pixels, 5, seed=9)
    second = kmeans_lab(pixels, 5, seed=9)
    assert first == second

def test_kmeans_properties_on_random_pixel_sets():
    rng = np.random.default_rng(2024)
    for trial in range(100):
        count = int(rng.integers(20, 400))
        pixels = rng.normal(0, 30, size=(count, 3)) + rng.uniform(-40, 40, size=3)
        k = int(rng.choice([5, 8]))
        palette = kmeans_lab(pixels, k, seed=trial)

        history = np.array(palette.inertia_history)
        assert (np.diff(history) <= 1e-9 * max(1.0, history[0])).all()
        assert sum(cluster.weight for cluster in palette.clusters) == pytest.approx(1.0, abs=1e-9)
        assert len(palette.clusters) == k

def test_kmeans_with_more_clusters_than_colors():
    pixels = np.tile([50.0, 10.0, 10.0], (10, 1))
    palette = kmeans_lab(pixels, 5)
    kept = filter_clusters(palette, 0.05)
    assert len(kept.clusters) == 1
    assert kept.clusters[0].weight == 1.0

def test_filter_preserves_order_and_fails_when_empty():
    palette = PaletteResult(
        clusters=(Cluster(LabColor(1, 0, 0), 0.5), Cluster(LabColor(2, 0, 0), 0.01),
                  Cluster(LabColor(3, 0, 0), 0.49)),
        k=3, total_foreground_pixels=100)
    assert [c.center.L for c in filter_clusters(palette, 0.05).clusters] == [1, 3]

    with pytest.raises(EvaluationError):
        filter_clusters(palette, 0.9)

def test_nearest_cluster_depends_on_metric():
    target = RgbColor(204, 1, 1)
    lab = srgb_to_lab(target)
    lighter = Cluster(LabColor(lab.L + 30, lab.a, lab.b), 0.5)
    shifted = Cluster(LabColor(lab.L, lab.a + 3, lab.b), 0.5)
    palette = PaletteResult(clusters=(lighter, shifted), k=2, total_foreground_pixels=10)

    assert nearest_cluster(palette, target, AB_DISTANCE)[0] == lighter
    assert nearest_cluster(palette, target, AB_DISTANCE)[1] == pytest.approx(0.0, abs=1e-9)
    assert nearest_cluster(palette, target, DELTA_E00)[0] == shifted

def test_nearest_cluster_tie_prefers_weight():
    target = RgbColor(10, 200, 10)
    lab = srgb_to_lab(target)
    light = Cluster(LabColor(*lab.as_tuple()), 0.2)
    heavy = Cluster(LabColor(*lab.as_tuple()), 0.8)
    palette = PaletteResult(clusters=(light, heavy), k=2, total_foreground_pixels=10)
    assert nearest_cluster(palette, target, DELTA_E00)[0] is heavy

def test_exact_color_case_scores_zero():
    image = _canvas(48)
    image[10:40, 5:30] = (204, 1, 1)
    result = eval_color_case(image, RgbColor(204, 1, 1), 5, PaletteConfig(), case_id='c1')
    assert result.difference.delta_e00 == pytest.approx(0.0, abs=1e-9)
    assert result.difference.ab_distance == pytest.approx(0.0, abs=1e-9)
    assert result.clusters == 1

def test_summarize_uses_linear_percentiles():
    summary = summarize(range(1, 11))
    assert summary.mean == pytest.approx(5.5)
    assert summary.median == pytest.approx(5.5)
    assert summary.p90 == pytest.approx(9.1)

def _result(case_id, value):
    return ColorCaseResult(case_id, (0, 0, 0), 5, {}, ColorDifference(value, value / 2))

def test_aggregate_color():
    stats = aggregate_color([_result('b', 2.0), _result('a', 1.0), _result('c', 3.0)])
    assert stats.count == 3
    assert stats.stats[DELTA_E00].median == pytest.approx(2.0)
    assert stats.stats[AB_DISTANCE].mean == pytest.approx(1.0)

    with pytest.raises(EvaluationError):
        aggregate_color([])

def test_kmeans_two_color_weights():
    red = np.tile(srgb_to_lab(RgbColor(255, 0, 0)).as_tuple(), (60, 1))
    blue = np.tile(srgb_to_lab(RgbColor(0, 0, 255)).as_tuple(), (40, 1))
    palette = kmeans_lab(np.vstack([red, blue]), 2)

    by_weight = sorted(palette.clusters, key=lambda cluster: cluster.weight)
    assert [cluster.weight for cluster in by_weight] == pytest.approx([0.4, 0.6])
    assert by_weight[1].center.as_tuple() == pytest.approx(srgb_to_lab(RgbColor(255, 0, 0)).as_tuple())
    assert palette.iterations == len(palette.inertia_history)

def test_kmeans_needs_a_pixel_per_cluster():
    with pytest.raises(EvaluationError):
        kmeans_lab(np.zeros((3, 3)), 5)
    with pytest.raises(ValueError):
        kmeans_lab(np.zeros((0, 3)), 1)

def _flat_object(color=(204, 1, 1)):
    image = _canvas(48)
    image[10:40, 5:30] = color
    return image

def test_eval_color_case_is_deterministic():
    image = _flat_object()
    image[20:30, 10:20] = (30, 160, 90)
    config = PaletteConfig(seed=4)
    assert eval_color_case(image, RgbColor(204, 1, 1), 8, config) == \
        eval_color_case(image, RgbColor(204, 1, 1), 8, config)

def test_single_cluster_distances_match_colorlab():
    target = RgbColor(0, 50, 98)
    result = eval_color_case(_flat_object(), target, 5, PaletteConfig())
    assert result.clusters == 1

    drawn, wanted = srgb_to_lab(RgbColor(204, 1, 1)), srgb_to_lab(target)
    assert result.difference.delta_e00 == pytest.approx(ciede2000(drawn, wanted), abs=1e-6)
    assert result.difference.ab_distance == pytest.approx(ab_distance(drawn, wanted), abs=1e-6)

def test_case_order_does_not_change_stats():
    rng = np.random.default_rng(8)
    results = [_result('case%02d' % i, float(value)) for i, value in enumerate(rng.uniform(0, 10, size=25))]
    baseline = aggregate_color(results)
    for _ in range(10):
        shuffled = list(results)
        rng.shuffle(shuffled)
        assert aggregate_color(shuffled) == baseline
    assert baseline.stats[DELTA_E00].median <= baseline.stats[DELTA_E00].p90
