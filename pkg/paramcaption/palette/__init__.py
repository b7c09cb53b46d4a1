from .foreground import check_image, extract_foreground, load_image
from .kmeans import Cluster, PaletteResult, filter_clusters, kmeans_lab
from .scoring import (
    AB_DISTANCE, DELTA_E00, METRICS, ColorCaseResult, ColorStats, PaletteConfig, Summary,
    aggregate_color, eval_color_case, nearest_cluster, summarize
)
