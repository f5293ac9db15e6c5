"""Multi-scale sliding-window pedestrian detection (LBP/HOG features, linear SVM)."""

_NAMES = [
    "Detection",
    "SvmModel",
    "build_pyramid",
    "detect",
    "downscale",
    "gradient",
    "hog_block_histograms",
    "lbp_block_histograms",
    "lbp_map",
    "load_model",
    "load_pgm",
    "nms_greedy",
    "save_model",
    "save_pgm",
    "score_windows",
]

try:
    from . import _pedscan as _ext
except ImportError:  # build-tree layout: extension sits on sys.path, not in the package
    import _pedscan as _ext

globals().update({name: getattr(_ext, name) for name in _NAMES})

__all__ = list(_NAMES)
