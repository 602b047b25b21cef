from .classifier import (Classifier, ClassifierStore, SelfAdaptiveParams,
                         compute_prediction, draw_self_adaptive, self_adapt)
from .ga import ga_should_fire, run_ga
from .matching import (CoverFailure, MatchSet, build_match_set, decode_action,
                       match_classifier)
from .params import XcsfParams
from .population import Population, load_snapshot, save_snapshot
from .prediction import build_prediction_array, select_action
from .updates import update_action_set

__all__ = [
    "Classifier", "ClassifierStore", "SelfAdaptiveParams", "compute_prediction",
    "draw_self_adaptive", "self_adapt", "ga_should_fire", "run_ga",
    "CoverFailure", "MatchSet", "build_match_set", "decode_action",
    "match_classifier", "XcsfParams", "Population", "load_snapshot",
    "save_snapshot", "build_prediction_array", "select_action",
    "update_action_set",
]
