"""Edit-level system combination for grammatical error correction."""
from .alignment import Edit, apply_edits, extract_edits, token_levenshtein
from .baselines import VoteConfig, edit_majority_vote, esc_select, mbr_select, weighted_sentence_vote
from .candidates import Candidate, CandidateSet, aggregate, encode
from .classifier import LinearModel, TrainingConfig, label_candidates, load_model, save_model, score, train
from .combiner import CombineConfig, ScoredCandidate, boost, combine_sentence, dual_filter, iou, nms
from .m2 import M2Sentence, RawEdit, parse_m2, serialize_m2, unify_edit_types
from .scorer import ScoreReport, f_beta, score_corpus

__version__ = "0.1.0"
