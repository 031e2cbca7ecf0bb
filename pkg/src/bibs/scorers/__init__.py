from .base import InstrumentedScorer, Scorer, instrumented, replay, sequence_logp
from .combine import bidir_combine, log_softmax, split_bias_halves
from .markov import MarkovScorer, random_markov
from .ngram import NGramModel, train_ngram
from .rnn import RnnScorer, RnnWeights, rnn_step

__all__ = [
    "InstrumentedScorer",
    "MarkovScorer",
    "NGramModel",
    "RnnScorer",
    "RnnWeights",
    "Scorer",
    "bidir_combine",
    "instrumented",
    "log_softmax",
    "random_markov",
    "replay",
    "rnn_step",
    "sequence_logp",
    "split_bias_halves",
    "train_ngram",
]
