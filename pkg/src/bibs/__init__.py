"""Bidirectional beam search for filling blanks in sequences."""

from .seqcore import (
    BACKWARD,
    BOS,
    EOS,
    FORWARD,
    UNK,
    BlankedInstance,
    BlankSpec,
    DecodeConfig,
    Vocabulary,
    build_vocabulary,
    make_blank,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "BACKWARD",
    "BOS",
    "EOS",
    "FORWARD",
    "UNK",
    "BlankSpec",
    "BlankedInstance",
    "DecodeConfig",
    "Vocabulary",
    "build_vocabulary",
    "make_blank",
    "tokenize",
]
