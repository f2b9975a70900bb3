"""Similarity hints and dependency graphs for corpora of formal proofs."""

from importlib import resources

__version__ = "0.1.0"


def sample_corpus_path():
    """Path of the bundled sample corpus."""
    return resources.files("proofscope").joinpath("data/paths.corpus")
