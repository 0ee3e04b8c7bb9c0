"""Grammars as relators in a free group: parsing, generation and diagrams."""
from .freegroup import ONE, Atom, Phon, Word, parse_word
from .lexicon import Grammar, load_grammar, parse_grammar
from .term import parse_term

__all__ = ["ONE", "Atom", "Phon", "Word", "parse_word", "Grammar",
           "load_grammar", "parse_grammar", "parse_term"]
