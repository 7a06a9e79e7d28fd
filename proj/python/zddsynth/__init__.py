"""Boolean functional synthesis over clause-set decision diagrams."""

from ._core import (
    Family,
    FalsityHasNoDnf,
    Manager,
    ParseError,
    Spec,
    TooLarge,
    classify_bruteforce,
    gen_family,
    gen_random,
    make_spec,
    parse,
    plan,
    realize,
    synthesize,
    verify,
)

__all__ = [
    "Family",
    "FalsityHasNoDnf",
    "Manager",
    "ParseError",
    "Spec",
    "TooLarge",
    "classify_bruteforce",
    "gen_family",
    "gen_random",
    "make_spec",
    "parse",
    "plan",
    "realize",
    "synthesize",
    "verify",
]
