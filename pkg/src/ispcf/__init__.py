"""ISPCF: a call-by-name statistical PCF with exact real arithmetic.

The package provides the language front end (parser, type checker), an
exact algebra of simple valuations, a small-step machine with a seeded
sampling semantics and an exact finite enumerator, the example program
library, and a command-line driver.
"""

__version__ = "0.1.0"
