"""Book Ramsey numbers at desk scale: colorings, book statistics, exact and
stochastic search, and numeric checks of the supporting inequalities."""

from .coloring import Color, TwoColoring, VertexSet, build, density, load, neighbors, pair_count, save
from .constructions import Partition, balanced_kpartite, goodness_bound, random_bound, random_coloring
from .books import count_cliques, extensions, many_books, max_book, spectrum
from .errors import (BooklabError, DomainError, FormatError, InconclusiveError, NoSpineError,
                     PreconditionError)
from .search import ArrowQuery, arrow, ramsey_number, witness_search
from .quasi import identity_check, kpartite_distance, quasi_exhaustive, quasi_sampled

__version__ = "0.1.0"
