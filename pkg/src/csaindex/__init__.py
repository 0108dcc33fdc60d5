"""Pattern matching over a run-length BWT self-index with compressed suffix arrays."""

from .container import dumps, load, loads, save
from .index import SCHEMES, SaInterval, SelfIndex, build_index, naive_occurrences
from .lzend import LzEndParsing, LzEndPhrase, MarkerMap, candidate_search, decode, naive_parse_oracle, parse
from .lzend_sa import LzEndSaStore
from .rank_select import BitVectorRS, LargeAlphabetRS, SmallAlphabetRS, SparseSet
from .rlz import (Copy, FreqMap, Literal, Reference, RlzParsing, build_aligned_reference, build_reference,
                  close_gaps, rlz_parse, score_segment, value_frequencies)
from .rlzsa import LegacyRlzsaStore, RlzsaStore, build_store
from .suffix import (BwtRuns, PhiSamples, SuffixContext, accumulate, build_bwt_runs, build_lzend_context,
                     build_suffix_array, differentiate, phi_samples)

__version__ = "0.1.0"
