"""Multi-pattern exact matching over DNA sequences with a failure-free
Aho-Corasick automaton and chunked, lane-striped parallel scanning."""

from .automaton import (
    Automaton,
    PatternSet,
    TrieNode,
    build_trie,
    compile_patterns,
    compute_failures,
    delta,
    eliminate_failures,
    is_final,
    load_table1,
    renumber_finals,
)
from .errors import (
    DnaScanError,
    DuplicatePattern,
    EmptyPatternSet,
    EmptySequence,
    IllegalByte,
    InternalError,
    InvalidPlan,
    ParseError,
    UnequalLength,
)
from .ingest import (
    PatternExpr,
    Sequence,
    expand_alternations,
    load_regex_dna,
    load_sequence,
    parse_pattern_file,
)
from .oracle import naive_scan
from .scanner import (
    ChunkPlan,
    LanePlan,
    Match,
    ScanReport,
    WorkEstimate,
    owns,
    plan_chunks,
    plan_lanes,
    scan_chunk_striped,
    scan_parallel,
    scan_sequential,
    work_model,
)

__version__ = "0.1.0"
