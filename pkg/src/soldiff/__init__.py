"""soldiff: structural differencing for Solidity smart contracts.

Pipeline: parse source into a concrete syntax tree, prune it into a
diff-optimized AST via flatten/alias/ignore rules, compute a node mapping
with two-phase matching, and emit a concise insert/delete/update/move edit
script. A minimal line-diff baseline and a parallel corpus harness support
evaluation runs.
"""

from .editscript import (
    ApplyError,
    EditAction,
    EditScript,
    InvalidMapping,
    apply_edit_script,
    edit_distance,
    generate_edit_script,
    serialize,
)
from .harness import (
    DiffReport,
    ManifestEntry,
    PairManifest,
    diff_pair,
    run_corpus,
    run_pair,
    summarize_csv,
    summary_text,
    write_report_csv,
)
from .lexer import ParseError
from .linediff import LineDiffResult, line_diff, line_edit_distance, unified_diff
from .matcher import (
    MappingStore,
    MatcherConfig,
    dice_similarity,
    match_bottom_up,
    match_top_down,
    match_trees,
)
from .parser import GRAMMAR_VERSION, SolidityParser, parse_solidity
from .transforms import (
    RuleFileError,
    TransformRuleSet,
    apply_transforms,
    default_solidity_rules,
    dump_rules,
    load_rules,
    parse_rules,
    save_rules,
)
from .tree import (
    SourceSpan,
    SyntaxNode,
    SyntaxTree,
    descendants,
    height,
    isomorphic,
    structural_hash,
)

__version__ = "0.1.0"

__all__ = [
    "ApplyError",
    "DiffReport",
    "EditAction",
    "EditScript",
    "GRAMMAR_VERSION",
    "InvalidMapping",
    "LineDiffResult",
    "ManifestEntry",
    "MappingStore",
    "MatcherConfig",
    "PairManifest",
    "ParseError",
    "RuleFileError",
    "SolidityParser",
    "SourceSpan",
    "SyntaxNode",
    "SyntaxTree",
    "TransformRuleSet",
    "apply_edit_script",
    "apply_transforms",
    "default_solidity_rules",
    "descendants",
    "dice_similarity",
    "diff_pair",
    "dump_rules",
    "edit_distance",
    "generate_edit_script",
    "height",
    "isomorphic",
    "line_diff",
    "line_edit_distance",
    "load_rules",
    "match_bottom_up",
    "match_top_down",
    "match_trees",
    "parse_rules",
    "parse_solidity",
    "run_corpus",
    "run_pair",
    "save_rules",
    "serialize",
    "structural_hash",
    "summarize_csv",
    "summary_text",
    "unified_diff",
    "write_report_csv",
]
