"""Database knowledge corpus construction and SQL evaluation.

Thin Python surface over the C++ core: schema introspection, subtable
sampling, nine-task corpus generation, SQL parsing/canonicalization, and
EM/EX/column-accuracy scoring.
"""

from skforge._core import (  # noqa: F401
    DataFormatError,
    InputError,
    SqlParseError,
    UnsupportedSqlError,
    build_subtable,
    canonicalize,
    corpus_stats,
    evaluate,
    exact_match,
    execution_match,
    extract_column_refs,
    fetch_rows,
    generate_corpus,
    load_database,
    load_spider_tables,
    parse_sql,
    sample_cell_values,
)

__all__ = [
    "DataFormatError",
    "InputError",
    "SqlParseError",
    "UnsupportedSqlError",
    "build_subtable",
    "canonicalize",
    "corpus_stats",
    "evaluate",
    "exact_match",
    "execution_match",
    "extract_column_refs",
    "fetch_rows",
    "generate_corpus",
    "load_database",
    "load_spider_tables",
    "parse_sql",
    "sample_cell_values",
]
