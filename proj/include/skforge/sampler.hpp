#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skforge/schema.hpp"

namespace skforge {

struct SamplerConfig {
  std::size_t clusters_k = 5;
  std::size_t rows_per_cluster_l = 2;
  double max_numeric_ratio = 0.5;
  std::size_t value_truncate_len = 64;
  std::uint64_t rng_seed = 42;

  std::size_t row_budget() const { return clusters_k * rows_per_cluster_l; }
};

// Up to K*L representative rows of one table, with the cluster each row
// came from. Rows are copied verbatim from the source RowSet.
struct SubTable {
  std::string table;
  std::vector<std::string> column_order;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::size_t> provenance;  // cluster id per row
};

struct ValueSample {
  std::string column;
  std::vector<std::string> values;  // rendered, distinct
  std::size_t numeric_count = 0;
};

// Row indices, stable-sorted ascending by missing-cell count (NULL or
// empty/whitespace-only string); ties keep original row order.
std::vector<std::size_t> rank_rows_by_completeness(const RowSet& rows);

// k-means over a per-row feature vector: numeric cells z-scored per
// column, text cells by within-column frequency rank in [0,1], nulls 0.5.
// Deterministic for a fixed seed; if row_count <= K every row is its own
// cluster. Ids are relabeled so earlier rows own lower ids.
std::vector<std::size_t> cluster_rows(const RowSet& rows, std::size_t k,
                                      std::uint64_t seed);

// Per cluster, the top-L rows by completeness rank. Output rows are
// ordered by (cluster id, rank).
SubTable build_subtable(const RowSet& rows, const SamplerConfig& cfg);

// Up to n distinct rendered values of one column, nulls and blobs
// excluded, numeric share held at or below cfg.max_numeric_ratio of the
// requested n, strings truncated to cfg.value_truncate_len codepoints.
// Values are taken in first-occurrence row order.
ValueSample sample_cell_values(const RowSet& rows, const std::string& column,
                               std::size_t n, const SamplerConfig& cfg);

}  // namespace skforge
