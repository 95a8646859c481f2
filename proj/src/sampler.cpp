#include "skforge/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_set>

#include "skforge/errors.hpp"
#include "skforge/rng.hpp"

namespace skforge {

std::vector<std::size_t> rank_rows_by_completeness(const RowSet& rows) {
  std::vector<std::size_t> missing(rows.rows.size(), 0);
  for (std::size_t r = 0; r < rows.rows.size(); ++r) {
    for (const auto& cell : rows.rows[r]) {
      if (is_missing(cell)) ++missing[r];
    }
  }
  std::vector<std::size_t> order(rows.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return missing[a] < missing[b]; });
  return order;
}

namespace {

double numeric_value(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell.data)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell.data)) return *d;
  if (const auto* s = std::get_if<std::string>(&cell.data)) return std::strtod(s->c_str(), nullptr);
  return 0.0;
}

// Mixed-type rows become dense feature vectors: numeric columns z-score,
// text columns map each value to its frequency rank in [0,1], missing
// cells sit at 0.5.
std::vector<std::vector<double>> featurize(const RowSet& rows) {
  const std::size_t n = rows.rows.size();
  const std::size_t dim = rows.column_order.size();
  std::vector<std::vector<double>> features(n, std::vector<double>(dim, 0.5));

  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t numeric = 0, present = 0;
    for (const auto& row : rows.rows) {
      if (is_missing(row[c]) || row[c].is_blob()) continue;
      ++present;
      if (is_numeric(row[c])) ++numeric;
    }
    if (present == 0) continue;

    if (numeric * 2 >= present) {
      // Numeric column: z-score over the numeric cells.
      double sum = 0, sum2 = 0;
      std::size_t cnt = 0;
      for (const auto& row : rows.rows) {
        if (is_missing(row[c]) || !is_numeric(row[c])) continue;
        const double v = numeric_value(row[c]);
        sum += v;
        sum2 += v * v;
        ++cnt;
      }
      const double mean = sum / cnt;
      const double var = std::max(0.0, sum2 / cnt - mean * mean);
      const double sd = std::sqrt(var);
      for (std::size_t r = 0; r < n; ++r) {
        const auto& cell = rows.rows[r][c];
        if (is_missing(cell) || !is_numeric(cell)) continue;
        features[r][c] = sd > 0 ? (numeric_value(cell) - mean) / sd : 0.0;
      }
    } else {
      // Text column: frequency rank, most frequent first; ties broken by
      // rendered value so the ranking is deterministic.
      std::map<std::string, std::size_t> counts;
      for (const auto& row : rows.rows) {
        if (is_missing(row[c]) || row[c].is_blob()) continue;
        ++counts[render_cell(row[c])];
      }
      std::vector<std::pair<std::string, std::size_t>> ordered(counts.begin(), counts.end());
      std::stable_sort(ordered.begin(), ordered.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      std::map<std::string, double> rank;
      for (std::size_t i = 0; i < ordered.size(); ++i) {
        rank[ordered[i].first] =
            ordered.size() > 1 ? static_cast<double>(i) / (ordered.size() - 1) : 0.0;
      }
      for (std::size_t r = 0; r < n; ++r) {
        const auto& cell = rows.rows[r][c];
        if (is_missing(cell) || cell.is_blob()) continue;
        features[r][c] = rank[render_cell(cell)];
      }
    }
  }
  return features;
}

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

constexpr std::size_t kMaxKmeansIterations = 50;

}  // namespace

std::vector<std::size_t> cluster_rows(const RowSet& rows, std::size_t k,
                                      std::uint64_t seed) {
  const std::size_t n = rows.rows.size();
  std::vector<std::size_t> labels(n, 0);
  if (n == 0) return labels;
  if (n <= k) {
    std::iota(labels.begin(), labels.end(), 0);
    return labels;
  }
  if (k <= 1) return labels;

  const auto features = featurize(rows);
  Rng rng(seed);

  // k-means++ seeding
  std::vector<std::vector<double>> centers;
  centers.push_back(features[rng.index(n)]);
  std::vector<double> dist(n, std::numeric_limits<double>::max());
  while (centers.size() < k) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], sq_distance(features[i], centers.back()));
      total += dist[i];
    }
    std::size_t pick;
    if (total <= 0) {
      pick = rng.index(n);  // all remaining points coincide with a center
    } else {
      const double target = rng.unit() * total;
      double acc = 0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(features[pick]);
  }

  std::vector<std::size_t> assign(n, 0);
  for (std::size_t iter = 0; iter < kMaxKmeansIterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = sq_distance(features[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = sq_distance(features[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<std::vector<double>> sums(k, std::vector<double>(features[0].size(), 0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t d = 0; d < features[i].size(); ++d) sums[assign[i]][d] += features[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty clusters keep their center
      for (std::size_t d = 0; d < sums[c].size(); ++d) centers[c][d] = sums[c][d] / counts[c];
    }
  }

  // Relabel so the cluster owning the earliest row gets id 0, the next new
  // cluster id 1, and so on; output is stable against center ordering.
  std::vector<std::size_t> remap(k, std::numeric_limits<std::size_t>::max());
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (remap[assign[i]] == std::numeric_limits<std::size_t>::max()) {
      remap[assign[i]] = next++;
    }
    labels[i] = remap[assign[i]];
  }
  return labels;
}

SubTable build_subtable(const RowSet& rows, const SamplerConfig& cfg) {
  SubTable sub;
  sub.table = rows.table;
  sub.column_order = rows.column_order;
  if (rows.rows.empty()) return sub;

  const auto labels = cluster_rows(rows, cfg.clusters_k, cfg.rng_seed);
  const auto order = rank_rows_by_completeness(rows);
  const std::size_t n_clusters = 1 + *std::max_element(labels.begin(), labels.end());

  for (std::size_t cluster = 0; cluster < n_clusters; ++cluster) {
    std::size_t taken = 0;
    for (std::size_t idx : order) {
      if (labels[idx] != cluster) continue;
      sub.rows.push_back(rows.rows[idx]);
      sub.provenance.push_back(cluster);
      if (++taken == cfg.rows_per_cluster_l) break;
    }
  }
  return sub;
}

ValueSample sample_cell_values(const RowSet& rows, const std::string& column,
                               std::size_t n, const SamplerConfig& cfg) {
  const auto col = rows.column_index(column);
  if (!col) throw UnknownColumnError(column);

  ValueSample sample;
  sample.column = rows.column_order[*col];

  const std::size_t numeric_budget =
      static_cast<std::size_t>(cfg.max_numeric_ratio * static_cast<double>(n));

  std::unordered_set<std::string> seen;
  for (const auto& row : rows.rows) {
    if (sample.values.size() == n) break;
    const Cell& cell = row[*col];
    if (cell.is_null() || cell.is_blob() || is_missing(cell)) continue;

    const bool numeric = is_numeric(cell);
    if (numeric && sample.numeric_count >= numeric_budget) continue;

    std::string rendered = truncate_utf8(render_cell(cell), cfg.value_truncate_len);
    if (!seen.insert(rendered).second) continue;

    sample.values.push_back(std::move(rendered));
    if (numeric) ++sample.numeric_count;
  }
  return sample;
}

}  // namespace skforge
