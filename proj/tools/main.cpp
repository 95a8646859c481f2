#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "skforge/errors.hpp"
#include "skforge/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDataFormat = 3;
constexpr int kExitInternal = 4;

void emit(const nlohmann::ordered_json& payload, const std::string& out_path) {
  const std::string text = payload.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    skforge::write_text_file(out_path, text);
  }
}

struct CommonOpts {
  std::string config_path;
  std::string db_root;
  std::string tables_json;
  std::string templates_path;
  std::optional<std::uint64_t> seed;

  skforge::PipelineConfig resolve() const {
    skforge::PipelineConfig cfg;
    if (!config_path.empty()) cfg = skforge::PipelineConfig::load_file(config_path);
    cfg.apply_env_overrides();
    if (!db_root.empty()) cfg.db_root = db_root;
    if (!tables_json.empty()) cfg.tables_json = tables_json;
    if (!templates_path.empty()) cfg.templates_path = templates_path;
    if (seed) cfg.set_seed(*seed);
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "pipeline config JSON");
  cmd->add_option("--db-root", opts.db_root, "directory holding <db_id>/<db_id>.sqlite");
  cmd->add_option("--tables-json", opts.tables_json, "Spider tables.json metadata");
  cmd->add_option("--templates", opts.templates_path, "task template pack");
  cmd->add_option("--seed", opts.seed, "global RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skforge: builds database-knowledge training corpora and scores predicted SQL"};
  app.require_subcommand(1);

  // extract
  CommonOpts extract_opts;
  std::string extract_out;
  auto* extract = app.add_subcommand("extract", "dump database schemas as JSON");
  add_common(extract, extract_opts);
  extract->add_option("--out", extract_out, "output file (default stdout)");

  // sample
  CommonOpts sample_opts;
  std::string sample_db_id, sample_table, sample_out;
  auto* sample = app.add_subcommand("sample", "dump subtables and value samples for one database");
  add_common(sample, sample_opts);
  sample->add_option("--db-id", sample_db_id, "database to sample")->required();
  sample->add_option("--table", sample_table, "restrict to one table");
  sample->add_option("--out", sample_out, "output file (default stdout)");

  // generate
  CommonOpts gen_opts;
  std::string gen_out, gen_stats_out;
  std::size_t gen_jobs = 1;
  auto* generate = app.add_subcommand("generate", "build the knowledge-injection corpus");
  add_common(generate, gen_opts);
  generate->add_option("--out", gen_out, "corpus JSONL path");
  generate->add_option("--stats-out", gen_stats_out, "stats JSON path");
  generate->add_option("--jobs", gen_jobs, "parallel database workers")->default_val(1);

  // evaluate
  std::string eval_gold, eval_preds, eval_db_root, eval_tables_json;
  std::string eval_report_out, eval_verdicts_out, eval_em_mode = "component";
  double eval_timeout_secs = 30.0;
  std::size_t eval_jobs = 1;
  auto* evaluate = app.add_subcommand("evaluate", "score predicted SQL against gold");
  evaluate->add_option("--gold", eval_gold, "Spider-format gold JSON")->required();
  evaluate->add_option("--preds", eval_preds, "predictions (SQL per line or JSONL)")->required();
  evaluate->add_option("--db-root", eval_db_root, "database directory")->required();
  evaluate->add_option("--tables-json", eval_tables_json, "schema metadata for column checks");
  evaluate->add_option("--em-mode", eval_em_mode, "component|strict")
      ->check(CLI::IsMember({"component", "strict"}));
  evaluate->add_option("--timeout-secs", eval_timeout_secs, "per-query execution timeout");
  evaluate->add_option("--jobs", eval_jobs, "parallel scoring workers")->default_val(1);
  evaluate->add_option("--report", eval_report_out, "report JSON path (default stdout)");
  evaluate->add_option("--verdicts", eval_verdicts_out, "per-example verdict JSONL path");

  // stats
  std::string stats_corpus, stats_templates, stats_expect, stats_parse, stats_out;
  auto* stats = app.add_subcommand("stats", "corpus statistics / SQL AST dump");
  stats->add_option("--corpus", stats_corpus, "corpus JSONL to analyze");
  stats->add_option("--templates", stats_templates, "template pack used for the corpus");
  stats->add_option("--expect", stats_expect, "stats JSON to verify counts against");
  stats->add_option("--parse", stats_parse, "dump ASTs for a file of SQL statements");
  stats->add_option("--out", stats_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      emit(skforge::run_extract(extract_opts.resolve()), extract_out);
      return kExitOk;
    }

    if (*sample) {
      const auto cfg = sample_opts.resolve();
      std::optional<std::string> table;
      if (!sample_table.empty()) table = sample_table;
      emit(skforge::run_sample(cfg, sample_db_id, table), sample_out);
      return kExitOk;
    }

    if (*generate) {
      auto cfg = gen_opts.resolve();
      if (!gen_out.empty()) cfg.output_path = gen_out;
      if (!gen_stats_out.empty()) cfg.stats_path = gen_stats_out;
      const auto stats_result = skforge::run_generate(cfg, gen_jobs);
      if (const auto ratio = stats_result.objective_ratio()) {
        std::fprintf(stderr, "generated %zu records; semantic:schema ratio %.4f (target %.4f)\n",
                     stats_result.total, *ratio, cfg.generation.objective_ratio_target);
      } else {
        std::fprintf(stderr, "generated %zu records; no schema-objective records\n",
                     stats_result.total);
      }
      return kExitOk;
    }

    if (*evaluate) {
      const auto examples = skforge::load_eval_examples(eval_gold, eval_preds);
      skforge::EvalConfig cfg;
      cfg.em_mode = eval_em_mode == "strict" ? skforge::EmMode::strict
                                             : skforge::EmMode::component;
      cfg.timeout = std::chrono::milliseconds(
          static_cast<std::int64_t>(eval_timeout_secs * 1000.0));
      cfg.jobs = eval_jobs;
      std::optional<std::string> tables_json;
      if (!eval_tables_json.empty()) tables_json = eval_tables_json;

      const auto report = skforge::run_evaluate(examples, eval_db_root, tables_json, cfg);
      emit(report.to_json(), eval_report_out);
      if (!eval_verdicts_out.empty()) {
        std::string lines;
        for (const auto& v : report.verdicts) {
          lines += v.to_json().dump();
          lines += '\n';
        }
        skforge::write_text_file(eval_verdicts_out, lines);
      }
      return kExitOk;
    }

    if (*stats) {
      if (!stats_parse.empty()) {
        emit(skforge::parse_dump_file(stats_parse), stats_out);
        return kExitOk;
      }
      if (stats_corpus.empty()) {
        std::fprintf(stderr, "stats: --corpus or --parse is required\n");
        return kExitInput;
      }
      const auto pack = stats_templates.empty()
                            ? skforge::TemplatePack::builtin()
                            : skforge::TemplatePack::load_file(stats_templates);
      const auto report = skforge::run_stats(stats_corpus, pack);
      emit(report.to_json(), stats_out);
      if (!stats_expect.empty()) {
        std::ifstream expect_in(stats_expect);
        if (!expect_in) throw skforge::FileNotFoundError(stats_expect);
        nlohmann::json expected_json;
        expect_in >> expected_json;
        const auto expected = skforge::CorpusStats::from_json(expected_json);
        if (expected.total != report.stats.total ||
            expected.per_objective != report.stats.per_objective ||
            expected.per_task_kind != report.stats.per_task_kind ||
            expected.per_db != report.stats.per_db) {
          std::fprintf(stderr, "stats: recomputed counts do not match %s\n",
                       stats_expect.c_str());
          return kExitDataFormat;
        }
        std::fprintf(stderr, "stats: counts match %s\n", stats_expect.c_str());
      }
      return kExitOk;
    }
  } catch (const skforge::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const skforge::DataFormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDataFormat;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
