#include <iostream>

#include <CLI11.hpp>

#include "reval/cli.hpp"
#include "reval/version.hpp"

int main(int argc, char** argv) {
  using namespace reval;

  CLI::App app{"reval: rubric-driven text evaluation engine"};
  app.set_version_flag("--version", kEngineVersion);
  app.require_subcommand(1);

  // generate-rubric
  cli::GenerateRubricArgs gen;
  std::int64_t gen_seed = 0;
  auto* gen_cmd = app.add_subcommand("generate-rubric", "draft a rubric proposal for review");
  gen_cmd->add_option("--config", gen.config_path, "run config file")->required();
  gen_cmd->add_option("--task", gen.task_path, "task description file")->required();
  gen_cmd->add_option("--out", gen.out_path, "proposal rubric file to write")->required();
  gen_cmd->add_option("--audit", gen.audit_path, "audit file (default <out>.audit.jsonl)");
  gen_cmd->add_option("--run-id", gen.run_id, "run identifier");
  gen_cmd->add_option("--domain-note", gen.domain_note_path, "domain note file");
  auto* gen_seed_opt = gen_cmd->add_option("--seed", gen_seed, "seed recorded in the manifest");

  // review
  cli::ReviewArgs review;
  auto* review_cmd = app.add_subcommand("review", "human gate: approve, edit, or reject");
  review_cmd->add_option("--rubric", review.rubric_path, "rubric file")->required();
  review_cmd->add_flag("--approve", review.approve, "approve as-is");
  review_cmd->add_flag("--reject", review.reject, "record a rejection");
  review_cmd->add_option("--edit", review.edits_path, "JSON edits file; applies then approves");
  review_cmd->add_option("--out", review.out_path, "write result here instead of in place");

  // score
  cli::ScoreArgs score;
  std::int64_t score_seed = 0;
  int score_max_iters = 0;
  auto* score_cmd = app.add_subcommand("score", "run the scoring pipeline over records");
  score_cmd->add_option("--config", score.config_path, "run config file")->required();
  score_cmd->add_option("--rubric", score.rubric_path, "approved rubric file")->required();
  score_cmd->add_option("--records", score.records_path, "records TSV")->required();
  score_cmd->add_option("--out", score.out_dir, "output directory")->required();
  score_cmd->add_option("--run-id", score.run_id, "unique run id")->required();
  score_cmd->add_option("--mode", score.mode, "SC (critique cycle) or RO (rubric only)");
  auto* iters_opt =
      score_cmd->add_option("--max-iters", score_max_iters, "critique budget override");
  auto* score_seed_opt =
      score_cmd->add_option("--seed", score_seed, "seed recorded in the manifest");
  score_cmd->add_option("--workers", score.workers, "concurrent records");
  score_cmd->add_option("--limit", score.limit, "score only the first N records");

  // evaluate
  cli::EvaluateArgs evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "build the metrics report");
  eval_cmd->add_option("--dataset", evaluate.dataset_path, "dataset TSV")->required();
  eval_cmd->add_option("--scores", evaluate.score_files, "LABEL=scores.tsv (repeatable)");
  eval_cmd->add_option("--out", evaluate.out_dir, "report output directory")->required();
  eval_cmd->add_option("--first-n", evaluate.first_n, "use only the first N records");
  eval_cmd->add_flag("--strict", evaluate.strict, "fail on malformed dataset rows");

  // track
  cli::TrackArgs track;
  auto* track_cmd = app.add_subcommand("track", "flag metric anomalies against baselines");
  track_cmd->add_option("--baseline", track.baseline_dir, "directory of baseline reports")
      ->required();
  track_cmd->add_option("--report", track.report_path, "report to check")->required();
  track_cmd->add_option("--thresholds", track.thresholds_path, "thresholds JSON")->required();

  // kb
  cli::KbArgs kb;
  auto* kb_cmd = app.add_subcommand("kb", "knowledge-base maintenance");
  kb_cmd->add_option("action", kb.action, "list | approve | add | stats")->required();
  kb_cmd->add_option("--store", kb.store_path, "store file")->required();
  kb_cmd->add_option("--kind", kb.kind, "store kind when creating via add");
  kb_cmd->add_option("--id", kb.id, "entry id (approve)");
  kb_cmd->add_option("--entry", kb.entry_path, "entry JSON file (add)");
  kb_cmd->add_option("--query", kb.query, "diagnostic retrieval query (list)");
  kb_cmd->add_option("--k", kb.k, "top-k for --query");
  kb_cmd->add_option("--dim", kb.dim, "mock embedder dimension");
  kb_cmd->add_option("--seed", kb.seed, "mock embedder seed");

  CLI11_PARSE(app, argc, argv);

  if (gen_cmd->parsed()) {
    if (gen_seed_opt->count() > 0) gen.seed = gen_seed;
    return cli::cmd_generate_rubric(gen, std::cout, std::cerr);
  }
  if (review_cmd->parsed()) return cli::cmd_review(review, std::cout, std::cerr);
  if (score_cmd->parsed()) {
    if (iters_opt->count() > 0) score.max_iters = score_max_iters;
    if (score_seed_opt->count() > 0) score.seed = score_seed;
    return cli::cmd_score(score, std::cout, std::cerr);
  }
  if (eval_cmd->parsed()) return cli::cmd_evaluate(evaluate, std::cout, std::cerr);
  if (track_cmd->parsed()) return cli::cmd_track(track, std::cout, std::cerr);
  if (kb_cmd->parsed()) return cli::cmd_kb(kb, std::cout, std::cerr);
  return cli::kExitError;
}
