#include "reval/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "reval/assets.hpp"
#include "reval/config.hpp"
#include "reval/dataset.hpp"
#include "reval/error.hpp"
#include "reval/payloads.hpp"
#include "reval/report_io.hpp"

namespace reval::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

}  // namespace

std::int64_t wall_clock_seconds() {
  if (const char* fixed = std::getenv("REVAL_FIXED_TIME"); fixed && *fixed)
    return std::strtoll(fixed, nullptr, 10);
  return static_cast<std::int64_t>(std::time(nullptr));
}

namespace {

json scoreset_to_json(const ScoreSet& set, const std::string& phase) {
  json j;
  j["record_id"] = set.record_id;
  j["rubric_id"] = set.rubric_id;
  j["draft_index"] = set.draft_index;
  j["weighted_total"] = set.weighted_total.to_string();
  j["phase"] = phase;
  j["entries"] = json::array();
  for (const auto& e : set.entries) {
    json entry;
    entry["criterion"] = e.criterion_name;
    entry["score"] = e.score;
    entry["justification"] = e.justification;
    entry["cited_rubric_language"] = e.cited_rubric_language;
    json spans = json::array();
    for (const auto& s : e.cited_record_spans) spans.push_back(json::array({s.start, s.end}));
    entry["cited_record_spans"] = spans;
    j["entries"].push_back(entry);
  }
  return j;
}

json proposal_to_json(const AdmissionProposal& p) {
  return json{{"kind", store_kind_name(p.kind)},
              {"key_text", p.key_text},
              {"value_doc", p.value_doc},
              {"approved", p.approved},
              {"metadata", p.metadata}};
}

RubricEdit edit_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  auto weight_of = [](const json& v) {
    if (v.is_string()) return Rational::from_string(v.get<std::string>());
    return Rational::from_string(v.dump());
  };
  auto level_of = [](const json& v) {
    Level l;
    l.score = v.at("score").get<int>();
    l.label = v.at("label").get<std::string>();
    l.descriptor = v.at("descriptor").get<std::string>();
    return l;
  };

  if (kind == "SetWeight")
    return SetWeight{j.at("criterion").get<std::string>(), weight_of(j.at("weight"))};
  if (kind == "RemoveCriterion") return RemoveCriterion{j.at("criterion").get<std::string>()};
  if (kind == "AddLevel")
    return AddLevel{j.at("criterion").get<std::string>(), level_of(j.at("level"))};
  if (kind == "RemoveLevel")
    return RemoveLevel{j.at("criterion").get<std::string>(), j.at("label").get<std::string>()};
  if (kind == "SetLevelScore")
    return SetLevelScore{j.at("criterion").get<std::string>(), j.at("label").get<std::string>(),
                         j.at("score").get<int>()};
  if (kind == "EditDescriptor")
    return EditDescriptor{j.at("criterion").get<std::string>(), j.at("label").get<std::string>(),
                          j.at("descriptor").get<std::string>()};
  if (kind == "AddCriterion") {
    const json& c = j.at("criterion");
    Criterion criterion;
    criterion.name = c.at("name").get<std::string>();
    criterion.weight = weight_of(c.value("weight", json("1")));
    for (const auto& l : c.at("levels")) criterion.levels.push_back(level_of(l));
    return AddCriterion{std::move(criterion)};
  }
  throw Error(ErrorCode::ConfigError, "unknown edit kind '" + kind + "'");
}

}  // namespace

// --- generate-rubric -------------------------------------------------------------

int cmd_generate_rubric(const GenerateRubricArgs& args, std::ostream& out, std::ostream& err) {
  try {
    RunConfig config = load_run_config(args.config_path);
    if (args.seed) apply_seed_override(config, *args.seed);

    if (!fs::exists(args.task_path)) {
      err << "task file not found: " << args.task_path << "\n";
      return kExitError;
    }
    const std::string task = read_text_file(args.task_path);

    std::string domain_note = config.domain_note;
    if (!args.domain_note_path.empty()) domain_note = read_text_file(args.domain_note_path);

    Pipeline pipeline = build_pipeline(config);
    const VersionManifest manifest = pipeline.manifest();
    const std::string audit_path =
        args.audit_path.empty() ? args.out_path + ".audit.jsonl" : args.audit_path;
    AuditWriter writer(audit_path, manifest.to_json());
    AuditTrail trail(args.run_id, manifest.manifest_hash());

    try {
      RubricProposal proposal = pipeline.generate_rubric(domain_note, task, trail);
      writer.append(trail.events());
      save_rubric_file(RubricDocument{proposal.rubric, false}, args.out_path);
      out << "proposal written to " << args.out_path << " (unapproved, "
          << proposal.rubric.criteria.size() << " criteria)\n";
      return kExitOk;
    } catch (const Error& e) {
      writer.append(trail.events());
      if (!e.detail().empty()) {
        write_text_file(args.out_path + ".raw.txt", e.detail());
        err << e.what() << "\nraw completion saved to " << args.out_path << ".raw.txt\n";
      } else {
        err << e.what() << "\n";
      }
      return kExitError;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  }
}

// --- review ----------------------------------------------------------------------

int cmd_review(const ReviewArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const int chosen = (args.approve ? 1 : 0) + (args.reject ? 1 : 0) +
                       (args.edits_path.empty() ? 0 : 1);
    if (chosen != 1) {
      err << "choose exactly one of --approve, --reject, --edit <file>\n";
      return kExitError;
    }

    RubricDocument doc = load_rubric_file(args.rubric_path);
    const std::string out_path = args.out_path.empty() ? args.rubric_path : args.out_path;

    if (args.reject) {
      write_text_file(args.rubric_path + ".rejected",
                      "rejected: " + doc.rubric.id + "\n");
      out << "rejection recorded; rubric remains unapproved\n";
      return kExitOk;
    }

    ReviewDecision decision;
    if (args.approve) {
      decision.kind = ReviewDecision::Kind::Approve;
    } else {
      decision.kind = ReviewDecision::Kind::Edit;
      json edits;
      try {
        edits = json::parse(read_text_file(args.edits_path));
      } catch (const json::exception& e) {
        err << args.edits_path << ": bad edits JSON: " << e.what() << "\n";
        return kExitError;
      }
      for (const auto& e : edits) decision.edits.push_back(edit_from_json(e));
    }

    const ReviewOutcome outcome = review_gate(doc.rubric, decision);
    save_rubric_file(*outcome.document, out_path);
    out << "approved rubric written to " << out_path << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  }
}

// --- score -----------------------------------------------------------------------

namespace {

struct RecordResult {
  CycleOutcome outcome;
  std::vector<AuditEvent> events;
  std::vector<AdmissionProposal> proposals;
};

void write_scores_row(std::ostream& tsv, const Rubric& rubric, const ScoreSet& set) {
  tsv << set.record_id << "\t" << set.weighted_total.to_string();
  for (const auto& criterion : rubric.criteria) {
    const CategoryScore* entry = set.find_entry(criterion.name);
    tsv << "\t" << (entry ? std::to_string(entry->score) : "");
  }
  tsv << "\n";
}

}  // namespace

int cmd_score(const ScoreArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig config = load_run_config(args.config_path);
    if (args.seed) apply_seed_override(config, *args.seed);
    if (args.max_iters) config.pipeline.max_critique_iterations = *args.max_iters;
    const RunMode mode = run_mode_from_name(args.mode);

    const RubricDocument rubric = load_rubric_file(args.rubric_path);
    if (!rubric.approved) {
      err << "rubric '" << rubric.rubric.id
          << "' is not approved; run review --approve before scoring\n";
      return kExitError;
    }

    ParsedDataset data = parse_dataset(args.records_path, ColumnMapping{});
    std::vector<EssayRecord> essays = data.records;
    if (args.limit > 0) essays = first_n(essays, args.limit);
    for (const auto& issue : data.issues)
      err << "warning: " << args.records_path << " line " << issue.line << ": " << issue.message
          << "\n";
    if (essays.empty()) {
      err << "no records to score in " << args.records_path << "\n";
      return kExitError;
    }

    const fs::path run_dir = fs::path(args.out_dir) / "runs" / args.run_id;
    if (fs::exists(run_dir)) {
      err << "run directory already exists, refusing to overwrite: " << run_dir.string()
          << "\n";
      return kExitError;
    }
    fs::create_directories(run_dir);

    Pipeline pipeline = build_pipeline(config);
    const VersionManifest manifest = pipeline.manifest();
    const std::string manifest_hash = manifest.manifest_hash();
    AuditWriter audit_writer((run_dir / "audit.jsonl").string(), manifest.to_json());

    std::vector<std::optional<RecordResult>> results(essays.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= essays.size()) break;
        const EssayRecord& essay = essays[i];
        const RecordText record{std::to_string(essay.essay_id), essay.body};
        AuditTrail trail(args.run_id, manifest_hash, record.id);
        trail.add("record.start", record.id);
        CycleOutcome outcome = pipeline.run_critique_cycle(record, rubric, mode, trail);
        std::vector<AdmissionProposal> proposals;
        if (outcome.ok()) {
          proposals =
              decide_admission(outcome.state, record, config.pipeline.admission_policy);
          trail.add("admission.decision",
                    std::string(admission_policy_name(config.pipeline.admission_policy)) + ": " +
                        std::to_string(proposals.size()) + " proposals");
        }
        results[i] = RecordResult{std::move(outcome), trail.events(), std::move(proposals)};
      }
    };

    const int worker_count = std::max(1, args.workers);
    if (worker_count == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      threads.reserve(static_cast<std::size_t>(worker_count));
      for (int w = 0; w < worker_count; ++w) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }

    // flush in record order so runs are deterministic for any worker count
    std::ofstream scores_tsv(run_dir / "scores.tsv", std::ios::binary);
    scores_tsv << "record_id\tweighted_total";
    for (const auto& criterion : rubric.rubric.criteria) scores_tsv << "\t" << criterion.name;
    scores_tsv << "\n";
    std::ofstream scoresets(run_dir / "scoresets.jsonl", std::ios::binary);
    std::ofstream proposals_file(run_dir / "proposals.jsonl", std::ios::binary);

    StoreSet disk_stores = load_store_set(config);
    auto embedder = build_embedding_provider(config.embedding_provider);
    const std::int64_t now = wall_clock_seconds();

    std::size_t passed = 0, exhausted = 0, cycle_errors = 0;
    for (std::size_t i = 0; i < essays.size(); ++i) {
      RecordResult& rr = *results[i];
      audit_writer.append(rr.events);
      if (!rr.outcome.ok()) {
        ++cycle_errors;
        err << "record " << essays[i].essay_id << " failed: " << rr.outcome.error->code << ": "
            << rr.outcome.error->message << "\n";
        continue;
      }
      const CritiqueCycleState& state = rr.outcome.state;
      if (state.phase == CyclePhase::Passed) ++passed;
      else ++exhausted;

      const ScoreSet& final_set = rr.outcome.final_scores();
      write_scores_row(scores_tsv, rubric.rubric, final_set);
      scoresets << scoreset_to_json(final_set, cycle_phase_name(state.phase)).dump() << "\n";
      for (const auto& proposal : rr.proposals) {
        proposals_file << proposal_to_json(proposal).dump() << "\n";
        ExemplarStore* store = nullptr;
        switch (proposal.kind) {
          case StoreKind::RubricExemplars: store = &disk_stores.rubric_exemplars; break;
          case StoreKind::ScoringExemplars: store = &disk_stores.scoring_exemplars; break;
          case StoreKind::CritiqueExemplars: store = &disk_stores.critique_exemplars; break;
        }
        add_entry(*store, *embedder, proposal.key_text, proposal.value_doc, std::nullopt,
                  proposal.approved, proposal.metadata, now);
      }
    }
    scores_tsv.flush();
    scoresets.flush();
    proposals_file.flush();

    if (!config.scoring_store_path.empty())
      save_store(disk_stores.scoring_exemplars, config.scoring_store_path);
    if (!config.critique_store_path.empty())
      save_store(disk_stores.critique_exemplars, config.critique_store_path);

    const double wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json summary;
    summary["run_id"] = args.run_id;
    summary["mode"] = args.mode;
    summary["manifest"] = json::parse(manifest.to_json());
    summary["manifest_hash"] = manifest_hash;
    summary["counts"] = json{{"records", essays.size()},
                             {"passed", passed},
                             {"exhausted", exhausted},
                             {"errors", cycle_errors}};
    summary["wall_time_seconds"] = wall_seconds;
    summary["audit_path"] = (run_dir / "audit.jsonl").string();
    summary["scores_path"] = (run_dir / "scores.tsv").string();
    summary["metrics_report_path"] = "";
    write_text_file((run_dir / "summary.json").string(), summary.dump(2) + "\n");

    out << "run " << args.run_id << ": " << essays.size() << " records, " << passed
        << " passed, " << exhausted << " exhausted, " << cycle_errors << " errors\n";
    out << "outputs under " << run_dir.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  }
}

// --- evaluate --------------------------------------------------------------------

namespace {

struct ScoresFile {
  std::vector<std::string> criteria;            // header names after weighted_total
  std::vector<std::string> order;               // record ids in file order
  std::map<std::string, Rational> totals;       // record id -> weighted total
  std::map<std::string, std::vector<int>> traits;
};

ScoresFile read_scores_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read scores file: " + path);

  ScoresFile file;
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::FormatError, path + ": empty scores file");
  {
    std::istringstream header(line);
    std::string field;
    std::vector<std::string> names;
    while (std::getline(header, field, '\t')) names.push_back(field);
    if (names.size() < 2 || names[0] != "record_id" || names[1] != "weighted_total")
      throw Error(ErrorCode::FormatError, path + ": bad scores header");
    file.criteria.assign(names.begin() + 2, names.end());
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, '\t')) fields.push_back(field);
    if (fields.size() != file.criteria.size() + 2)
      throw Error(ErrorCode::FormatError,
                  path + " line " + std::to_string(line_no) + ": wrong field count");
    const std::string& id = fields[0];
    file.order.push_back(id);
    file.totals[id] = Rational::from_string(fields[1]);
    std::vector<int> traits;
    for (std::size_t i = 2; i < fields.size(); ++i)
      traits.push_back(std::stoi(fields[i]));
    file.traits[id] = std::move(traits);
  }
  return file;
}

bool is_set8_shaped(const std::vector<std::string>& criteria) {
  if (criteria.size() != 6) return false;
  for (int i = 0; i < 6; ++i)
    if (criteria[static_cast<std::size_t>(i)] != kTraitCriterionNames[i]) return false;
  return true;
}

}  // namespace

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    ParsedDataset data =
        parse_dataset(args.dataset_path, ColumnMapping{}, ParseOptions{args.strict});
    std::vector<EssayRecord> essays = data.records;
    if (args.first_n > 0) essays = first_n(essays, args.first_n);
    if (essays.size() < 2) {
      err << "need at least 2 records, got " << essays.size() << "\n";
      return kExitError;
    }

    std::vector<std::string> ids;
    ids.reserve(essays.size());
    for (const auto& e : essays) ids.push_back(std::to_string(e.essay_id));

    // human vectors
    std::vector<LabeledVector> vectors;
    LabeledVector r1{"R1", {}}, r2{"R2", {}}, hrs{"HRS", {}};
    for (const auto& e : essays) {
      r1.values.push_back(rater_overall(e.rater1));
      r2.values.push_back(rater_overall(e.rater2));
      hrs.values.push_back(human_resolved_score(e));
    }
    vectors.push_back(r1);
    vectors.push_back(r2);
    vectors.push_back(hrs);

    std::map<std::string, std::vector<LabeledVector>> categories;
    for (int t = 0; t < 6; ++t) {
      LabeledVector c1{"R1", {}}, c2{"R2", {}};
      for (const auto& e : essays) {
        c1.values.push_back(e.rater1.trait(static_cast<std::size_t>(t)));
        c2.values.push_back(e.rater2.trait(static_cast<std::size_t>(t)));
      }
      categories[kTraitLabels[t]] = {c1, c2};
    }

    // system run vectors
    std::vector<std::string> run_labels;
    std::vector<std::string> run_labels_with_traits;
    for (const auto& spec : args.score_files) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) {
        err << "score file spec must be LABEL=path, got '" << spec << "'\n";
        return kExitError;
      }
      const std::string label = spec.substr(0, eq);
      const ScoresFile file = read_scores_file(spec.substr(eq + 1));

      std::vector<std::string> missing, extra;
      for (const auto& id : ids)
        if (!file.totals.count(id)) missing.push_back(id);
      {
        std::set<std::string> known(ids.begin(), ids.end());
        for (const auto& id : file.order)
          if (!known.count(id)) extra.push_back(id);
      }
      if (!missing.empty() || !extra.empty()) {
        err << "score file for " << label << " is misaligned with the dataset\n";
        for (const auto& id : missing) err << "  missing id: " << id << "\n";
        for (const auto& id : extra) err << "  extra id: " << id << "\n";
        return kExitError;
      }

      // the system's final score doubles its weighted total: it fills both
      // rater slots of the two-rater final
      LabeledVector run{label, {}};
      for (const auto& id : ids) run.values.push_back(2.0 * file.totals.at(id).to_double());
      vectors.push_back(std::move(run));
      run_labels.push_back(label);

      if (is_set8_shaped(file.criteria)) {
        run_labels_with_traits.push_back(label);
        for (int t = 0; t < 6; ++t) {
          LabeledVector tv{label, {}};
          for (const auto& id : ids)
            tv.values.push_back(file.traits.at(id)[static_cast<std::size_t>(t)]);
          categories[kTraitLabels[t]].push_back(std::move(tv));
        }
      }
    }

    ReportRequest request;
    request.overall_pairs.push_back({"R1", "R2", 5, 30});
    for (const auto& label : run_labels)
      request.overall_pairs.push_back({label, "HRS", 10, 60});
    request.category_pairs.push_back({"R1", "R2", 1, 6});
    for (const auto& label : run_labels_with_traits) {
      request.category_pairs.push_back({label, "R1", 1, 6});
      request.category_pairs.push_back({label, "R2", 1, 6});
    }
    std::vector<std::string> t_labels = run_labels;
    t_labels.push_back("R1");
    t_labels.push_back("R2");
    for (std::size_t i = 0; i < t_labels.size(); ++i)
      for (std::size_t k = i + 1; k < t_labels.size(); ++k)
        request.t_test_pairs.emplace_back(t_labels[i], t_labels[k]);
    request.t_test_kinds = {TTestKind::Paired, TTestKind::IndependentWelch,
                            TTestKind::IndependentPooled};

    const MetricsReport report = build_report(vectors, categories, request);

    fs::create_directories(args.out_dir);
    const std::string json_path = (fs::path(args.out_dir) / "report.json").string();
    const std::string text_path = (fs::path(args.out_dir) / "report.txt").string();
    save_report(report, json_path, text_path);
    out << report_to_text(report);
    out << "report written to " << json_path << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  }
}

// --- track -----------------------------------------------------------------------

int cmd_track(const TrackArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (!fs::is_directory(args.baseline_dir)) {
      err << "baseline directory not found: " << args.baseline_dir << "\n";
      return kExitError;
    }
    std::vector<MetricsReport> baselines;
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(args.baseline_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) baselines.push_back(load_report(p));
    if (baselines.empty()) {
      err << "no baseline reports (*.json) in " << args.baseline_dir << "\n";
      return kExitError;
    }

    const MetricsReport report = load_report(args.report_path);

    std::map<std::string, double> thresholds;
    const json tj = json::parse(read_text_file(args.thresholds_path));
    for (const auto& [key, value] : tj.items()) thresholds[key] = value.get<double>();

    const auto flags = anomaly_check(report, baselines, thresholds);
    for (const auto& flag : flags) {
      std::ostringstream line;
      line.setf(std::ios::fixed);
      line.precision(6);
      line << "FLAG " << flag.metric << " observed=" << flag.observed
           << " baseline=" << flag.baseline_mean << " threshold=" << flag.threshold;
      out << line.str() << "\n";
    }
    if (flags.empty()) {
      out << "no anomalies against " << baselines.size() << " baseline(s)\n";
      return kExitOk;
    }
    return kExitAnomalies;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  } catch (const json::exception& e) {
    err << "bad thresholds file: " << e.what() << "\n";
    return kExitError;
  }
}

// --- kb --------------------------------------------------------------------------

int cmd_kb(const KbArgs& args, std::ostream& out, std::ostream& err) {
  try {
    MockEmbedder embedder(args.dim, static_cast<std::uint64_t>(args.seed));

    if (args.action == "add") {
      ExemplarStore store;
      if (fs::exists(args.store_path)) {
        store = load_store(args.store_path);
      } else {
        if (args.kind.empty()) {
          err << "new store needs --kind (RUBRIC_EXEMPLARS | SCORING_EXEMPLARS | "
                 "CRITIQUE_EXEMPLARS)\n";
          return kExitError;
        }
        store.kind = store_kind_from_name(args.kind);
      }
      const json j = json::parse(read_text_file(args.entry_path));
      std::optional<double> performance;
      if (j.contains("performance")) performance = j.at("performance").get<double>();
      std::map<std::string, std::string> metadata;
      if (j.contains("metadata"))
        metadata = j.at("metadata").get<std::map<std::string, std::string>>();
      const std::string id =
          add_entry(store, embedder, j.at("key_text").get<std::string>(),
                    j.value("value_doc", ""), performance, j.value("approved", false), metadata,
                    wall_clock_seconds());
      save_store(store, args.store_path);
      out << "added " << id << (store.entries.back().approved ? " (approved)" : " (unapproved)")
          << "\n";
      return kExitOk;
    }

    ExemplarStore store = load_store(args.store_path);

    if (args.action == "stats") {
      std::size_t approved = 0;
      for (const auto& e : store.entries)
        if (e.approved) ++approved;
      out << "kind: " << store_kind_name(store.kind) << "\n";
      out << "entries: " << store.entries.size() << "\n";
      out << "approved: " << approved << "\n";
      out << "unapproved: " << store.entries.size() - approved << "\n";
      return kExitOk;
    }

    if (args.action == "approve") {
      bool found = false;
      for (auto& e : store.entries) {
        if (e.id == args.id) {
          e.approved = true;
          found = true;
          break;
        }
      }
      if (!found) {
        err << "no entry with id '" << args.id << "' in " << args.store_path << "\n";
        return kExitError;
      }
      save_store(store, args.store_path);
      out << "approved " << args.id << "\n";
      return kExitOk;
    }

    if (args.action == "list") {
      if (!args.query.empty()) {
        RetrievalConfig cfg;
        cfg.k = args.k;
        const auto hits = top_k(store, embedder.embed(args.query), cfg);
        for (const auto& hit : hits) {
          std::ostringstream line;
          line.setf(std::ios::fixed);
          line.precision(4);
          line << hit.entry.id << " similarity=" << hit.similarity << " score=" << hit.score;
          out << line.str() << "\n";
        }
        if (hits.empty()) out << "no approved entries matched\n";
        return kExitOk;
      }
      for (const auto& e : store.entries) {
        out << e.id << (e.approved ? " approved" : " unapproved") << " key=\""
            << (e.key_text.size() > 40 ? e.key_text.substr(0, 40) + "..." : e.key_text) << "\"";
        if (e.performance) out << " performance=" << *e.performance;
        out << "\n";
      }
      return kExitOk;
    }

    err << "unknown kb action '" << args.action << "' (list | approve | add | stats)\n";
    return kExitError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  } catch (const json::exception& e) {
    err << "bad entry JSON: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace reval::cli
