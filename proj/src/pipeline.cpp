#include "reval/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reval/error.hpp"
#include "reval/hash.hpp"
#include "reval/payloads.hpp"
#include "reval/version.hpp"

namespace reval {

namespace {
using nlohmann::json;
}

const char* admission_policy_name(AdmissionPolicy p) {
  return p == AdmissionPolicy::Manual ? "MANUAL" : "AUTO_ON_CONVERGENCE";
}

AdmissionPolicy admission_policy_from_name(const std::string& name) {
  if (name == "MANUAL") return AdmissionPolicy::Manual;
  if (name == "AUTO_ON_CONVERGENCE") return AdmissionPolicy::AutoOnConvergence;
  throw Error(ErrorCode::ConfigError, "unknown admission policy '" + name + "'");
}

const char* run_mode_name(RunMode m) { return m == RunMode::SingleCritique ? "SC" : "RO"; }

RunMode run_mode_from_name(const std::string& name) {
  if (name == "SC") return RunMode::SingleCritique;
  if (name == "RO") return RunMode::RubricOnly;
  throw Error(ErrorCode::ConfigError, "unknown run mode '" + name + "', expected SC or RO");
}

const char* cycle_phase_name(CyclePhase phase) {
  switch (phase) {
    case CyclePhase::Drafting: return "DRAFTING";
    case CyclePhase::AwaitingCritique: return "AWAITING_CRITIQUE";
    case CyclePhase::Revising: return "REVISING";
    case CyclePhase::Passed: return "PASSED";
    case CyclePhase::Exhausted: return "EXHAUSTED";
  }
  return "UNKNOWN";
}

namespace {

json params_to_json(const CompletionParams& p) {
  json j;
  j["model_id"] = p.model_id;
  j["temperature"] = p.temperature;
  j["max_output_tokens"] = p.max_output_tokens;
  if (p.seed) j["seed"] = *p.seed;
  return j;
}

json retrieval_to_json(const RetrievalConfig& r) {
  return json{{"k", r.k},
              {"similarity_threshold", r.similarity_threshold},
              {"measure", selection_measure_name(r.measure)}};
}

}  // namespace

std::string pipeline_config_canonical_json(const PipelineConfig& cfg) {
  json j;
  j["scorer_params"] = params_to_json(cfg.scorer_params);
  j["critic_params"] = params_to_json(cfg.critic_params);
  j["rubric_gen_params"] = params_to_json(cfg.rubric_gen_params);
  j["rubric_retrieval"] = retrieval_to_json(cfg.rubric_retrieval);
  j["scoring_retrieval"] = retrieval_to_json(cfg.scoring_retrieval);
  j["critique_retrieval"] = retrieval_to_json(cfg.critique_retrieval);
  j["max_critique_iterations"] = cfg.max_critique_iterations;
  j["admission_policy"] = admission_policy_name(cfg.admission_policy);
  j["prompt_template_set_id"] = cfg.prompt_template_set_id;
  json stat = json::array();
  for (const auto& doc : cfg.static_scoring_exemplars) stat.push_back(content_hash(doc));
  j["static_scoring_exemplars"] = stat;
  stat = json::array();
  for (const auto& doc : cfg.static_critique_exemplars) stat.push_back(content_hash(doc));
  j["static_critique_exemplars"] = stat;
  j["provider_fingerprint"] = cfg.provider_fingerprint;
  return j.dump();
}

std::string VersionManifest::to_json() const {
  json j;
  j["engine_version"] = engine_version;
  j["models"] = json{{"scorer", scorer_model},
                     {"critic", critic_model},
                     {"rubric_gen", rubric_gen_model}};
  j["prompt_set"] = json{{"id", prompt_set_id}, {"hash", prompt_set_hash}};
  j["stores"] = json{{"rubric_exemplars", rubric_store_hash},
                     {"scoring_exemplars", scoring_store_hash},
                     {"critique_exemplars", critique_store_hash}};
  j["config_hash"] = config_hash;
  return j.dump();
}

std::string VersionManifest::manifest_hash() const { return content_hash(to_json()); }

VersionManifest build_manifest(const PipelineConfig& cfg, const PromptTemplateSet& templates,
                               const StoreSet& stores) {
  VersionManifest m;
  m.engine_version = kEngineVersion;
  m.scorer_model = cfg.scorer_params.model_id;
  m.critic_model = cfg.critic_params.model_id;
  m.rubric_gen_model = cfg.rubric_gen_params.model_id;
  m.prompt_set_id = templates.id();
  m.prompt_set_hash = templates.content_hash();
  m.rubric_store_hash = content_hash(serialize_store(stores.rubric_exemplars));
  m.scoring_store_hash = content_hash(serialize_store(stores.scoring_exemplars));
  m.critique_store_hash = content_hash(serialize_store(stores.critique_exemplars));
  m.config_hash = content_hash(pipeline_config_canonical_json(cfg));
  return m;
}

ReviewOutcome review_gate(const Rubric& proposal, const ReviewDecision& decision) {
  auto violations = validate_rubric(proposal);
  if (!violations.empty()) {
    std::string msg = "proposal is not a valid rubric:";
    for (const auto& v : violations) msg += " [" + v.path + "] " + v.message + ";";
    throw Error(ErrorCode::ValidationError, msg);
  }

  switch (decision.kind) {
    case ReviewDecision::Kind::Reject:
      return ReviewOutcome{false, std::nullopt};
    case ReviewDecision::Kind::Approve:
      return ReviewOutcome{true, RubricDocument{proposal, true}};
    case ReviewDecision::Kind::Edit: {
      Rubric edited = proposal;
      for (const auto& edit : decision.edits) edited = apply_edit(edited, edit);
      return ReviewOutcome{true, RubricDocument{edited, true}};
    }
  }
  throw Error(ErrorCode::ValidationError, "unreachable review decision");
}

std::vector<AdmissionProposal> decide_admission(const CritiqueCycleState& state,
                                                const RecordText& record,
                                                AdmissionPolicy policy) {
  std::vector<AdmissionProposal> proposals;
  if (state.drafts.empty()) return proposals;

  const bool converged = state.phase == CyclePhase::Passed;
  if (policy == AdmissionPolicy::AutoOnConvergence && !converged) return proposals;
  const bool approved = policy == AdmissionPolicy::AutoOnConvergence && converged;

  const ScoreSet& final_draft = state.drafts.back();
  AdmissionProposal scoring;
  scoring.kind = StoreKind::ScoringExemplars;
  scoring.key_text = record.body;
  scoring.value_doc = render_scoreset_payload(final_draft);
  scoring.approved = approved;
  scoring.metadata = {{"record_id", record.id},
                      {"phase", cycle_phase_name(state.phase)},
                      {"draft_index", std::to_string(final_draft.draft_index)}};
  proposals.push_back(std::move(scoring));

  const std::size_t pairs = std::min(state.drafts.size(), state.critiques.size());
  for (std::size_t i = 0; i < pairs; ++i) {
    AdmissionProposal critique;
    critique.kind = StoreKind::CritiqueExemplars;
    critique.key_text = record.body + "\n\n" + render_scoreset_payload(state.drafts[i]);
    critique.value_doc = render_critique_payload(state.critiques[i]);
    critique.approved = approved;
    critique.metadata = {
        {"record_id", record.id},
        {"draft_index", std::to_string(i)},
        {"verdict", state.critiques[i].verdict == Verdict::Pass ? "pass" : "revise"}};
    proposals.push_back(std::move(critique));
  }
  return proposals;
}

const ScoreSet& CycleOutcome::final_scores() const {
  if (state.drafts.empty())
    throw Error(ErrorCode::ValidationError, "cycle produced no drafts");
  return state.drafts.back();
}

// --- Pipeline -------------------------------------------------------------------

Pipeline::Pipeline(PipelineConfig cfg, PromptTemplateSet templates, StoreSet stores,
                   std::shared_ptr<ChatProvider> scorer_chat,
                   std::shared_ptr<ChatProvider> critic_chat,
                   std::shared_ptr<ChatProvider> rubric_chat,
                   std::shared_ptr<EmbeddingProvider> embedder)
    : cfg_(std::move(cfg)),
      templates_(std::move(templates)),
      stores_(std::move(stores)),
      scorer_chat_(std::move(scorer_chat)),
      critic_chat_(std::move(critic_chat)),
      rubric_chat_(std::move(rubric_chat)),
      embedder_(std::move(embedder)) {
  if (cfg_.max_critique_iterations < 1)
    throw Error(ErrorCode::ConfigError, "max_critique_iterations must be >= 1");
  if (!scorer_chat_ || !critic_chat_ || !rubric_chat_ || !embedder_)
    throw Error(ErrorCode::ConfigError, "pipeline needs chat and embedding providers");
}

VersionManifest Pipeline::manifest() const { return build_manifest(cfg_, templates_, stores_); }

ChatMessage Pipeline::complete_logged(ChatProvider& provider, const CompletionParams& params,
                                      const Transcript& transcript, const std::string& role,
                                      AuditTrail& audit) {
  audit.add(role + ".prompt", transcript_to_json(transcript));
  ChatMessage reply;
  try {
    reply = provider.complete(transcript, params);
  } catch (const Error& e) {
    audit.add(role + ".provider_error", e.what());
    throw;
  }
  if (reply.content.empty())
    throw Error(ErrorCode::EmptyCompletion, "provider returned an empty completion");
  audit.add(role + ".completion", reply.content);
  return reply;
}

std::string Pipeline::static_section(const std::vector<std::string>& docs) const {
  if (docs.empty()) return "";
  std::ostringstream joined;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i > 0) joined << "\n---\n";
    joined << docs[i];
  }
  return templates_.render("static_exemplar_section", {{"documents", joined.str()}});
}

std::string Pipeline::scoring_exemplar_section(const RecordText& record) {
  auto hit = select_exemplar(stores_.scoring_exemplars, embedder_->embed(record.body),
                             cfg_.scoring_retrieval);
  if (!hit) return "";
  return templates_.render("scoring_exemplar_section", {{"exemplar", hit->entry.value_doc}});
}

std::string Pipeline::critique_exemplar_section(const std::string& query_text) {
  const ExemplarStore& store = stores_.critique_exemplars;
  const std::size_t want = cfg_.critique_retrieval.k;
  if (want == 0) return "";

  // Rank every approved entry, then draw half from pass-tagged and half from
  // revise-tagged exemplars when both are available, topping up from whatever
  // is left so the critic sees min(k, approved) examples.
  RetrievalConfig all = cfg_.critique_retrieval;
  all.k = store.entries.size() > 0 ? store.entries.size() : 1;
  auto ranked = top_k(store, embedder_->embed(query_text), all);
  if (ranked.empty()) return "";

  std::vector<const RetrievalHit*> pass_pool, revise_pool, other_pool;
  for (const auto& hit : ranked) {
    auto it = hit.entry.metadata.find("verdict");
    if (it == hit.entry.metadata.end()) other_pool.push_back(&hit);
    else if (it->second == "pass") pass_pool.push_back(&hit);
    else revise_pool.push_back(&hit);
  }

  const std::size_t want_pass = want / 2;
  std::vector<const RetrievalHit*> chosen;
  auto take = [&](std::vector<const RetrievalHit*>& pool, std::size_t n) {
    for (std::size_t i = 0; i < pool.size() && n > 0; ++i) {
      if (std::find(chosen.begin(), chosen.end(), pool[i]) != chosen.end()) continue;
      chosen.push_back(pool[i]);
      --n;
    }
  };
  take(revise_pool, want - want_pass);
  take(pass_pool, want_pass);
  if (chosen.size() < want) take(other_pool, want - chosen.size());
  if (chosen.size() < want) take(revise_pool, want - chosen.size());
  if (chosen.size() < want) take(pass_pool, want - chosen.size());

  // prompt order follows the overall ranking
  std::sort(chosen.begin(), chosen.end(), [](const RetrievalHit* a, const RetrievalHit* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->entry.id < b->entry.id;
  });

  std::ostringstream joined;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (i > 0) joined << "\n";
    const auto& entry = chosen[i]->entry;
    auto verdict = entry.metadata.find("verdict");
    joined << "Example critique"
           << (verdict != entry.metadata.end() ? " (" + verdict->second + ")" : "") << ":\n"
           << entry.value_doc << "\n";
  }
  return templates_.render("critique_exemplar_section", {{"exemplars", joined.str()}});
}

RubricProposal Pipeline::generate_rubric(const std::string& domain_note,
                                         const std::string& task_description,
                                         AuditTrail& audit) {
  if (task_description.empty())
    throw Error(ErrorCode::ValidationError, "task description must be non-empty");

  std::string exemplar_section;
  auto hit = select_exemplar(stores_.rubric_exemplars, embedder_->embed(task_description),
                             cfg_.rubric_retrieval);
  if (hit) {
    exemplar_section =
        templates_.render("rubric_exemplar_section", {{"exemplar", hit->entry.value_doc}});
  }

  Transcript transcript;
  transcript.system(domain_note.empty() ? "You create evaluation rubrics." : domain_note);
  transcript.user(templates_.render("rubric_generator_user",
                                    {{"task_description", task_description},
                                     {"exemplar_section", exemplar_section}}));

  const ChatMessage reply =
      complete_logged(*rubric_chat_, cfg_.rubric_gen_params, transcript, "rubric_gen", audit);

  RubricProposal proposal;
  proposal.raw_completion = reply.content;
  proposal.exemplar_used = hit.has_value();
  try {
    proposal.rubric = parse_rubric(reply.content);
  } catch (const Error& e) {
    audit.add("rubric_gen.parse_error", e.what());
    throw Error(e.code(), std::string(e.what()) + " (raw completion attached)", reply.content);
  }
  if (proposal.rubric.id.empty())
    proposal.rubric.id = "proposal-" + content_hash(task_description);
  audit.add("rubric_gen.parse", render_rubric(proposal.rubric));
  return proposal;
}

ScoreSet Pipeline::ask_for_scores(const Rubric& rubric, const std::string& record_id,
                                  CritiqueCycleState& state, AuditTrail& audit) {
  ChatMessage reply =
      complete_logged(*scorer_chat_, cfg_.scorer_params, state.transcript, "scorer", audit);
  state.transcript.assistant(reply.content);

  auto parse = [&](const std::string& text) {
    ScoreSet set = parse_scoreset_payload(extract_block(text, "scores"), rubric);
    set.record_id = record_id;
    set.draft_index = static_cast<int>(state.drafts.size());
    return set;
  };

  try {
    ScoreSet set = parse(reply.content);
    audit.add("scorer.parse", render_scoreset_payload(set));
    return set;
  } catch (const Error& first) {
    if (first.code() != ErrorCode::ParseError && first.code() != ErrorCode::ValidationError &&
        first.code() != ErrorCode::BlockNotFound)
      throw;
    audit.add("scorer.parse_error", first.what());
    // one automatic re-ask with the error text; syntax repair is not the
    // critic's job
    state.transcript.user(
        templates_.render("reask_user", {{"error", first.what()}, {"block_kind", "scores"}}));
    reply = complete_logged(*scorer_chat_, cfg_.scorer_params, state.transcript, "scorer", audit);
    state.transcript.assistant(reply.content);
    try {
      ScoreSet set = parse(reply.content);
      audit.add("scorer.parse", render_scoreset_payload(set));
      return set;
    } catch (const Error& second) {
      audit.add("scorer.parse_error", second.what());
      throw;
    }
  }
}

ScoreSet Pipeline::score_record(const RecordText& record, const RubricDocument& rubric,
                                CritiqueCycleState& state, AuditTrail& audit) {
  if (!rubric.approved)
    throw Error(ErrorCode::ValidationError, "rubric '" + rubric.rubric.id + "' is not approved");
  if (record.body.empty())
    throw Error(ErrorCode::ValidationError, "record '" + record.id + "' has an empty body");
  if (!state.drafts.empty())
    throw Error(ErrorCode::ValidationError, "score_record needs a fresh cycle state");

  state.transcript.system(
      templates_.render("scorer_system", {{"rubric", render_rubric(rubric.rubric)}}));
  state.transcript.user(templates_.render(
      "scorer_user", {{"record_body", record.body},
                      {"retrieved_section", scoring_exemplar_section(record)},
                      {"static_section", static_section(cfg_.static_scoring_exemplars)}}));

  ScoreSet draft = ask_for_scores(rubric.rubric, record.id, state, audit);
  state.drafts.push_back(draft);
  state.phase = CyclePhase::AwaitingCritique;
  return draft;
}

Critique Pipeline::critique_scores(CritiqueCycleState& state, const RubricDocument& rubric,
                                   const RecordText& record, AuditTrail& audit) {
  if (state.drafts.empty())
    throw Error(ErrorCode::ValidationError, "critique needs at least one draft");

  // full chain of drafts and prior critiques, oldest first
  std::ostringstream chain;
  for (std::size_t i = 0; i < state.drafts.size(); ++i) {
    chain << "Draft " << i << ":\n" << render_scoreset_payload(state.drafts[i]);
    if (i < state.critiques.size())
      chain << "\nCritique of draft " << i << ":\n"
            << render_critique_payload(state.critiques[i]);
    if (i + 1 < state.drafts.size()) chain << "\n";
  }

  // invalid span citations are surfaced to the critic, not silently dropped
  std::string invalid_section;
  const auto highlights = highlight_spans(state.drafts.back(), record);
  if (!highlights.invalid.empty()) {
    std::ostringstream inv;
    inv << "The latest draft cites text spans that do not exist in the record:\n";
    for (const auto& h : highlights.invalid)
      inv << "- " << h.criterion_name << ": bytes " << h.span.start << "-" << h.span.end
          << " (record is " << record.body.size() << " bytes)\n";
    invalid_section = inv.str();
  }

  const std::string query =
      record.body + "\n\n" + render_scoreset_payload(state.drafts.back());

  Transcript transcript;
  transcript.system(
      templates_.render("critic_system", {{"rubric", render_rubric(rubric.rubric)}}));
  transcript.user(templates_.render(
      "critic_user", {{"record_body", record.body},
                      {"chain", chain.str()},
                      {"invalid_spans_section", invalid_section},
                      {"retrieved_section", critique_exemplar_section(query)},
                      {"static_section", static_section(cfg_.static_critique_exemplars)}}));

  ChatMessage reply =
      complete_logged(*critic_chat_, cfg_.critic_params, transcript, "critic", audit);

  Critique critique;
  try {
    critique = parse_critique_payload(extract_block(reply.content, "critique"));
    audit.add("critic.parse", render_critique_payload(critique));
  } catch (const Error& first) {
    if (first.code() != ErrorCode::ParseError && first.code() != ErrorCode::ValidationError &&
        first.code() != ErrorCode::BlockNotFound)
      throw;
    audit.add("critic.parse_error", first.what());
    transcript.assistant(reply.content);
    transcript.user(
        templates_.render("reask_user", {{"error", first.what()}, {"block_kind", "critique"}}));
    reply = complete_logged(*critic_chat_, cfg_.critic_params, transcript, "critic", audit);
    try {
      critique = parse_critique_payload(extract_block(reply.content, "critique"));
      audit.add("critic.parse", render_critique_payload(critique));
    } catch (const Error& second) {
      audit.add("critic.parse_error", second.what());
      throw;
    }
  }

  state.critiques.push_back(critique);
  state.iteration += 1;
  state.phase = critique.verdict == Verdict::Pass ? CyclePhase::Passed : CyclePhase::Revising;
  return critique;
}

ScoreSet Pipeline::revise_scores(CritiqueCycleState& state, const RecordText& record,
                                 const RubricDocument& rubric, AuditTrail& audit) {
  if (state.critiques.empty() || state.critiques.back().verdict != Verdict::Revise)
    throw Error(ErrorCode::ValidationError, "revision needs a REVISE verdict");

  state.transcript.user(templates_.render(
      "revise_user", {{"critique", render_critique_payload(state.critiques.back())}}));

  ScoreSet revised = ask_for_scores(rubric.rubric, record.id, state, audit);
  if (revised.entries == state.drafts.back().entries)
    audit.add("revision.no_change", "revision identical to draft " +
                                        std::to_string(state.drafts.back().draft_index));
  state.drafts.push_back(revised);
  state.phase = CyclePhase::AwaitingCritique;
  return revised;
}

CycleOutcome Pipeline::run_critique_cycle(const RecordText& record, const RubricDocument& rubric,
                                          RunMode mode, AuditTrail& audit) {
  CycleOutcome outcome;
  CritiqueCycleState& state = outcome.state;
  try {
    score_record(record, rubric, state, audit);
    if (mode == RunMode::RubricOnly) {
      state.phase = CyclePhase::Passed;  // no critic involvement
    } else {
      while (true) {
        if (state.iteration >= cfg_.max_critique_iterations) {
          state.phase = CyclePhase::Exhausted;
          break;
        }
        const Critique critique = critique_scores(state, rubric, record, audit);
        if (critique.verdict == Verdict::Pass) break;
        revise_scores(state, record, rubric, audit);
      }
    }
    audit.add("cycle.terminal", cycle_phase_name(state.phase));
  } catch (const Error& e) {
    outcome.error = CycleError{error_code_name(e.code()), e.what()};
    audit.add("cycle.error", e.what());
  }
  return outcome;
}

}  // namespace reval
