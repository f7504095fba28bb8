#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reval/audit.hpp"
#include "reval/chat.hpp"
#include "reval/exemplar_store.hpp"
#include "reval/prompt_template.hpp"
#include "reval/rubric_text.hpp"
#include "reval/scores.hpp"

namespace reval {

enum class AdmissionPolicy { Manual, AutoOnConvergence };

const char* admission_policy_name(AdmissionPolicy p);
AdmissionPolicy admission_policy_from_name(const std::string& name);

// SingleCritique runs the draft -> critique -> revise cycle; RubricOnly
// skips the critic entirely and scores once.
enum class RunMode { SingleCritique, RubricOnly };

const char* run_mode_name(RunMode m);
RunMode run_mode_from_name(const std::string& name);

struct PipelineConfig {
  CompletionParams scorer_params;
  CompletionParams critic_params;
  CompletionParams rubric_gen_params;
  RetrievalConfig rubric_retrieval;
  RetrievalConfig scoring_retrieval;
  RetrievalConfig critique_retrieval;
  int max_critique_iterations = 1;  // 1 = single-critique condition
  AdmissionPolicy admission_policy = AdmissionPolicy::Manual;
  std::string prompt_template_set_id = "default";
  // Static few-shot documents injected into every prompt, independent of
  // retrieval (the fixed two-examples experimental condition).
  std::vector<std::string> static_scoring_exemplars;
  std::vector<std::string> static_critique_exemplars;
  // Canonical string describing the configured providers (endpoints, mock
  // seeds). Enters the config hash so provider identity shows in the manifest.
  std::string provider_fingerprint;
};

// Canonical JSON used for the manifest's config hash.
std::string pipeline_config_canonical_json(const PipelineConfig& cfg);

enum class CyclePhase { Drafting, AwaitingCritique, Revising, Passed, Exhausted };

const char* cycle_phase_name(CyclePhase phase);

struct CritiqueCycleState {
  CyclePhase phase = CyclePhase::Drafting;
  int iteration = 0;  // critiques issued so far
  std::vector<ScoreSet> drafts;
  std::vector<Critique> critiques;
  Transcript transcript;  // the scorer's conversation, revisions included
};

// Deterministic fingerprint of everything that shapes a run: model ids,
// prompt set, knowledge-base snapshots, config, engine version.
struct VersionManifest {
  std::string engine_version;
  std::string scorer_model;
  std::string critic_model;
  std::string rubric_gen_model;
  std::string prompt_set_id;
  std::string prompt_set_hash;
  std::string rubric_store_hash;
  std::string scoring_store_hash;
  std::string critique_store_hash;
  std::string config_hash;

  bool operator==(const VersionManifest&) const = default;
  std::string to_json() const;       // canonical single line
  std::string manifest_hash() const; // hash of to_json()
};

struct StoreSet {
  ExemplarStore rubric_exemplars{StoreKind::RubricExemplars, {}};
  ExemplarStore scoring_exemplars{StoreKind::ScoringExemplars, {}};
  ExemplarStore critique_exemplars{StoreKind::CritiqueExemplars, {}};
};

VersionManifest build_manifest(const PipelineConfig& cfg, const PromptTemplateSet& templates,
                               const StoreSet& stores);

// --- human review gate --------------------------------------------------------

struct ReviewDecision {
  enum class Kind { Approve, Reject, Edit } kind = Kind::Approve;
  std::vector<RubricEdit> edits;  // applied in order, then approved
};

struct ReviewOutcome {
  bool approved = false;
  std::optional<RubricDocument> document;  // present unless rejected
};

ReviewOutcome review_gate(const Rubric& proposal, const ReviewDecision& decision);

// --- knowledge-base admission ---------------------------------------------------

struct AdmissionProposal {
  StoreKind kind = StoreKind::ScoringExemplars;
  std::string key_text;
  std::string value_doc;
  bool approved = false;
  std::map<std::string, std::string> metadata;
};

// Proposes KB additions for a terminal cycle: the record with its final score
// document into the scoring store, and every (draft, critique) pair into the
// critique store. Manual policy emits everything unapproved for the operator;
// auto-on-convergence admits approved entries only for runs that passed
// within budget.
std::vector<AdmissionProposal> decide_admission(const CritiqueCycleState& state,
                                                const RecordText& record,
                                                AdmissionPolicy policy);

// --- orchestration --------------------------------------------------------------

struct RubricProposal {
  Rubric rubric;          // unapproved; goes through review_gate
  std::string raw_completion;
  bool exemplar_used = false;
};

struct CycleError {
  std::string code;
  std::string message;
};

struct CycleOutcome {
  CritiqueCycleState state;  // partial on error, terminal otherwise
  std::optional<CycleError> error;

  bool ok() const { return !error.has_value(); }
  const ScoreSet& final_scores() const;  // last draft
};

class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, PromptTemplateSet templates, StoreSet stores,
           std::shared_ptr<ChatProvider> scorer_chat, std::shared_ptr<ChatProvider> critic_chat,
           std::shared_ptr<ChatProvider> rubric_chat,
           std::shared_ptr<EmbeddingProvider> embedder);

  const PipelineConfig& config() const { return cfg_; }
  const StoreSet& stores() const { return stores_; }
  const PromptTemplateSet& templates() const { return templates_; }
  VersionManifest manifest() const;

  // Rubric generation: system = domain note, user = task description plus at
  // most one retrieved exemplar rubric (omitted entirely below the similarity
  // threshold). The completion is parsed via parse_rubric; a parse failure
  // carries the raw completion for human repair.
  RubricProposal generate_rubric(const std::string& domain_note,
                                 const std::string& task_description, AuditTrail& audit);

  // Initial scoring: scorer instructions + rendered rubric + record + at most
  // one retrieved scoring exemplar + static exemplars. Only approved rubric
  // documents may score. Illegal payloads get one automatic re-ask with the
  // error text before surfacing.
  ScoreSet score_record(const RecordText& record, const RubricDocument& rubric,
                        CritiqueCycleState& state, AuditTrail& audit);

  // Critic review of the latest draft; sees the full chain of drafts and
  // prior critiques plus top-k retrieved critique exemplars.
  Critique critique_scores(CritiqueCycleState& state, const RubricDocument& rubric,
                           const RecordText& record, AuditTrail& audit);

  // Revision after a REVISE verdict: the critique goes to the scorer as a
  // user message; the new draft keeps the full history.
  ScoreSet revise_scores(CritiqueCycleState& state, const RecordText& record,
                         const RubricDocument& rubric, AuditTrail& audit);

  // Full cycle: draft, then (critique -> revise)* until PASS or the critique
  // budget is spent. RubricOnly scores once with no critic involvement.
  // Errors are captured in the outcome with the partial state, never thrown.
  CycleOutcome run_critique_cycle(const RecordText& record, const RubricDocument& rubric,
                                  RunMode mode, AuditTrail& audit);

 private:
  ChatMessage complete_logged(ChatProvider& provider, const CompletionParams& params,
                              const Transcript& transcript, const std::string& role,
                              AuditTrail& audit);
  ScoreSet ask_for_scores(const Rubric& rubric, const std::string& record_id,
                          CritiqueCycleState& state, AuditTrail& audit);
  std::string scoring_exemplar_section(const RecordText& record);
  std::string critique_exemplar_section(const std::string& query_text);
  std::string static_section(const std::vector<std::string>& docs) const;

  PipelineConfig cfg_;
  PromptTemplateSet templates_;
  StoreSet stores_;
  std::shared_ptr<ChatProvider> scorer_chat_;
  std::shared_ptr<ChatProvider> critic_chat_;
  std::shared_ptr<ChatProvider> rubric_chat_;
  std::shared_ptr<EmbeddingProvider> embedder_;
};

}  // namespace reval
