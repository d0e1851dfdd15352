#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsr/relations.hpp"

namespace qsr {

enum class ParseFailure : uint8_t { empty_response, no_label_found, non_atomic };

std::string_view to_string(ParseFailure f);

struct ParsedResponse {
  std::optional<Atom> atom;
  std::optional<ParseFailure> failure;  // set iff atom is not
  std::string cot_text;                 // think-delimited segment, if any

  bool ok() const { return atom.has_value(); }
};

/// Extracts the answer from a raw model response. Any <think>...</think>
/// segment (or text before a bare </think>) is stripped into cot_text,
/// then the first of these that matches wins:
///   1. the last {"label": <int>} style JSON object,
///   2. the last standalone integer token,
///   3. the last relation-name token.
ParsedResponse parse_response(std::string_view text, const Calculus& calculus);

/// One model interaction.
struct EvalRecord {
  std::string instance_id;
  std::string prompt;
  std::string raw_response;
  std::optional<std::string> cot_text;
  std::optional<Atom> parsed;
  std::optional<std::string> parse_error;
  std::optional<bool> correct;  // defined iff parsed is
  std::optional<int> output_tokens;
};

enum class ScorePolicy : uint8_t { wrong_on_failure, exclude_failures };

struct LabelScore {
  Atom label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int count = 0;  // gold occurrences among scored records
};

struct ScoreReport {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<LabelScore> per_label;
  int non_response_count = 0;
  int scored_records = 0;
};

/// Standard multiclass precision/recall/F1 per gold label, 0/0 = 0.
/// Records must be joined against gold labels beforehand (correct and
/// parsed fields populated); `gold` gives the gold atom per record.
ScoreReport score(const std::vector<EvalRecord>& records,
                  const std::vector<Atom>& gold, ScorePolicy policy);

/// Aligned text table in Label, Pr., Re., F1., Count column order.
std::string report_to_text(const ScoreReport& report);

}  // namespace qsr
