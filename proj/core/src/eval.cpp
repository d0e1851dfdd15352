#include "qsr/eval.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <regex>
#include <sstream>

namespace qsr {

std::string_view to_string(ParseFailure f) {
  switch (f) {
    case ParseFailure::empty_response: return "empty_response";
    case ParseFailure::no_label_found: return "no_label_found";
    case ParseFailure::non_atomic: return "non_atomic";
  }
  return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

ParsedResponse parse_response(std::string_view text, const Calculus& calculus) {
  ParsedResponse result;

  // Split off the chain of thought.
  std::string_view answer = text;
  const size_t close = text.rfind("</think>");
  if (close != std::string_view::npos) {
    std::string_view cot = text.substr(0, close);
    const size_t open = cot.find("<think>");
    if (open != std::string_view::npos) cot = cot.substr(open + 7);
    result.cot_text = std::string(trim(cot));
    answer = text.substr(close + 8);
  }

  const std::string body(trim(answer));
  if (body.empty()) {
    result.failure = ParseFailure::empty_response;
    return result;
  }

  auto finish = [&](const std::string& token) {
    try {
      result.atom = calculus.parse_label(token);
    } catch (const ParseError&) {
      result.failure = ParseFailure::non_atomic;
    }
  };

  // 1. Last {"label": N}.
  static const std::regex label_re("\"label\"\\s*:\\s*(\\d+)");
  std::string last_label;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), label_re);
       it != std::sregex_iterator(); ++it)
    last_label = (*it)[1].str();
  if (!last_label.empty()) {
    finish(last_label);
    return result;
  }

  // 2. Last standalone integer token.
  static const std::regex int_re("\\d+");
  std::string last_int;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), int_re);
       it != std::sregex_iterator(); ++it) {
    const size_t pos = static_cast<size_t>(it->position());
    const size_t end = pos + it->length();
    if (pos > 0 && is_word_char(body[pos - 1])) continue;
    if (end < body.size() && is_word_char(body[end])) continue;
    last_int = it->str();
  }
  if (!last_int.empty()) {
    finish(last_int);
    return result;
  }

  // 3. Last relation-name token (words, or the =/</> symbols for IA).
  static const std::regex name_re("[A-Za-z]+|[=<>]");
  std::optional<Atom> last_name;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), name_re);
       it != std::sregex_iterator(); ++it) {
    const size_t pos = static_cast<size_t>(it->position());
    const size_t end = pos + it->length();
    if (pos > 0 && is_word_char(body[pos - 1])) continue;
    if (end < body.size() && is_word_char(body[end])) continue;
    if (const auto atom = calculus.find(it->str())) last_name = atom;
  }
  if (last_name) {
    result.atom = last_name;
    return result;
  }

  result.failure = ParseFailure::no_label_found;
  return result;
}

ScoreReport score(const std::vector<EvalRecord>& records,
                  const std::vector<Atom>& gold, ScorePolicy policy) {
  if (records.size() != gold.size())
    throw ContractViolation("records and gold labels differ in length");
  if (records.empty()) return {};
  const Calculus& calculus = Calculus::get(gold.front().calculus);
  const int n = calculus.arity();

  std::vector<int> gold_count(n, 0), pred_count(n, 0), true_pos(n, 0);
  int correct = 0, scored = 0, non_response = 0;
  for (size_t i = 0; i < records.size(); ++i) {
    const bool parsed = records[i].parsed.has_value();
    if (!parsed) {
      ++non_response;
      if (policy == ScorePolicy::exclude_failures) continue;
    }
    ++scored;
    ++gold_count[gold[i].index];
    if (parsed) {
      ++pred_count[records[i].parsed->index];
      if (*records[i].parsed == gold[i]) {
        ++true_pos[gold[i].index];
        ++correct;
      }
    }
  }

  ScoreReport report;
  report.scored_records = scored;
  report.non_response_count = non_response;
  report.accuracy = scored ? static_cast<double>(correct) / scored : 0.0;
  double f1_sum = 0.0;
  int f1_labels = 0;
  for (int i = 0; i < n; ++i) {
    if (gold_count[i] == 0 && pred_count[i] == 0) continue;
    LabelScore ls;
    ls.label = calculus.atom(i);
    ls.count = gold_count[i];
    ls.precision = pred_count[i] ? static_cast<double>(true_pos[i]) / pred_count[i] : 0.0;
    ls.recall = gold_count[i] ? static_cast<double>(true_pos[i]) / gold_count[i] : 0.0;
    const double denom = ls.precision + ls.recall;
    ls.f1 = denom > 0 ? 2.0 * ls.precision * ls.recall / denom : 0.0;
    report.per_label.push_back(ls);
    if (gold_count[i] > 0) {
      f1_sum += ls.f1;
      ++f1_labels;
    }
  }
  report.macro_f1 = f1_labels ? f1_sum / f1_labels : 0.0;
  return report;
}

std::string report_to_text(const ScoreReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(8) << "Label" << std::right << std::setw(6)
      << "Pr." << std::setw(6) << "Re." << std::setw(6) << "F1."
      << std::setw(7) << "Count" << '\n';
  for (const LabelScore& ls : report.per_label) {
    out << std::left << std::setw(8) << std::string(ls.label.name())
        << std::right << std::setw(6) << ls.precision << std::setw(6)
        << ls.recall << std::setw(6) << ls.f1 << std::setw(7) << ls.count
        << '\n';
  }
  out << "accuracy " << report.accuracy << "  macro_f1 " << report.macro_f1
      << "  non_responses " << report.non_response_count << "  records "
      << report.scored_records << '\n';
  return out.str();
}

}  // namespace qsr
