#pragma once

#include <string>
#include <vector>

#include "qsr/generator.hpp"

namespace qsr {

enum class PromptMode : uint8_t { zero_shot, few_shot, finetune_format };

struct PromptSpec {
  PromptMode mode = PromptMode::zero_shot;
  int num_shots = 5;
  CalculusId calculus = CalculusId::rcc8;
  KeyStyle key_style = KeyStyle::integer_tuples;
};

struct RenderedPrompt {
  std::string system;
  std::string user;
};

struct FinetuneExample {
  std::string instruction;
  std::string input;
  std::string response;
};

/// The "graph_edge_index, edge_labels, query_edge" data row, e.g.
/// [(0, 1), (1, 2)], ['EQ', 'NTPPI'], (0, 2)
std::string data_row(const ProblemInstance& instance);

/// Renders the chat prompt for an instance. In finetune_format the system
/// message is empty and the user text carries the instruction/input layout
/// with a blank response field.
RenderedPrompt render_prompt(const ProblemInstance& instance,
                             const PromptSpec& spec,
                             const std::vector<ProblemInstance>& shots);

/// The instruction-tuning layout; include_response fills the answer for
/// training-file export.
FinetuneExample render_finetune(const ProblemInstance& instance,
                                const PromptSpec& spec, bool include_response);

std::string finetune_to_text(const FinetuneExample& example);

/// The five built-in demonstration instances per calculus, drawn from the
/// training regime shapes. Demonstrations 1 and 5 for RCC-8 are the
/// published ones.
const std::vector<ProblemInstance>& canonical_shots(CalculusId calculus);

}  // namespace qsr
