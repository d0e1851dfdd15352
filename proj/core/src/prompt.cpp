#include "qsr/prompt.hpp"

#include <sstream>

namespace qsr {

namespace {

constexpr std::string_view kSystemLine =
    "You are a helpful assistant. Just answer the question as a single "
    "integer.";

std::string calculus_title(CalculusId id) {
  return id == CalculusId::rcc8 ? "RCC-8" : "Interval Algebra";
}

// The question paragraph. The published template hard-codes "RCC-8" and
// "8 base relations" even in the interval-algebra fine-tuning prompt; the
// inference prompts adapt both to the calculus.
std::string question_block(const Calculus& calc, bool finetune) {
  const std::string count = finetune ? "8" : std::to_string(calc.arity());
  std::ostringstream out;
  out << "Now the question is: Given a consistent graph with edges comprising "
         "the " << count << "\n"
      << "base relations, predict the label of the target edge. More "
         "specifically,\n"
      << "Given a data row delimited by a comma with the following columns:\n"
      << "`graph_edge_index`, `edge_labels`, `query_edge`, predict the label "
         "of the\n"
      << "`query_edge` as one of the " << count
      << " base relations as a power of 2 as defined above.";
  return out.str();
}

std::string table_block(const Calculus& calc, KeyStyle style, bool finetune) {
  // The fine-tuning template says "RCC-8" here for both calculi.
  const std::string name = finetune ? "RCC-8" : calculus_title(calc.id());
  std::ostringstream out;
  out << "The following is the composition table of " << name
      << " as a JSON dictionary:\n"
      << calc.table_json(style);
  return out.str();
}

std::string expert_line(const Calculus& calc, bool finetune) {
  std::ostringstream out;
  out << "You are a qualitative spatial and temporal reasoning expert "
         "specializing in\n"
      << calculus_title(calc.id());
  if (finetune) out << '.';
  return out.str();
}

std::string instruction_body(const Calculus& calc, KeyStyle style,
                             bool finetune) {
  std::ostringstream out;
  out << expert_line(calc, finetune) << "\n\n"
      << "The following are the base elements of " << calculus_title(calc.id())
      << ":\n\n"
      << calc.base_elements_block() << "\n"
      << table_block(calc, style, finetune) << "\n\n"
      << question_block(calc, finetune);
  return out.str();
}

}  // namespace

std::string data_row(const ProblemInstance& instance) {
  const Calculus& calc = Calculus::get(instance.network.calculus());
  std::ostringstream out;
  out << '[';
  bool first = true;
  for (const Edge& e : instance.network.edges()) {
    if (!first) out << ", ";
    first = false;
    out << '(' << e.head << ", " << e.tail << ')';
  }
  out << "], [";
  first = true;
  for (const Edge& e : instance.network.edges()) {
    if (!first) out << ", ";
    first = false;
    out << '\'' << calc.atom_name(e.label.the_atom().index) << '\'';
  }
  out << "], (" << instance.source << ", " << instance.tail << ')';
  return out.str();
}

RenderedPrompt render_prompt(const ProblemInstance& instance,
                             const PromptSpec& spec,
                             const std::vector<ProblemInstance>& shots) {
  if (spec.mode == PromptMode::finetune_format) {
    const FinetuneExample ex = render_finetune(instance, spec, false);
    return {"", finetune_to_text(ex)};
  }
  const Calculus& calc = Calculus::get(spec.calculus);
  std::ostringstream user;
  user << instruction_body(calc, spec.key_style, false) << "\n\n";
  if (spec.mode == PromptMode::few_shot) {
    if (spec.num_shots < 1)
      throw ContractViolation("few_shot requires num_shots >= 1");
    if (static_cast<int>(shots.size()) < spec.num_shots)
      throw ContractViolation("not enough demonstration instances");
    for (int i = 0; i < spec.num_shots; ++i) {
      user << "Example " << (i + 1) << ":\n"
           << data_row(shots[i]) << '\n'
           << shots[i].gold.code() << "\n\n";
    }
    user << "Examples end here.\n\n";
  }
  user << data_row(instance) << '\n';
  return {std::string(kSystemLine), user.str()};
}

FinetuneExample render_finetune(const ProblemInstance& instance,
                                const PromptSpec& spec, bool include_response) {
  const Calculus& calc = Calculus::get(spec.calculus);
  FinetuneExample ex;
  ex.instruction = instruction_body(calc, spec.key_style, true);
  ex.input = data_row(instance);
  if (include_response) ex.response = std::to_string(instance.gold.code());
  return ex;
}

std::string finetune_to_text(const FinetuneExample& example) {
  std::ostringstream out;
  out << "Below is an instruction that describes a task, paired with an input "
         "that provides\n"
      << "further context. Write a response that appropriately completes the "
         "request.\n\n"
      << "### Instruction:\n"
      << example.instruction << "\n\n"
      << "### Input:\n"
      << example.input << "\n\n"
      << "### Response:\n"
      << example.response << '\n';
  return out.str();
}

namespace {

ProblemInstance make_shot(CalculusId calc_id, int k, int b,
                          const std::vector<std::string>& labels) {
  const Calculus& calc = Calculus::get(calc_id);
  // Same node layout as the generator: b disjoint paths, tail last.
  const NodeId tail = b * (k - 1) + 1;
  std::vector<Edge> edges;
  size_t next_label = 0;
  for (int p = 0; p < b; ++p) {
    NodeId prev = 0;
    for (int step = 1; step < k; ++step) {
      const NodeId node = p * (k - 1) + step;
      edges.push_back(
          {prev, node,
           RelationSet::single(calc.parse_label(labels[next_label++]))});
      prev = node;
    }
    edges.push_back(
        {prev, tail,
         RelationSet::single(calc.parse_label(labels[next_label++]))});
  }
  Qcn network(calc_id, tail + 1, std::move(edges));
  const Atom gold = classify(network, 0, tail);
  ProblemInstance instance{std::move(network), 0, tail, gold, k, b, {}, ""};
  instance.metrics = compute_metrics(instance.network, 0, tail);
  std::ostringstream id;
  id << "shot-" << to_string(calc_id) << "-k" << k << "-b" << b;
  instance.id = id.str();
  return instance;
}

}  // namespace

const std::vector<ProblemInstance>& canonical_shots(CalculusId calculus) {
  static const std::vector<ProblemInstance> rcc8_shots = [] {
    std::vector<ProblemInstance> s;
    s.push_back(make_shot(CalculusId::rcc8, 2, 1, {"EQ", "NTPPI"}));
    s.push_back(make_shot(CalculusId::rcc8, 2, 2, {"EC", "NTPP", "PO", "EC"}));
    s.push_back(make_shot(CalculusId::rcc8, 3, 1, {"NTPP", "EQ", "DC"}));
    s.push_back(make_shot(CalculusId::rcc8, 2, 3,
                          {"EQ", "TPP", "EQ", "TPP", "EQ", "TPP"}));
    s.push_back(make_shot(CalculusId::rcc8, 3, 1, {"EQ", "EQ", "EC"}));
    return s;
  }();
  static const std::vector<ProblemInstance> ia_shots = [] {
    std::vector<ProblemInstance> s;
    s.push_back(make_shot(CalculusId::ia, 2, 1, {"=", "m"}));
    s.push_back(make_shot(CalculusId::ia, 2, 2, {"m", ">", "di", "fi"}));
    s.push_back(make_shot(CalculusId::ia, 3, 1, {"=", "=", "oi"}));
    s.push_back(make_shot(CalculusId::ia, 2, 2, {"s", "d", "=", "d"}));
    s.push_back(make_shot(CalculusId::ia, 3, 1, {"f", "=", "="}));
    return s;
  }();
  return calculus == CalculusId::rcc8 ? rcc8_shots : ia_shots;
}

}  // namespace qsr
