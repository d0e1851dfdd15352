#include <doctest.h>

#include <string>

#include "qsr/prompt.hpp"
#include "test_support.hpp"

using namespace qsr;
using qsr_test::make_instance;
using qsr_test::read_file;
using qsr_test::test_dir;

namespace {

const ProblemInstance& rcc8_figure_instance() {
  static const ProblemInstance instance = make_instance(
      CalculusId::rcc8, 2, 3, {"EQ", "NTPPI", "EQ", "NTPPI", "TPPI", "NTPPI"});
  return instance;
}

const ProblemInstance& ia_figure_instance() {
  static const ProblemInstance instance =
      make_instance(CalculusId::ia, 2, 3, {"m", ">", "di", "fi", "di", "oi"});
  return instance;
}

}  // namespace

TEST_CASE("data rows use the published single-line encoding") {
  CHECK(data_row(rcc8_figure_instance()) ==
        "[(0, 1), (1, 4), (0, 2), (2, 4), (0, 3), (3, 4)], "
        "['EQ', 'NTPPI', 'EQ', 'NTPPI', 'TPPI', 'NTPPI'], (0, 4)");
  CHECK(data_row(ia_figure_instance()) ==
        "[(0, 1), (1, 4), (0, 2), (2, 4), (0, 3), (3, 4)], "
        "['m', '>', 'di', 'fi', 'di', 'oi'], (0, 4)");
}

TEST_CASE("zero-shot prompt carries the published scaffolding") {
  PromptSpec spec;
  spec.mode = PromptMode::zero_shot;
  spec.calculus = CalculusId::rcc8;
  const RenderedPrompt prompt =
      render_prompt(rcc8_figure_instance(), spec, {});
  CHECK(prompt.system ==
        "You are a helpful assistant. Just answer the question as a single "
        "integer.");
  CHECK(prompt.user.find("You are a qualitative spatial and temporal "
                         "reasoning expert specializing in\nRCC-8") == 0);
  CHECK(prompt.user.find("The following are the base elements of RCC-8:") !=
        std::string::npos);
  CHECK(prompt.user.find("The following is the composition table of RCC-8 as "
                         "a JSON dictionary:\n{(1, 1): [], (1, 2): "
                         "[1, 2, 4, 8, 16], ") != std::string::npos);
  CHECK(prompt.user.find("(128, 64): [64], (128, 128): [128]}") !=
        std::string::npos);
  CHECK(prompt.user.find(
            "Now the question is: Given a consistent graph with edges "
            "comprising the 8\nbase relations") != std::string::npos);
  CHECK(prompt.user.find("`graph_edge_index`, `edge_labels`, `query_edge`") !=
        std::string::npos);
  CHECK(prompt.user.find("Example") == std::string::npos);
  const std::string row = data_row(rcc8_figure_instance());
  CHECK(prompt.user.substr(prompt.user.size() - row.size() - 1) == row + "\n");
}

TEST_CASE("IA inference prompts adapt the counts and table name") {
  PromptSpec spec;
  spec.mode = PromptMode::zero_shot;
  spec.calculus = CalculusId::ia;
  const RenderedPrompt prompt = render_prompt(ia_figure_instance(), spec, {});
  CHECK(prompt.user.find("specializing in\nInterval Algebra") !=
        std::string::npos);
  CHECK(prompt.user.find("base elements of Interval Algebra:") !=
        std::string::npos);
  CHECK(prompt.user.find("composition table of Interval Algebra") !=
        std::string::npos);
  CHECK(prompt.user.find("comprising the 13\nbase relations") !=
        std::string::npos);
  CHECK(prompt.user.find("one of the 13 base relations as a power of 2") !=
        std::string::npos);
  CHECK(prompt.user.find("'si': 1024") != std::string::npos);
}

TEST_CASE("few-shot prompts append the published demonstrations") {
  PromptSpec spec;
  spec.mode = PromptMode::few_shot;
  spec.calculus = CalculusId::rcc8;
  spec.num_shots = 5;
  const auto& shots = canonical_shots(CalculusId::rcc8);
  REQUIRE(shots.size() == 5);
  const RenderedPrompt prompt =
      render_prompt(rcc8_figure_instance(), spec, shots);
  // Demonstrations 1 and 5 are the published ones.
  CHECK(prompt.user.find("Example 1:\n"
                         "[(0, 1), (1, 2)], ['EQ', 'NTPPI'], (0, 2)\n"
                         "64\n") != std::string::npos);
  CHECK(prompt.user.find("Example 5:\n"
                         "[(0, 1), (1, 2), (2, 3)], ['EQ', 'EQ', 'EC'], "
                         "(0, 3)\n"
                         "2\n") != std::string::npos);
  CHECK(prompt.user.find("Examples end here.\n") != std::string::npos);
  // Demonstration golds come from the solver, not hand-entered numbers.
  for (const auto& shot : shots)
    CHECK(classify(shot.network, shot.source, shot.tail) == shot.gold);

  spec.num_shots = 6;
  CHECK_THROWS_AS(render_prompt(rcc8_figure_instance(), spec, shots),
                  ContractViolation);
  spec.num_shots = 0;
  CHECK_THROWS_AS(render_prompt(rcc8_figure_instance(), spec, shots),
                  ContractViolation);
}

TEST_CASE("IA demonstrations are solver-consistent") {
  const auto& shots = canonical_shots(CalculusId::ia);
  REQUIRE(shots.size() == 5);
  for (const auto& shot : shots)
    CHECK(classify(shot.network, shot.source, shot.tail) == shot.gold);
}

TEST_CASE("fine-tune layout reproduces the published template quirks") {
  PromptSpec spec;
  spec.mode = PromptMode::finetune_format;
  spec.calculus = CalculusId::ia;
  spec.key_style = KeyStyle::name_tuples;
  const FinetuneExample ex = render_finetune(ia_figure_instance(), spec, true);
  CHECK(ex.instruction.find("specializing in\nInterval Algebra.") !=
        std::string::npos);
  CHECK(ex.instruction.find("base elements of Interval Algebra:") !=
        std::string::npos);
  // The published template says "RCC-8" and "8 base relations" even for
  // the interval dataset; reproduce that verbatim.
  CHECK(ex.instruction.find(
            "The following is the composition table of RCC-8 as a JSON "
            "dictionary:\n{(eq, eq): [eq], (eq, lt): [lt], ") !=
        std::string::npos);
  CHECK(ex.instruction.find("comprising the 8\nbase relations") !=
        std::string::npos);
  CHECK(ex.instruction.find("(fi, gt): [gt, di, oi, mi, si]") !=
        std::string::npos);
  CHECK(ex.input == data_row(ia_figure_instance()));
  CHECK(ex.response == "16");

  const std::string text = finetune_to_text(ex);
  CHECK(text.find("Below is an instruction that describes a task, paired "
                  "with an input that provides\nfurther context. Write a "
                  "response that appropriately completes the request.\n\n"
                  "### Instruction:\n") == 0);
  CHECK(text.find("\n\n### Input:\n") != std::string::npos);
  CHECK(text.find("\n\n### Response:\n16\n") != std::string::npos);

  // Without the response the answer slot stays blank.
  const FinetuneExample blank =
      render_finetune(ia_figure_instance(), spec, false);
  CHECK(blank.response.empty());
  const RenderedPrompt as_prompt =
      render_prompt(ia_figure_instance(), spec, {});
  CHECK(as_prompt.system.empty());
  CHECK(as_prompt.user.find("### Response:\n") != std::string::npos);
}

TEST_CASE("rendered prompts match the golden transcriptions byte-for-byte") {
  struct Golden {
    const char* file;
    CalculusId calculus;
    PromptMode mode;
    KeyStyle style;
  };
  const Golden goldens[] = {
      {"rcc8_zero_shot.txt", CalculusId::rcc8, PromptMode::zero_shot,
       KeyStyle::integer_tuples},
      {"rcc8_few_shot.txt", CalculusId::rcc8, PromptMode::few_shot,
       KeyStyle::integer_tuples},
      {"ia_zero_shot.txt", CalculusId::ia, PromptMode::zero_shot,
       KeyStyle::integer_tuples},
  };
  for (const Golden& golden : goldens) {
    PromptSpec spec;
    spec.calculus = golden.calculus;
    spec.mode = golden.mode;
    spec.key_style = golden.style;
    const ProblemInstance& instance = golden.calculus == CalculusId::rcc8
                                          ? rcc8_figure_instance()
                                          : ia_figure_instance();
    const RenderedPrompt prompt =
        render_prompt(instance, spec, canonical_shots(golden.calculus));
    INFO("golden file ", golden.file);
    CHECK(prompt.user == read_file(test_dir() / "golden" / golden.file));
  }

  PromptSpec rcc8_ft;
  rcc8_ft.calculus = CalculusId::rcc8;
  rcc8_ft.mode = PromptMode::finetune_format;
  CHECK(finetune_to_text(render_finetune(rcc8_figure_instance(), rcc8_ft, true)) ==
        read_file(test_dir() / "golden" / "rcc8_finetune.txt"));

  PromptSpec ia_ft;
  ia_ft.calculus = CalculusId::ia;
  ia_ft.mode = PromptMode::finetune_format;
  ia_ft.key_style = KeyStyle::name_tuples;
  CHECK(finetune_to_text(render_finetune(ia_figure_instance(), ia_ft, true)) ==
        read_file(test_dir() / "golden" / "ia_finetune.txt"));
}
