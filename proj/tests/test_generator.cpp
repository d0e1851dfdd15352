#include <doctest.h>

#include <map>
#include <set>

#include "qsr/serialize.hpp"
#include "test_support.hpp"

using namespace qsr;

TEST_CASE("splitmix64 stream is pinned across platforms") {
  Rng rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next() == 0x06c45d188009454fULL);
}

TEST_CASE("below is uniform-range and rejects zero") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(13) < 13);
  CHECK_THROWS_AS(rng.below(0), ContractViolation);
}

TEST_CASE("child seeds differ across tags") {
  std::set<uint64_t> seeds;
  for (uint64_t a = 0; a < 10; ++a)
    for (uint64_t b = 0; b < 10; ++b) seeds.insert(Rng::child_seed(5, a, b, 0));
  CHECK(seeds.size() == 100);
  CHECK(Rng::child_seed(5, 1, 2, 3) == Rng::child_seed(5, 1, 2, 3));
  CHECK(Rng::child_seed(5, 1, 2, 3) != Rng::child_seed(6, 1, 2, 3));
}

TEST_CASE("instances have the documented topology") {
  Rng rng(11);
  const auto instance =
      generate_instance(Calculus::rcc8(), 4, 3, std::nullopt, rng);
  CHECK(instance.k == 4);
  CHECK(instance.b == 3);
  CHECK(instance.source == 0);
  CHECK(instance.tail == 10);  // b*(k-1)+1
  CHECK(instance.network.num_nodes() == 11);
  CHECK(instance.network.edges().size() == 12);  // b*k

  // b node-disjoint paths: intermediates are partitioned between paths.
  std::set<NodeId> seen;
  for (const Edge& e : instance.network.edges())
    for (const NodeId n : {e.head, e.tail})
      if (n != instance.source && n != instance.tail) seen.insert(n);
  CHECK(seen.size() == static_cast<size_t>(3 * (4 - 1)));

  // The gold answer is forced: closure and path intersection agree.
  const ClosureResult closure = algebraic_closure(instance.network);
  REQUIRE(closure.consistent);
  CHECK(closure.at(0, instance.tail) == RelationSet::single(instance.gold));
  CHECK(classify(instance.network, 0, instance.tail) == instance.gold);
}

TEST_CASE("generation is deterministic in the seed") {
  DatasetConfig config;
  config.calculus = CalculusId::ia;
  config.k_values = {2, 3};
  config.b_values = {1, 2};
  config.per_config_count = 13;
  config.seed = 99;
  const auto first = generate_dataset(config);
  const auto second = generate_dataset(config);
  REQUIRE(first.size() == second.size());
  REQUIRE(first.size() == 4u * 13u);
  for (size_t i = 0; i < first.size(); ++i)
    CHECK(instance_to_json(first[i]) == instance_to_json(second[i]));

  config.seed = 100;
  const auto shifted = generate_dataset(config);
  bool any_difference = false;
  for (size_t i = 0; i < first.size(); ++i)
    if (instance_to_json(first[i]) != instance_to_json(shifted[i]))
      any_difference = true;
  CHECK(any_difference);
}

TEST_CASE("balanced generation hits every label equally") {
  DatasetConfig config;
  config.calculus = CalculusId::rcc8;
  config.k_values = {2};
  config.b_values = {2};
  config.per_config_count = 16;
  config.seed = 3;
  config.balance_labels = true;
  const auto dataset = generate_dataset(config);
  std::map<uint16_t, int> counts;
  for (const auto& instance : dataset) ++counts[instance.gold.code()];
  CHECK(counts.size() == 8);
  for (const auto& [code, count] : counts) CHECK(count == 2);
}

TEST_CASE("unbalanced generation skips the target filter") {
  DatasetConfig config;
  config.calculus = CalculusId::rcc8;
  config.k_values = {3};
  config.b_values = {1};
  config.per_config_count = 24;
  config.seed = 8;
  config.balance_labels = false;
  const auto dataset = generate_dataset(config);
  CHECK(dataset.size() == 24);
  for (const auto& instance : dataset)
    CHECK(classify(instance.network, instance.source, instance.tail) ==
          instance.gold);
}

TEST_CASE("instance ids encode calculus and difficulty") {
  DatasetConfig config;
  config.calculus = CalculusId::rcc8;
  config.k_values = {2};
  config.b_values = {1};
  config.per_config_count = 2;
  config.seed = 0;
  const auto dataset = generate_dataset(config);
  REQUIRE(dataset.size() == 2);
  CHECK(dataset[0].id == "rcc8-k2-b1-0");
  CHECK(dataset[1].id == "rcc8-k2-b1-1");
}

TEST_CASE("an exhausted attempt budget reports the attempts made") {
  Rng rng(1);
  try {
    generate_instance(Calculus::rcc8(), 2, 1,
                      Calculus::rcc8().find("EQ"), rng, 0);
    FAIL("expected BudgetExhausted");
  } catch (const BudgetExhausted& e) {
    CHECK(e.attempts() == 0);
    CHECK(std::string(e.what()).find("k=2") != std::string::npos);
    CHECK(std::string(e.what()).find("EQ") != std::string::npos);
  }
}

TEST_CASE("invalid shapes are rejected") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_instance(Calculus::rcc8(), 1, 1, std::nullopt, rng),
                  ContractViolation);
  CHECK_THROWS_AS(generate_instance(Calculus::rcc8(), 2, 0, std::nullopt, rng),
                  ContractViolation);
  DatasetConfig config;
  config.per_config_count = 0;
  CHECK_THROWS_AS(generate_dataset(config), ContractViolation);
}

TEST_CASE("difficulty metrics") {
  // Trivial path: one EQ edge and one non-identity edge.
  const auto trivial = qsr_test::make_instance(CalculusId::rcc8, 2, 1,
                                               {"EQ", "NTPPI"});
  CHECK(trivial.metrics.has_trivial_path);
  CHECK(trivial.metrics.intersections == 0);
  CHECK(trivial.metrics.num_st_paths == 1);
  CHECK(trivial.metrics.mean_union_cardinality == doctest::Approx(1.0));
  const auto prediction =
      trivial_path_prediction(trivial.network, trivial.source, trivial.tail);
  REQUIRE(prediction.has_value());
  CHECK(*prediction == trivial.gold);

  // All-identity path predicts the identity.
  const auto all_eq = qsr_test::make_instance(CalculusId::rcc8, 2, 1,
                                              {"EQ", "EQ"});
  const auto eq_pred =
      trivial_path_prediction(all_eq.network, all_eq.source, all_eq.tail);
  REQUIRE(eq_pred.has_value());
  CHECK(eq_pred->name() == "EQ");

  // Two non-identity labels on every path: no trivial prediction.
  const auto hard = qsr_test::make_instance(CalculusId::rcc8, 2, 1,
                                            {"NTPP", "DC"});
  CHECK(!hard.metrics.has_trivial_path);
  CHECK(!trivial_path_prediction(hard.network, hard.source, hard.tail)
             .has_value());
}

TEST_CASE("trivial path prediction matches gold on generated instances") {
  DatasetConfig config;
  config.calculus = CalculusId::rcc8;
  config.k_values = {2, 3};
  config.b_values = {1, 2};
  config.per_config_count = 50;
  config.seed = 77;
  config.balance_labels = false;
  for (const auto& instance : generate_dataset(config)) {
    const auto prediction = trivial_path_prediction(
        instance.network, instance.source, instance.tail);
    if (prediction) CHECK(*prediction == instance.gold);
  }
}
