#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "pdlkit/enumerate.hpp"
#include "pdlkit/model_io.hpp"

using namespace pdlkit;

TEST(ModelIo, LoadsDocumentedShape) {
  KripkeModel m = load_model_string(R"({"states": 3, "relations": {"a1": [[0, 1], [1, 1]]},
                                         "valuation": {"p1": [0, 2]}, "star": [[0, 0, [1]]]})");
  EXPECT_EQ(m.num_states(), 3u);
  EXPECT_TRUE(m.relation(1).contains(0, 1));
  EXPECT_TRUE(m.relation(1).contains(1, 1));
  EXPECT_EQ(m.relation(1).num_pairs(), 2u);
  EXPECT_TRUE(m.valuation(1).test(0));
  EXPECT_TRUE(m.valuation(1).test(2));
  ASSERT_TRUE(m.has_star());
  EXPECT_TRUE(m.composition(0, 0).test(1));
  EXPECT_TRUE(m.composition(1, 2).none());
}

TEST(ModelIo, CanonicalText) {
  KripkeModel m(2);
  m.add_edge(2, 1, 0);
  m.add_edge(1, 0, 1);
  m.set_true(1, 1);
  const std::string want =
      "{\n"
      "  \"states\": 2,\n"
      "  \"relations\": {\n"
      "    \"a1\": [[0, 1]],\n"
      "    \"a2\": [[1, 0]]\n"
      "  },\n"
      "  \"valuation\": {\n"
      "    \"p1\": [1]\n"
      "  }\n"
      "}\n";
  EXPECT_EQ(save_model_string(m), want);
  EXPECT_EQ(save_model_string(KripkeModel(1)), "{\n  \"states\": 1,\n  \"relations\": {},\n  \"valuation\": {}\n}\n");
}

TEST(ModelIo, RoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    KripkeModel m = random_model(1 + rng() % 6, {1, 2, 5}, {1, 3}, 0.3, rng(), i % 2 == 0);
    const std::string text = save_model_string(m);
    KripkeModel back = load_model_string(text);
    EXPECT_TRUE(back == m);
    EXPECT_EQ(save_model_string(back), text);
  }
}

TEST(ModelIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "pdlkit_model_io_test.json";
  KripkeModel m = random_model(4, {1}, {1}, 0.5, 9, true);
  save_model(m, path.string());
  EXPECT_TRUE(load_model(path.string()) == m);
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path.string()), ModelError);
}

TEST(ModelIo, RejectsMalformedInput) {
  for (const char* text : {
           "",
           "[]",
           "{}",
           R"({"states": 0})",
           R"({"states": -2})",
           R"({"states": 2, "relations": {"b1": []}})",
           R"({"states": 2, "relations": {"a0": []}})",
           R"({"states": 2, "relations": {"a1": [[0, 2]]}})",
           R"({"states": 2, "relations": {"a1": [[0]]}})",
           R"({"states": 2, "relations": {"a1": [[0, -1]]}})",
           R"({"states": 2, "valuation": {"p1": [5]}})",
           R"({"states": 2, "valuation": {"x1": [0]}})",
           R"({"states": 2, "star": [[0, 0]]})",
           R"({"states": 2, "star": [[0, 0, [2]]]})",
           R"({"states": 2, "extra": 1})",
       }) {
    EXPECT_THROW(load_model_string(text), ModelError) << text;
  }
}
