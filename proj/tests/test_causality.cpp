#include <gtest/gtest.h>

#include <random>

#include "causalkh/causality.hpp"

using namespace causalkh;

namespace {

AnnularDiagram closure(int strands, std::vector<int> letters) {
  return braid_closure(BraidWord(strands, std::move(letters)));
}

}  // namespace

TEST(ValidateSkyPair, Examples) {
  EXPECT_TRUE(validate_sky_pair(model_u2()).ok());
  EXPECT_TRUE(validate_sky_pair(closure(2, {-1, -1})).ok());

  SkyPairCheck knot = validate_sky_pair(closure(2, {1}));
  ASSERT_FALSE(knot.ok());
  EXPECT_NE(knot.message().find("1 component, expected 2"), std::string::npos);
  EXPECT_NE(knot.message().find("winding 2"), std::string::npos);

  SkyPairCheck three = validate_sky_pair(closure(3, {}));
  ASSERT_FALSE(three.ok());
  EXPECT_NE(three.message().find("3 components, expected 2"), std::string::npos);

  // two components, one winding twice
  EXPECT_FALSE(validate_sky_pair(closure(3, {1})).ok());
}

TEST(DecideAkh, Examples) {
  Verdict u2 = decide_akh(model_u2());
  EXPECT_FALSE(u2.related);
  EXPECT_EQ(u2.model, "U2");
  EXPECT_EQ(u2.route, Route::Akh);
  EXPECT_FALSE(decide_akh(closure(2, {1, -1})).related);
  EXPECT_TRUE(decide_akh(closure(2, {-1, -1})).related);
  EXPECT_TRUE(decide_akh(closure(2, {1, 1})).related);
  EXPECT_TRUE(decide_akh(closure(2, {1, 1, 1, 1})).related);
}

TEST(DecideKh, Examples) {
  Verdict u2 = decide_kh(model_u2());
  EXPECT_FALSE(u2.related);
  EXPECT_EQ(u2.model, "P3");
  EXPECT_TRUE(decide_kh(closure(2, {-1, -1})).related);
  EXPECT_FALSE(decide_kh(closure(2, {1, -1})).related);
  EXPECT_FALSE(decide_kh(closure(2, {-1, 1, 1, -1})).related);
}

TEST(Decide, HypothesisViolations) {
  try {
    decide_akh(closure(2, {1}));
    FAIL() << "expected a hypothesis error";
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("1 component, expected 2"), std::string::npos);
  }
  EXPECT_THROW(decide_kh(closure(3, {})), HypothesisError);
  EXPECT_THROW(decide(closure(3, {1, 2}), Route::Akh), HypothesisError);
}

TEST(Decide, RoutesAgreeOnTwoStrandWords) {
  // every 2-component closed 2-braid of even length up to 6
  for (int length = 0; length <= 6; length += 2) {
    for (int mask = 0; mask < (1 << length); ++mask) {
      std::vector<int> letters;
      for (int k = 0; k < length; ++k) letters.push_back((mask >> k) & 1 ? 1 : -1);
      AnnularDiagram d = closure(2, letters);
      bool unrelated_expected = std::count(letters.begin(), letters.end(), 1) * 2 == length;
      Verdict a = decide(d, Route::Akh), k = decide(d, Route::Kh);
      EXPECT_EQ(a.related, k.related) << d.presentation().to_string();
      // the closure is unlinked exactly when the exponent sum vanishes
      EXPECT_EQ(a.related, !unrelated_expected) << d.presentation().to_string();
    }
  }
}

TEST(Verdict, Json) {
  nlohmann::json j = to_json(decide_akh(model_u2()));
  EXPECT_EQ(j["related"], false);
  EXPECT_EQ(j["route"], "akh");
  EXPECT_EQ(j["model"], "U2");
  EXPECT_EQ(j["computed"], j["model_dims"]);
  EXPECT_FALSE(j.contains("theta"));
}
