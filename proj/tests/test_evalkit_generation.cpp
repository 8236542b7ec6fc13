#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "pavekit/evalkit/generation.hpp"

using namespace pavekit;
using namespace pavekit::evalkit;

namespace {

TokenSeq toks(const std::string& text) { return tokenize(text); }

}  // namespace

TEST_CASE("bleu4 anchors") {
  const TokenSeq ref = toks("the pavement shows a long transverse crack near the edge");
  CHECK(bleu4(ref, {ref}) == Catch::Approx(1.0));

  // shorter candidate with all n-grams matching is penalized by BP only:
  // c = 4, r = 10 -> BP = exp(1 - 10/4)
  const TokenSeq prefix(ref.begin(), ref.begin() + 4);
  const double expected_bp = std::exp(1.0 - 10.0 / 4.0);
  CHECK(bleu4(prefix, {ref}) == Catch::Approx(expected_bp).epsilon(1e-9));
  CHECK(bleu4(prefix, {ref}) < 1.0);

  CHECK(bleu4(toks("zebra quartz violet"), {ref}) == 0.0);
  CHECK_THROWS_AS(bleu4({}, {ref}), Error);
}

TEST_CASE("bleu4 smoothing keeps short identical texts at 1") {
  const TokenSeq three = toks("alligator crack visible");
  CHECK(bleu4(three, {three}) == Catch::Approx(1.0));
}

TEST_CASE("bleu4 clipping is stable under a duplicated reference") {
  const TokenSeq ref = toks("medium severity pothole in the wheel path");
  const TokenSeq cand = toks("pothole in the wheel path");
  const double single = bleu4(cand, {ref});
  const double doubled = bleu4(cand, {ref, ref});
  CHECK(single == Catch::Approx(doubled));
  CHECK(bleu4(cand, {ref, cand}) >= single);
}

TEST_CASE("rouge_l anchors") {
  const TokenSeq same = toks("longitudinal crack along the centerline");
  CHECK(rouge_l(same, same) == Catch::Approx(1.0));

  // X = candidate "a b c", Y = reference "a c": LCS 2, R = 1, P = 2/3
  const double expected = (1 + 1.2 * 1.2) * 1.0 * (2.0 / 3.0) / (1.0 + 1.2 * 1.2 * (2.0 / 3.0));
  CHECK(rouge_l({"a", "b", "c"}, {"a", "c"}, 1.2) == Catch::Approx(expected));
  CHECK(rouge_l({"a", "b", "c"}, {"a", "c"}, 1.2) == Catch::Approx(0.8299).margin(1e-4));

  CHECK(rouge_l(toks("x y z"), toks("p q r")) == 0.0);
}

TEST_CASE("cider anchors on a unique-n-gram toy corpus") {
  // each image's caption shares no n-gram with the others, so IDF is maximal
  const std::vector<TokenSeq> candidates = {
      toks("alligator cracking near the northern junction"),
      toks("smooth asphalt without visible defects today"),
  };
  const std::vector<std::vector<TokenSeq>> refs = {{candidates[0]}, {candidates[1]}};
  const auto scores = cider(candidates, refs);
  REQUIRE(scores.per_image.size() == 2);
  CHECK(scores.per_image[0] == Catch::Approx(1.0));
  CHECK(scores.per_image[1] == Catch::Approx(1.0));
  CHECK(scores.corpus == Catch::Approx(1.0));
}

TEST_CASE("cider gives zero for disjoint candidates and rejects tiny corpora") {
  const std::vector<TokenSeq> candidates = {toks("umber violet quartz"), toks("nickel cobalt zinc")};
  const std::vector<std::vector<TokenSeq>> refs = {{toks("pothole at the corner")},
                                                   {toks("crack across the lane")}};
  const auto scores = cider(candidates, refs);
  CHECK(scores.per_image[0] == 0.0);
  CHECK(scores.per_image[1] == 0.0);

  CHECK_THROWS_AS(cider({toks("a b")}, {{toks("a b")}}), Error);
}

TEST_CASE("cider matches the naive TF-IDF oracle on a constructed corpus") {
  const std::vector<TokenSeq> candidates = {
      toks("transverse crack across the lane with spalled edges"),
      toks("pothole cluster near the shoulder joint line"),
      toks("transverse crack near the shoulder"),
  };
  const std::vector<std::vector<TokenSeq>> refs = {
      {toks("transverse crack across the lane"), toks("wide transverse crack with spalling")},
      {toks("pothole cluster beside the shoulder")},
      {toks("transverse crack near the joint"), toks("shoulder crack near the joint line")},
  };
  const auto scores = cider(candidates, refs);
  for (std::size_t img = 0; img < candidates.size(); ++img) {
    const double expected = oracles::consensus_score(candidates, refs, img);
    CHECK(scores.per_image[img] == Catch::Approx(expected).epsilon(1e-9));
  }
}
