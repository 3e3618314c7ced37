#include <doctest.h>

#include <map>

#include "fixtures.hpp"
#include "maskfill/errors.hpp"
#include "maskfill/fragmenter.hpp"
#include "oracles.hpp"

using namespace maskfill;

namespace {

std::vector<Span> spans_of(const std::vector<Fragment>& frags) {
  std::vector<Span> out;
  for (const auto& f : frags) out.push_back(f.span);
  return out;
}

}  // namespace

TEST_CASE("compute_adjunct_fragments") {
  SUBCASE("the transport sample leaves only the final period") {
    CHECK(spans_of(compute_adjunct_fragments(testing::transport_sample())) == std::vector<Span>{{5, 6}});
  }
  SUBCASE("no events: the whole sentence") {
    AnnotatedSample s{"z", {"a", "b", "c", "d"}, {}};
    CHECK(spans_of(compute_adjunct_fragments(s)) == std::vector<Span>{{0, 4}});
  }
  SUBCASE("full coverage: nothing") {
    AnnotatedSample s{"f", {"a", "b", "c"}, {{"T", {1, 2}, {{"R", {0, 1}}, {"S", {2, 3}}}}}};
    CHECK(compute_adjunct_fragments(s).empty());
  }
  SUBCASE("overlapping spans across events merge") {
    AnnotatedSample s{"m", {"a", "b", "c", "d", "e", "f"},
                      {{"T", {1, 3}, {}}, {"U", {2, 4}, {}}}};
    CHECK(spans_of(compute_adjunct_fragments(s)) == std::vector<Span>{{0, 1}, {4, 6}});
  }
}

TEST_CASE("fragments equal the coverage-complement oracle and are maximal") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const AnnotatedSample s = testing::random_sample(rng);
    const auto got = spans_of(compute_adjunct_fragments(s));
    REQUIRE(got == testing::oracle::uncovered_runs(s));
    for (std::size_t k = 1; k < got.size(); ++k) CHECK(got[k - 1].end < got[k].start);
  }
}

TEST_CASE("select_and_mask") {
  SUBCASE("the transport sample masks the period") {
    for (std::uint64_t seed : {1, 2, 3, 42}) {
      Rng rng(seed);
      const MaskedSample m = select_and_mask(testing::transport_sample(), rng);
      CHECK(m.tokens_with_mask ==
            std::vector<std::string>{"Mike", "left", "this", "town", "yesterday", "[MASK]"});
      CHECK(m.target == std::vector<std::string>{"."});
      CHECK(m.masked_range == Span{5, 6});
      CHECK(m.events == testing::transport_sample().events);
    }
  }

  // Tokens: x0 T x2 A x4 x5; fragments [0,1) [2,3) [4,6).
  const AnnotatedSample three{"t", {"x0", "T", "x2", "A", "x4", "x5"},
                              {{"E", {1, 2}, {{"R", {3, 4}}}}}};

  SUBCASE("same seed, same choice") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng a(seed), b(seed);
      CHECK(select_and_mask(three, a).masked_range == select_and_mask(three, b).masked_range);
    }
  }

  SUBCASE("choice is spread over all eligible fragments") {
    std::map<std::size_t, int> hits;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      Rng rng(seed);
      ++hits[select_and_mask(three, rng).masked_range.start];
    }
    CHECK(hits.size() == 3);
    for (const auto& [start, n] : hits) CHECK(n > 60);
  }

  SUBCASE("length bounds restrict eligibility") {
    Rng rng(5);
    const MaskedSample m = select_and_mask(three, rng, {2, 10, "[MASK]"});
    CHECK(m.masked_range == Span{4, 6});
    CHECK(m.target == std::vector<std::string>{"x4", "x5"});
  }

  SUBCASE("no eligible fragment") {
    Rng rng(1);
    AnnotatedSample full{"f", {"a", "b"}, {{"T", {0, 1}, {{"R", {1, 2}}}}}};
    CHECK_THROWS_AS(select_and_mask(full, rng), NoEligibleFragment);
    CHECK_THROWS_AS(select_and_mask(three, rng, {3, 10, "[MASK]"}), NoEligibleFragment);
  }

  SUBCASE("custom mask token") {
    Rng rng(1);
    const MaskedSample m = select_and_mask(testing::transport_sample(), rng, {1, 10, "<blank>"});
    CHECK(m.tokens_with_mask.back() == "<blank>");
    CHECK(splice_fill(m.tokens_with_mask, m.target, "<blank>") == testing::transport_sample().tokens);
  }
}

TEST_CASE("masked samples reconstruct the original sentence") {
  Rng rng(11);
  int masked = 0;
  for (int i = 0; i < 2000; ++i) {
    const AnnotatedSample s = testing::random_sample(rng);
    try {
      const MaskedSample m = select_and_mask(s, rng);
      CHECK(std::count(m.tokens_with_mask.begin(), m.tokens_with_mask.end(), "[MASK]") == 1);
      CHECK(splice_fill(m.tokens_with_mask, m.target) == s.tokens);
      ++masked;
    } catch (const NoEligibleFragment&) {
    }
  }
  CHECK(masked > 1000);
}

TEST_CASE("partition_sizes puts longer parts first") {
  CHECK(partition_sizes(12, 3) == std::vector<std::size_t>{4, 4, 4});
  CHECK(partition_sizes(10, 4) == std::vector<std::size_t>{3, 3, 2, 2});
  CHECK(partition_sizes(7, 7) == std::vector<std::size_t>(7, 1));
  CHECK(partition_sizes(5, 1) == std::vector<std::size_t>{5});
  CHECK_THROWS(partition_sizes(3, 4));
  CHECK_THROWS(partition_sizes(3, 0));
}

TEST_CASE("infilling training examples") {
  std::vector<std::string> twelve;
  for (int i = 0; i < 12; ++i) twelve.push_back("w" + std::to_string(i));

  SUBCASE("L=12, three parts, middle part held out") {
    const auto ex = make_infill_example(twelve, 3, 1);
    CHECK(ex.target == std::vector<std::string>{"w4", "w5", "w6", "w7"});
    CHECK(ex.masked_text == std::vector<std::string>{"w0", "w1", "w2", "w3", "[MASK]", "w8", "w9",
                                                     "w10", "w11"});
  }

  SUBCASE("single-token sentence is forced") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      const auto ex = generate_infill_training_example(std::vector<std::string>{"only"}, rng);
      CHECK(ex.masked_text == std::vector<std::string>{"[MASK]"});
      CHECK(ex.target == std::vector<std::string>{"only"});
    }
  }

  SUBCASE("part count is drawn from [1, min(10, L)]") {
    // With 12 tokens, a draw of n parts gives targets of length 12/n rounded
    // up or down; 10 parts is the finest split, so targets never drop below 1
    // and single-part draws hold out the whole sentence.
    std::map<std::size_t, int> lengths;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      Rng rng(seed);
      ++lengths[generate_infill_training_example(twelve, rng).target.size()];
    }
    CHECK(lengths.count(12) == 1);  // n = 1
    CHECK(lengths.count(6) == 1);   // n = 2
    CHECK(lengths.begin()->first == 1);
    for (const auto& [len, n] : lengths) {
      bool reachable = false;
      for (std::size_t parts = 1; parts <= 10; ++parts) {
        reachable = reachable || len == 12 / parts || len == (12 + parts - 1) / parts;
      }
      CHECK(reachable);
    }
  }

  SUBCASE("reconstruction for generated sentences") {
    const auto sentences = testing::plain_sentences(500, 3);
    const auto examples = generate_infill_training_examples(sentences, 17);
    REQUIRE(examples.size() == sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      CHECK(splice_fill(examples[i].masked_text, examples[i].target) == sentences[i]);
    }
    CHECK(generate_infill_training_examples(sentences, 17).front().target == examples.front().target);
  }
}

TEST_CASE("splice_fill requires exactly one mask") {
  const std::vector<std::string> none{"a", "b"};
  const std::vector<std::string> two{"[MASK]", "[MASK]"};
  const std::vector<std::string> fill{"x"};
  CHECK_THROWS(splice_fill(none, fill));
  CHECK_THROWS(splice_fill(two, fill));
}
