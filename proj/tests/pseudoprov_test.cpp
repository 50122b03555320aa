// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#include "provtrail/pseudoprov.hpp"

#include <doctest.h>

#include <string>
#include <vector>

#include "provtrail/error.hpp"
#include "provtrail/rng.hpp"

using namespace provtrail;

namespace {

Test from_actions(const std::string& name, const std::vector<std::string>& actions) {
  Test t;
  t.name = name;
  for (const std::string& a : actions) {
    t.components.push_back({a, {}});
  }
  return t;
}

Corpus toy_corpus() {
  Corpus c;
  c.tests.emplace("x.test", from_actions("x.test", {"p", "q", "r"}));
  c.tests.emplace("y.test", from_actions("y.test", {"q", "r", "s"}));
  c.seed_names = {"x.test", "y.test"};
  return c;
}

Corpus avl_corpus() {
  return load_corpus(std::string(PROVTRAIL_FIXTURES_DIR) + "/avl-seeds",
                     std::string(PROVTRAIL_FIXTURES_DIR) + "/avl-example");
}

Origin origin_at(const Test& t, size_t i) {
  return std::get<SingleAnnotation>(t.components.at(i).annotation).origin;
}

}  // namespace

TEST_CASE("compatible_positions lists all matching source positions") {
  const Corpus c = toy_corpus();
  const Component q{"q", {}};
  CHECK(compatible_positions(q, c, MatchMode::exact) ==
        std::set<Origin>{{"x.test", 1}, {"y.test", 0}});
  const Component nowhere{"z", {}};
  CHECK(compatible_positions(nowhere, c, MatchMode::exact).empty());

  // A pre-annotated component is pinned to its recorded origin.
  const Component pinned{"q", SingleAnnotation{{"y.test", 0}, false}};
  CHECK(compatible_positions(pinned, c, MatchMode::exact) == std::set<Origin>{{"y.test", 0}});
}

TEST_CASE("compatible_positions in abstracted mode matches on operation type") {
  Corpus c;
  c.tests.emplace("s.test", from_actions("s.test", {"int0 = 5", "avl0.display()"}));
  c.seed_names = {"s.test"};
  const Component other_constant{"int1 = 9", {}};
  CHECK(compatible_positions(other_constant, c, MatchMode::exact).empty());
  CHECK(compatible_positions(other_constant, c, MatchMode::abstracted) ==
        std::set<Origin>{{"s.test", 0}});
}

TEST_CASE("compatible_positions ignores generated tests unless asked") {
  Corpus c = toy_corpus();
  c.tests.emplace("gen000000.test", from_actions("gen000000.test", {"z"}));
  const Component z{"z", {}};
  CHECK(compatible_positions(z, c, MatchMode::exact).empty());
  CHECK(compatible_positions(z, c, MatchMode::exact, /*include_generated=*/true) ==
        std::set<Origin>{{"gen000000.test", 0}});
}

TEST_CASE("greedy alignment keeps maximal runs and picks the least survivor") {
  const Corpus c = toy_corpus();

  // [q, r] extends in both sources; the tie goes to x.test.
  Test t1 = greedy_pseudo_provenance(from_actions("t.test", {"z", "q", "r"}), c,
                                     MatchMode::exact);
  CHECK(std::holds_alternative<std::monostate>(t1.components[0].annotation));
  CHECK(origin_at(t1, 1) == Origin{"x.test", 1});
  CHECK(origin_at(t1, 2) == Origin{"x.test", 2});

  // [q, r, s] only survives in y.test, which wins over the x.test prefix.
  Test t2 = greedy_pseudo_provenance(from_actions("t.test", {"q", "r", "s"}), c,
                                     MatchMode::exact);
  CHECK(origin_at(t2, 0) == Origin{"y.test", 0});
  CHECK(origin_at(t2, 1) == Origin{"y.test", 1});
  CHECK(origin_at(t2, 2) == Origin{"y.test", 2});
  CHECK(runs_of(t2).size() == 1);
}

TEST_CASE("greedy alignment never aligns a test against itself") {
  const Corpus c = toy_corpus();
  // The target shares its name with a seed; only the other seed is usable.
  Test t = greedy_pseudo_provenance(from_actions("x.test", {"q", "r"}), c, MatchMode::exact);
  CHECK(origin_at(t, 0) == Origin{"y.test", 0});
  CHECK(origin_at(t, 1) == Origin{"y.test", 1});
}

TEST_CASE("pre-annotated components are hard boundaries") {
  const Corpus c = toy_corpus();
  Test t = from_actions("t.test", {"q", "r"});
  t.components[0].annotation = SingleAnnotation{{"y.test", 0}, false};
  const Test out = greedy_pseudo_provenance(t, c, MatchMode::exact);
  // The pin is kept verbatim; the rest is aligned independently of it, so r
  // restarts and takes the lexicographically least match.
  CHECK(origin_at(out, 0) == Origin{"y.test", 0});
  CHECK(origin_at(out, 1) == Origin{"x.test", 2});

  Test weighted = from_actions("t.test", {"q", "r"});
  weighted.components[1].annotation = WeightedAnnotation{{{"x.test", 1.0}}};
  const Test out2 = greedy_pseudo_provenance(weighted, c, MatchMode::exact);
  CHECK(origin_at(out2, 0) == Origin{"x.test", 1});
  CHECK(std::get<WeightedAnnotation>(out2.components[1].annotation).entries.size() == 1);
}

TEST_CASE("abstracted reconstruction carries the abstract-match marker") {
  Corpus c;
  c.tests.emplace("s.test", from_actions("s.test", {"int0 = 5"}));
  c.seed_names = {"s.test"};
  const Test exact =
      greedy_pseudo_provenance(from_actions("t.test", {"int1 = 9"}), c, MatchMode::exact);
  CHECK(std::holds_alternative<std::monostate>(exact.components[0].annotation));

  const Test abstracted =
      greedy_pseudo_provenance(from_actions("t.test", {"int1 = 9"}), c, MatchMode::abstracted);
  const auto& single = std::get<SingleAnnotation>(abstracted.components[0].annotation);
  CHECK(single.origin == Origin{"s.test", 0});
  CHECK(single.abstract_match);
  CHECK(serialize_annotation(abstracted.components[0].annotation) == "~s.test:0");
}

TEST_CASE("reconstructing the worked example differs from truth in one step") {
  const Corpus corpus = avl_corpus();
  const Test& truth = corpus.at("example.test");
  Test stripped = truth;
  for (Component& comp : stripped.components) {
    comp.annotation = std::monostate{};
  }

  const Test rebuilt = greedy_pseudo_provenance(stripped, corpus, MatchMode::exact);
  REQUIRE(rebuilt.size() == 13);
  for (size_t i = 0; i < rebuilt.size(); ++i) {
    CAPTURE(i);
    if (i == 3) {
      continue;
    }
    CHECK(origin_at(rebuilt, i) == origin_at(truth, i));
  }
  // The myopic tie at the tree constructor: the reconstruction settles on
  // quick0.test:14 where the recorded origin was quick5.test:3.
  CHECK(origin_at(truth, 3) == Origin{"quick5.test", 3});
  CHECK(origin_at(rebuilt, 3) == Origin{"quick0.test", 14});

  CHECK(runs_of(rebuilt).size() == 6);
  CHECK(oracle_min_segmentation(stripped, corpus, MatchMode::exact) == 6);
}

TEST_CASE("runs_of groups consecutive positions of one source") {
  Test t = from_actions("t.test", {"a", "b", "c", "d", "e"});
  t.components[0].annotation = SingleAnnotation{{"s.test", 4}, false};
  t.components[1].annotation = SingleAnnotation{{"s.test", 5}, false};
  t.components[2].annotation = SingleAnnotation{{"s.test", 7}, false};  // gap in positions
  // components[3] unannotated
  t.components[4].annotation = SingleAnnotation{{"u.test", 0}, false};
  const auto runs = runs_of(t);
  REQUIRE(runs.size() == 3);
  CHECK(runs[0] == ProvenanceRun{0, 1, "s.test", 4});
  CHECK(runs[1] == ProvenanceRun{2, 2, "s.test", 7});
  CHECK(runs[2] == ProvenanceRun{4, 4, "u.test", 0});

  Test w = from_actions("t.test", {"a"});
  w.components[0].annotation = WeightedAnnotation{{{"s.test", 1.0}}};
  CHECK_THROWS_WITH_AS(runs_of(w), "runs undefined for weighted provenance", ProvenanceError);
}

TEST_CASE("the oracle matches hand-computed minima") {
  const Corpus c = toy_corpus();
  CHECK(oracle_min_segmentation(from_actions("t.test", {"q", "r"}), c, MatchMode::exact) == 1);
  CHECK(oracle_min_segmentation(from_actions("t.test", {"r", "q"}), c, MatchMode::exact) == 2);
  CHECK(oracle_min_segmentation(from_actions("t.test", {"z", "z"}), c, MatchMode::exact) == 0);
  CHECK(oracle_min_segmentation(from_actions("t.test", {"p", "q", "r", "s"}), c,
                                MatchMode::exact) == 2);
  CHECK(oracle_min_segmentation(from_actions("t.test", {}), c, MatchMode::exact) == 0);

  Test too_long = from_actions("t.test", std::vector<std::string>(21, "q"));
  CHECK_THROWS_AS(oracle_min_segmentation(too_long, c, MatchMode::exact), Error);
}

TEST_CASE("greedy equals the oracle on stripped instances and dominates with pins") {
  // Random walks over a toy corpus: slices of the sources concatenated with
  // occasional noise, never longer than the oracle's limit.
  Corpus c;
  c.tests.emplace("alpha.test",
                  from_actions("alpha.test", {"a", "b", "c", "d", "a", "b", "e"}));
  c.tests.emplace("beta.test", from_actions("beta.test", {"c", "d", "e", "a", "c"}));
  c.tests.emplace("gamma.test", from_actions("gamma.test", {"b", "b", "a", "e", "d"}));
  c.seed_names = {"alpha.test", "beta.test", "gamma.test"};
  const std::vector<std::string> letters = {"a", "b", "c", "d", "e", "zz"};

  Rng rng(424242);
  for (size_t instance = 0; instance < 600; ++instance) {
    CAPTURE(instance);
    Test t;
    t.name = "probe.test";
    const size_t len = 1 + rng.uniform_index(20);
    while (t.components.size() < len) {
      if (rng.uniform_index(3) == 0) {
        t.components.push_back({letters[rng.uniform_index(letters.size())], {}});
        continue;
      }
      // Copy a random slice of a random source.
      auto it = c.tests.begin();
      std::advance(it, rng.uniform_index(c.tests.size()));
      const Test& src = it->second;
      const size_t start = rng.uniform_index(src.size());
      const size_t span = 1 + rng.uniform_index(src.size() - start);
      for (size_t j = start; j < start + span && t.components.size() < len; ++j) {
        t.components.push_back({src.components[j].action, {}});
      }
    }

    const Test rebuilt = greedy_pseudo_provenance(t, c, MatchMode::exact);
    const size_t oracle = oracle_min_segmentation(t, c, MatchMode::exact);
    size_t matchable = 0;
    size_t annotated = 0;
    for (size_t i = 0; i < rebuilt.size(); ++i) {
      const Component& comp = rebuilt.components[i];
      matchable += comp.action != "zz";
      if (const auto* single = std::get_if<SingleAnnotation>(&comp.annotation)) {
        ++annotated;
        // Exact-mode annotations must point at identical action text.
        CHECK(c.component_at(single->origin).action == comp.action);
      }
    }
    // Every matchable component is annotated, nothing else is.
    CHECK(annotated == matchable);
    // Each emitted run is a verbatim contiguous slice of its source.
    for (const ProvenanceRun& run : runs_of(rebuilt)) {
      for (size_t i = run.start; i <= run.end; ++i) {
        CHECK(c.component_at({run.source, run.source_start + (i - run.start)}).action ==
              rebuilt.components[i].action);
      }
    }
    // Maximal-munch segmentation is provably minimal on unpinned input.
    CHECK(runs_of(rebuilt).size() == oracle);

    // With a random pin added, greedy stays valid and never beats the oracle.
    Test pinned = t;
    const size_t pin_at = rng.uniform_index(pinned.size());
    if (pinned.components[pin_at].action != "zz") {
      const auto options = compatible_positions(pinned.components[pin_at], c, MatchMode::exact);
      if (!options.empty()) {
        pinned.components[pin_at].annotation = SingleAnnotation{*options.begin(), false};
        const Test rebuilt_pinned = greedy_pseudo_provenance(pinned, c, MatchMode::exact);
        CHECK(runs_of(rebuilt_pinned).size() >=
              oracle_min_segmentation(pinned, c, MatchMode::exact));
      }
    }
  }
}
