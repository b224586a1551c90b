#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "udgec/classify.hpp"

using namespace udgec;
using test_util::bfs_depths;
using test_util::make_sentence;
using test_util::random_tree;

namespace {

Edit make_edit(int start, int end, std::vector<std::string> replacement) {
  Edit e;
  e.start = start;
  e.end = end;
  e.replacement = std::move(replacement);
  return e;
}

// "you 'll study it easier" with "easier" replaced by "more easily".
ParsedSentence fig_source() {
  ParsedSentence s = make_sentence(
      {{3, "PRON"}, {3, "AUX"}, {0, "VERB"}, {3, "PRON"}, {3, "ADJ"}});
  const char* forms[] = {"you", "'ll", "study", "it", "easier"};
  const char* deprels[] = {"nsubj", "aux", "root", "obj", "xcomp"};
  for (int i = 0; i < 5; ++i) {
    s.tokens[static_cast<size_t>(i)].form = forms[i];
    s.tokens[static_cast<size_t>(i)].deprel = deprels[i];
  }
  return s;
}

ParsedSentence fig_target() {
  ParsedSentence s = make_sentence(
      {{3, "PRON"}, {3, "AUX"}, {0, "VERB"}, {3, "PRON"}, {6, "ADV"}, {3, "ADV"}});
  const char* forms[] = {"you", "'ll", "study", "it", "more", "easily"};
  const char* deprels[] = {"nsubj", "aux", "root", "obj", "advmod", "advmod"};
  for (int i = 0; i < 6; ++i) {
    s.tokens[static_cast<size_t>(i)].form = forms[i];
    s.tokens[static_cast<size_t>(i)].deprel = deprels[i];
  }
  return s;
}

}  // namespace

TEST_CASE("Scheme::parse round-trips the three kinds") {
  CHECK(Scheme::parse("upos") == Scheme::upos());
  CHECK(Scheme::parse("deprel") == Scheme::deprel());
  CHECK(Scheme::parse("feature:Case") == Scheme::feature("Case"));
  CHECK(Scheme::parse("feature:Case:noun") == Scheme::feature("Case", "NOUN"));
  CHECK(Scheme::parse("feature:Case:NOUN").to_string() == "FEATURE:Case:NOUN");
  CHECK_THROWS_AS(Scheme::parse("pos"), std::invalid_argument);
  CHECK_THROWS_AS(Scheme::parse("feature:"), std::invalid_argument);
}

TEST_CASE("representative: singleton span is that token") {
  const auto s = make_sentence({{0, "VERB"}, {1, "NOUN"}, {2, "DET"}});
  CHECK(representative(Span{1, 2}, s) == 2);
}

TEST_CASE("representative: empty span has none") {
  const auto s = make_sentence({{0, "VERB"}});
  CHECK(!representative(Span{0, 0}, s).has_value());
}

TEST_CASE("representative: strictly smaller depth wins") {
  // Tokens 5 and 6, head(6)=5, head(5) outside the span.
  const auto s = make_sentence(
      {{0, "VERB"}, {1, "X"}, {1, "X"}, {1, "X"}, {1, "NOUN"}, {5, "DET"}});
  CHECK(representative(Span{4, 6}, s) == 5);
}

TEST_CASE("representative: leftmost token breaks depth ties") {
  // Offsets 2 and 6 (ids 3 and 7) both at depth 2.
  const auto s = make_sentence(
      {{0, "VERB"}, {3, "X"}, {1, "NOUN"}, {3, "X"}, {3, "X"}, {7, "X"}, {1, "NOUN"}});
  const auto choice = representative_info(Span{2, 7}, s);
  CHECK(choice.id == 3);
  CHECK(choice.tie);
}

TEST_CASE("representative agrees with a brute-force oracle on random trees and spans") {
  std::mt19937 rng(20240502);
  for (int round = 0; round < 300; ++round) {
    const int n = 2 + static_cast<int>(rng() % 19);
    const ParsedSentence s = random_tree(rng, n);
    const std::vector<int> depths = bfs_depths(s);
    const int start = static_cast<int>(rng() % static_cast<unsigned>(n));
    const int end = start + 1 + static_cast<int>(rng() % static_cast<unsigned>(n - start));

    int best = 0;
    for (int offset = start; offset < end; ++offset) {
      const int id = offset + 1;
      if (best == 0 || depths[static_cast<size_t>(id)] < depths[static_cast<size_t>(best)])
        best = id;
    }
    const auto got = representative(Span{start, end}, s);
    REQUIRE(got.has_value());
    CHECK(*got == best);
    // Membership and minimality, straight from the definition.
    CHECK(*got >= start + 1);
    CHECK(*got <= end);
    for (int offset = start; offset < end; ++offset)
      CHECK(depths[static_cast<size_t>(*got)] <= depths[static_cast<size_t>(offset + 1)]);
  }
}

TEST_CASE("label_of: upos, deprel, feature") {
  Token t;
  t.upos = "ADJ";
  t.deprel = "nmod:poss";
  t.feats.emplace("Case", "Nom");
  CHECK(label_of(t, Scheme::upos()) == "ADJ");
  CHECK(label_of(t, Scheme::deprel()) == "nmod:poss");  // subtype kept verbatim
  CHECK(label_of(t, Scheme::feature("Case")) == "Nom");
  CHECK(!label_of(t, Scheme::feature("Gender")).has_value());
  CHECK(!label_of(t, Scheme::feature("Case", "NOUN")).has_value());
  CHECK(label_of(t, Scheme::feature("Case", "ADJ")) == "Nom");
}

TEST_CASE("classify: ADJ->ADV replacement under upos, xcomp->advmod under deprel") {
  const ParsedSentence src = fig_source();
  const ParsedSentence tgt = fig_target();
  const Edit edit = make_edit(4, 5, {"more", "easily"});

  const ClassifiedEdit upos = classify(edit, src, tgt, Span{4, 6}, Scheme::upos());
  CHECK(upos.type.kind == EditKind::Replacement);
  CHECK(upos.type.source_label == "ADJ");
  CHECK(upos.type.target_label == "ADV");
  CHECK(upos.type.is_syntactic_error());
  CHECK(upos.source_rep == 5);
  CHECK(upos.target_rep == 6);  // "easily" is closer to the root than "more"

  const ClassifiedEdit deprel = classify(edit, src, tgt, Span{4, 6}, Scheme::deprel());
  CHECK(deprel.type.source_label == "xcomp");
  CHECK(deprel.type.target_label == "advmod");
}

TEST_CASE("classify: deletion of a determiner is (DET, None)") {
  const ParsedSentence src = make_sentence({{2, "DET"}, {0, "NOUN"}});
  const ParsedSentence tgt = make_sentence({{0, "NOUN"}});
  const ClassifiedEdit ce =
      classify(make_edit(0, 1, {}), src, tgt, Span{0, 0}, Scheme::upos());
  CHECK(ce.type.kind == EditKind::Deletion);
  CHECK(ce.type.source_label == "DET");
  CHECK(!ce.type.target_label.has_value());
  CHECK(ce.type.is_syntactic_error());
}

TEST_CASE("classify: addition is (None, label) and an SE by definition") {
  const ParsedSentence src = make_sentence({{0, "NOUN"}});
  const ParsedSentence tgt = make_sentence({{2, "DET"}, {0, "NOUN"}});
  const ClassifiedEdit ce =
      classify(make_edit(0, 0, {"w1"}), src, tgt, Span{0, 1}, Scheme::upos());
  CHECK(ce.type.kind == EditKind::Addition);
  CHECK(!ce.type.source_label.has_value());
  CHECK(ce.type.target_label == "DET");
  CHECK(ce.type.is_syntactic_error());
}

TEST_CASE("classify: unchanged label is not a syntactic error") {
  const ParsedSentence src = make_sentence({{0, "VERB"}});
  const ParsedSentence tgt = make_sentence({{0, "VERB"}});
  const ClassifiedEdit ce =
      classify(make_edit(0, 1, {"w1"}), src, tgt, Span{0, 1}, Scheme::upos());
  CHECK(ce.type.kind == EditKind::Replacement);
  CHECK(!ce.type.is_syntactic_error());
}

TEST_CASE("classify: FormMismatch when the target span disagrees with the replacement") {
  const ParsedSentence src = fig_source();
  const ParsedSentence tgt = fig_target();
  CHECK_THROWS_AS(
      classify(make_edit(4, 5, {"more", "slowly"}), src, tgt, Span{4, 6}, Scheme::upos()),
      FormMismatch);
  CHECK_THROWS_AS(
      classify(make_edit(4, 5, {"easily"}), src, tgt, Span{4, 6}, Scheme::upos()),
      FormMismatch);
}

TEST_CASE("classify: feature scheme applicability") {
  ParsedSentence src = make_sentence({{0, "PRON"}});
  ParsedSentence tgt = make_sentence({{0, "PRON"}});
  src.tokens[0].feats.emplace("Case", "Acc");
  tgt.tokens[0].feats.emplace("Case", "Nom");
  const Edit edit = make_edit(0, 1, {"w1"});

  SUBCASE("same upos, feature present on both") {
    const auto ce = classify(edit, src, tgt, Span{0, 1}, Scheme::feature("Case"));
    CHECK(ce.scheme_applicable);
    CHECK(ce.type.source_label == "Acc");
    CHECK(ce.type.target_label == "Nom");
    CHECK(ce.type.is_syntactic_error());
  }
  SUBCASE("pos filter rejects both representatives") {
    const auto ce = classify(edit, src, tgt, Span{0, 1}, Scheme::feature("Case", "NOUN"));
    CHECK(!ce.scheme_applicable);
  }
  SUBCASE("upos mismatch between representatives is inapplicable") {
    tgt.tokens[0].upos = "DET";
    const auto ce = classify(edit, src, tgt, Span{0, 1}, Scheme::feature("Case"));
    CHECK(!ce.scheme_applicable);
  }
  SUBCASE("missing feature on one side is the None label") {
    tgt.tokens[0].feats.clear();
    const auto ce = classify(edit, src, tgt, Span{0, 1}, Scheme::feature("Case"));
    CHECK(ce.scheme_applicable);
    CHECK(ce.type.source_label == "Acc");
    CHECK(!ce.type.target_label.has_value());
    CHECK(ce.type.is_syntactic_error());
  }
  SUBCASE("additions have no source representative and are inapplicable") {
    const ParsedSentence empty_src = make_sentence({{0, "NOUN"}});
    const ParsedSentence add_tgt = make_sentence({{2, "PRON"}, {0, "NOUN"}});
    const auto ce = classify(make_edit(0, 0, {"w1"}), empty_src, add_tgt, Span{0, 1},
                             Scheme::feature("Case"));
    CHECK(!ce.scheme_applicable);
  }
}

TEST_CASE("classify: direction antisymmetry on fuzzed single-edit sentences") {
  std::mt19937 rng(20240503);
  const char* upos_pool[] = {"NOUN", "VERB", "ADJ", "DET", "ADV"};
  for (int round = 0; round < 200; ++round) {
    const int src_n = 2 + static_cast<int>(rng() % 8);
    const int tgt_n = 2 + static_cast<int>(rng() % 8);
    ParsedSentence src = random_tree(rng, src_n);
    ParsedSentence tgt = random_tree(rng, tgt_n);
    for (Token& t : src.tokens) t.upos = upos_pool[rng() % 5];
    for (Token& t : tgt.tokens) t.upos = upos_pool[rng() % 5];

    const int s_start = static_cast<int>(rng() % static_cast<unsigned>(src_n));
    const int s_end = s_start + static_cast<int>(rng() % static_cast<unsigned>(src_n - s_start + 1));
    const int t_start = static_cast<int>(rng() % static_cast<unsigned>(tgt_n));
    const int t_end = t_start + static_cast<int>(rng() % static_cast<unsigned>(tgt_n - t_start + 1));
    if (s_start == s_end && t_start == t_end) continue;

    std::vector<std::string> forward_repl;
    for (int i = t_start; i < t_end; ++i) forward_repl.push_back(tgt.token(i + 1).form);
    Edit forward = make_edit(s_start, s_end, forward_repl);

    std::vector<std::string> reverse_repl;
    for (int i = s_start; i < s_end; ++i) reverse_repl.push_back(src.token(i + 1).form);
    Edit reverse = make_edit(t_start, t_end, reverse_repl);

    const ClassifiedEdit fwd =
        classify(forward, src, tgt, Span{t_start, t_end}, Scheme::upos());
    const ClassifiedEdit rev =
        classify(reverse, tgt, src, Span{s_start, s_end}, Scheme::upos());

    CHECK(fwd.type.source_label == rev.type.target_label);
    CHECK(fwd.type.target_label == rev.type.source_label);
    if (fwd.type.kind == EditKind::Addition) CHECK(rev.type.kind == EditKind::Deletion);
    if (fwd.type.kind == EditKind::Deletion) CHECK(rev.type.kind == EditKind::Addition);
    if (fwd.type.kind == EditKind::Replacement) CHECK(rev.type.kind == EditKind::Replacement);
    CHECK(fwd.type.is_syntactic_error() == rev.type.is_syntactic_error());
  }
}

TEST_CASE("classify: representative ignores FORM/LEMMA/FEATS edits outside the spans") {
  const ParsedSentence src = fig_source();
  ParsedSentence relabeled = src;
  relabeled.tokens[0].form = "YOU";
  relabeled.tokens[1].lemma = "shall";
  relabeled.tokens[2].feats.emplace("Mood", "Ind");
  CHECK(representative(Span{3, 5}, src) == representative(Span{3, 5}, relabeled));
}

TEST_CASE("load_bundle: sentence-count mismatch is fatal") {
  CHECK_THROWS_AS(load_bundle(test_util::fixture_path("corpus.m2"),
                              test_util::fixture_path("fig1_src.conllu"),
                              test_util::fixture_path("fig1_cor.conllu")),
                  std::runtime_error);
}

TEST_CASE("load_bundle: aligned fixture loads cleanly") {
  const CorpusBundle bundle = load_bundle(test_util::fixture_path("corpus.m2"),
                                          test_util::fixture_path("corpus_src.conllu"),
                                          test_util::fixture_path("corpus_cor.conllu"), "A");
  CHECK(bundle.m2.size() == 10);
  CHECK(bundle.level_tag == "A");
  for (size_t i = 0; i < bundle.m2.size(); ++i)
    CHECK(bundle.source_parses[i].forms() == bundle.m2[i].source_tokens);
}

TEST_CASE("classify_corpus: empty corpus gives an empty sequence") {
  const CorpusBundle bundle;
  const auto result = classify_corpus(bundle, Scheme::upos());
  CHECK(result.edits.empty());
  CHECK(result.failures.empty());
}

TEST_CASE("classify_corpus: one sentence with two disjoint edits") {
  CorpusBundle bundle;
  EditedSentence m2;
  m2.source_tokens = {"w1", "w2", "w3"};
  Edit e1 = make_edit(0, 1, {"w1"});
  Edit e2 = make_edit(2, 3, {"w3"});
  m2.edits = {e1, e2};
  bundle.m2.push_back(m2);
  bundle.source_parses.push_back(make_sentence({{2, "DET"}, {0, "NOUN"}, {2, "ADJ"}}));
  bundle.corrected_parses.push_back(make_sentence({{2, "PRON"}, {0, "NOUN"}, {2, "ADV"}}));
  const auto result = classify_corpus(bundle, Scheme::upos());
  REQUIRE(result.edits.size() == 2);
  CHECK(result.edits[0].type.source_label == "DET");
  CHECK(result.edits[0].type.target_label == "PRON");
  CHECK(result.edits[1].type.source_label == "ADJ");
  CHECK(result.edits[1].type.target_label == "ADV");
  CHECK(result.edits[1].edit_index == 1);
}

TEST_CASE("classify_corpus: misaligned corrected parse is recorded, not fatal") {
  CorpusBundle bundle;
  EditedSentence m2;
  m2.source_tokens = {"w1", "w2"};
  m2.edits = {make_edit(0, 1, {"w1"})};
  bundle.m2 = {m2, m2};
  bundle.source_parses = {make_sentence({{2, "DET"}, {0, "NOUN"}}),
                          make_sentence({{2, "DET"}, {0, "NOUN"}})};
  ParsedSentence bad = make_sentence({{2, "PRON"}, {0, "NOUN"}});
  bad.tokens[0].form = "XXX";
  bundle.corrected_parses = {bad, make_sentence({{2, "PRON"}, {0, "NOUN"}})};

  const auto result = classify_corpus(bundle, Scheme::upos());
  REQUIRE(result.failures.size() == 1);
  CHECK(result.failures[0].sentence_index == 0);
  REQUIRE(result.edits.size() == 1);
  CHECK(result.edits[0].sentence_index == 1);
}

TEST_CASE("classify_corpus: 20 synthetic sentences match their hand labels") {
  // Flat trees rooted at the first token; each sentence replaces, deletes or
  // inserts one token with a known label, so the expected pair is fixed while
  // the fixture is built.
  struct Expected {
    EditKind kind;
    std::optional<std::string> source;
    std::optional<std::string> target;
  };
  const char* pool[] = {"NOUN", "VERB", "ADJ", "ADV", "DET", "PRON", "ADP"};
  std::mt19937 rng(20240504);
  CorpusBundle bundle;
  std::vector<Expected> expected;

  for (int i = 0; i < 20; ++i) {
    const int n = 3 + static_cast<int>(rng() % 4);
    std::vector<std::pair<int, std::string>> specs;
    specs.emplace_back(0, pool[rng() % 7]);
    for (int k = 1; k < n; ++k) specs.emplace_back(1, pool[rng() % 7]);
    const ParsedSentence src = make_sentence(specs);

    EditedSentence m2;
    m2.source_tokens = src.forms();

    const int mode = i % 3;
    if (mode == 0) {  // replace a non-root token with a fresh label
      const int offset = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
      auto tgt_specs = specs;
      tgt_specs[static_cast<size_t>(offset)].second = "PROPN";
      ParsedSentence tgt = make_sentence(tgt_specs);
      tgt.tokens[static_cast<size_t>(offset)].form = "NEW";
      m2.edits = {make_edit(offset, offset + 1, {"NEW"})};
      bundle.corrected_parses.push_back(tgt);
      expected.push_back({EditKind::Replacement, specs[static_cast<size_t>(offset)].second,
                          std::string("PROPN")});
    } else if (mode == 1) {  // delete the last token
      auto tgt_specs = specs;
      tgt_specs.pop_back();
      bundle.corrected_parses.push_back(make_sentence(tgt_specs));
      m2.edits = {make_edit(n - 1, n, {})};
      expected.push_back(
          {EditKind::Deletion, specs[static_cast<size_t>(n - 1)].second, std::nullopt});
    } else {  // append a token
      auto tgt_specs = specs;
      tgt_specs.emplace_back(1, "INTJ");
      ParsedSentence tgt = make_sentence(tgt_specs);
      m2.edits = {make_edit(n, n, {tgt.token(n + 1).form})};
      bundle.corrected_parses.push_back(tgt);
      expected.push_back({EditKind::Addition, std::nullopt, std::string("INTJ")});
    }
    bundle.m2.push_back(std::move(m2));
    bundle.source_parses.push_back(src);
  }

  const auto result = classify_corpus(bundle, Scheme::upos());
  CHECK(result.failures.empty());
  REQUIRE(result.edits.size() == 20);
  for (size_t i = 0; i < 20; ++i) {
    CHECK(result.edits[i].type.kind == expected[i].kind);
    CHECK(result.edits[i].type.source_label == expected[i].source);
    CHECK(result.edits[i].type.target_label == expected[i].target);
  }
}
