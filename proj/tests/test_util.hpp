#pragma once

#include <fstream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "udgec/conllu.hpp"

namespace test_util {

inline std::string fixture_path(const std::string& name) {
  return std::string(UDGEC_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// Sentence from (head, upos) pairs; forms are "w1".."wn", deprel "dep"
/// except "root" for head 0.
inline udgec::ParsedSentence make_sentence(
    const std::vector<std::pair<int, std::string>>& specs) {
  udgec::ParsedSentence sentence;
  for (size_t i = 0; i < specs.size(); ++i) {
    udgec::Token t;
    t.id = static_cast<int>(i) + 1;
    t.form = "w" + std::to_string(t.id);
    t.lemma = t.form;
    t.upos = specs[i].second;
    t.head = specs[i].first;
    t.deprel = specs[i].first == 0 ? "root" : "dep";
    sentence.tokens.push_back(std::move(t));
  }
  return sentence;
}

/// Random single-root tree over n tokens: token order[0] is the root, every
/// later token attaches to an earlier one.
inline udgec::ParsedSentence random_tree(std::mt19937& rng, int n) {
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::pair<int, std::string>> specs(static_cast<size_t>(n), {0, "NOUN"});
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    specs[static_cast<size_t>(order[static_cast<size_t>(i)] - 1)].first =
        order[static_cast<size_t>(pick(rng))];
  }
  return make_sentence(specs);
}

/// Depths by breadth-first search over the child adjacency, independent of
/// the head-chasing implementation.
inline std::vector<int> bfs_depths(const udgec::ParsedSentence& sentence) {
  const int n = sentence.size();
  std::vector<std::vector<int>> children(static_cast<size_t>(n) + 1);
  int root = 0;
  for (const udgec::Token& t : sentence.tokens) {
    if (t.head == 0)
      root = t.id;
    else
      children[static_cast<size_t>(t.head)].push_back(t.id);
  }
  std::vector<int> depths(static_cast<size_t>(n) + 1, -1);
  std::queue<int> queue;
  depths[static_cast<size_t>(root)] = 1;
  queue.push(root);
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop();
    for (int child : children[static_cast<size_t>(id)]) {
      depths[static_cast<size_t>(child)] = depths[static_cast<size_t>(id)] + 1;
      queue.push(child);
    }
  }
  return depths;  // index 0 unused
}

}  // namespace test_util
