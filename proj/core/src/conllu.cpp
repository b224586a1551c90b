#include "udgec/conllu.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace udgec {

namespace {

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

FeatureMap parse_feats(std::string_view col) {
  FeatureMap feats;
  if (col.empty() || col == "_") return feats;
  size_t pos = 0;
  while (pos <= col.size()) {
    size_t bar = col.find('|', pos);
    std::string_view pair =
        col.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
    size_t eq = pair.find('=');
    if (eq == std::string_view::npos) {
      feats.emplace(std::string(pair), std::string());
    } else {
      // Multi-valued features ("Gender=Masc,Fem") keep the raw value string.
      feats.emplace(std::string(pair.substr(0, eq)), std::string(pair.substr(eq + 1)));
    }
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  return feats;
}

std::string serialize_feats(const FeatureMap& feats) {
  if (feats.empty()) return "_";
  std::string out;
  for (const auto& [name, value] : feats) {
    if (!out.empty()) out += '|';
    out += name;
    if (!value.empty()) {
      out += '=';
      out += value;
    }
  }
  return out;
}

}  // namespace

bool FeatureNameLess::operator()(const std::string& a, const std::string& b) const {
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    const char ca = ascii_lower(a[i]);
    const char cb = ascii_lower(b[i]);
    if (ca != cb) return ca < cb;
  }
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;  // total order for names equal up to case
}

std::vector<std::string> ParsedSentence::forms() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.form);
  return out;
}

MalformedLine::MalformedLine(int line, const std::string& detail)
    : std::runtime_error("malformed CoNLL-U line " + std::to_string(line) + ": " + detail),
      line(line) {}

CycleDetected::CycleDetected(int token_id)
    : std::runtime_error("head cycle reached from token " + std::to_string(token_id)),
      token_id(token_id) {}

std::vector<ParsedSentence> read_conllu(std::istream& in) {
  std::vector<ParsedSentence> sentences;
  ParsedSentence current;
  std::string line;
  int lineno = 0;

  auto flush = [&] {
    if (!current.tokens.empty()) sentences.push_back(std::move(current));
    current = ParsedSentence{};
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      current.comments.push_back(line);
      continue;
    }

    const auto cols = split_tabs(line);
    if (cols.size() != 10)
      throw MalformedLine(lineno, "expected 10 TAB-separated columns, got " +
                                      std::to_string(cols.size()));

    // Multiword-token ranges and empty nodes carry no tree structure.
    if (cols[0].find('-') != std::string_view::npos ||
        cols[0].find('.') != std::string_view::npos)
      continue;

    Token tok;
    if (!parse_int(cols[0], tok.id) || tok.id < 1)
      throw MalformedLine(lineno, "invalid ID \"" + std::string(cols[0]) + "\"");
    if (tok.id != static_cast<int>(current.tokens.size()) + 1)
      throw MalformedLine(lineno, "ID " + std::to_string(tok.id) + " out of sequence");
    tok.form = std::string(cols[1]);
    tok.lemma = std::string(cols[2]);
    tok.upos = std::string(cols[3]);
    std::transform(tok.upos.begin(), tok.upos.end(), tok.upos.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    tok.xpos = std::string(cols[4]);
    tok.feats = parse_feats(cols[5]);
    if (!parse_int(cols[6], tok.head) || tok.head < 0)
      throw MalformedLine(lineno, "invalid HEAD \"" + std::string(cols[6]) + "\"");
    tok.deprel = std::string(cols[7]);
    tok.deps = std::string(cols[8]);
    tok.misc = std::string(cols[9]);
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return sentences;
}

std::vector<ParsedSentence> read_conllu_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_conllu(in);
}

std::string serialize(const Token& token) {
  auto field = [](const std::string& s) -> const std::string& {
    static const std::string underscore = "_";
    return s.empty() ? underscore : s;
  };
  std::string out = std::to_string(token.id);
  out += '\t';
  out += field(token.form);
  out += '\t';
  out += field(token.lemma);
  out += '\t';
  out += field(token.upos);
  out += '\t';
  out += field(token.xpos);
  out += '\t';
  out += serialize_feats(token.feats);
  out += '\t';
  out += std::to_string(token.head);
  out += '\t';
  out += field(token.deprel);
  out += '\t';
  out += field(token.deps);
  out += '\t';
  out += field(token.misc);
  return out;
}

void write_conllu(std::ostream& out, const ParsedSentence& sentence) {
  for (const std::string& c : sentence.comments) out << c << '\n';
  for (const Token& t : sentence.tokens) out << serialize(t) << '\n';
  out << '\n';
}

void write_conllu(std::ostream& out, const std::vector<ParsedSentence>& sentences) {
  for (const ParsedSentence& s : sentences) write_conllu(out, s);
}

int depth(const ParsedSentence& sentence, int id) {
  const int n = sentence.size();
  if (id < 1 || id > n) throw std::out_of_range("token id " + std::to_string(id));
  int hops = 0;
  int cur = id;
  while (cur != 0) {
    const int head = sentence.token(cur).head;
    if (head < 0 || head > n)
      throw std::out_of_range("head " + std::to_string(head) + " of token " +
                              std::to_string(cur));
    ++hops;
    if (hops > n) throw CycleDetected(id);
    cur = head;
  }
  return hops;
}

std::vector<TreeViolation> validate_tree(const ParsedSentence& sentence) {
  std::vector<TreeViolation> violations;
  const int n = sentence.size();

  std::vector<int> roots;
  for (const Token& t : sentence.tokens) {
    if (t.head == 0) roots.push_back(t.id);
    else if (t.head < 0 || t.head > n)
      violations.push_back({ViolationKind::DanglingHead, {t.id}});
  }
  if (roots.empty() && n > 0) violations.push_back({ViolationKind::NoRoot, {}});
  if (roots.size() > 1) violations.push_back({ViolationKind::MultipleRoots, roots});

  // Walk head chains; 0 = unseen, 1 = on the current path, 2 = done.
  std::vector<int> state(static_cast<size_t>(n) + 1, 0);
  for (int start = 1; start <= n; ++start) {
    if (state[start] != 0) continue;
    std::vector<int> path;
    int cur = start;
    while (cur != 0 && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      const int head = sentence.token(cur).head;
      if (head < 0 || head > n) break;  // dangling, reported above
      cur = head;
    }
    if (cur != 0 && cur <= n && state[cur] == 1) {
      // Found a new cycle; collect the path suffix starting at `cur`.
      std::vector<int> cycle;
      bool in_cycle = false;
      for (int id : path) {
        if (id == cur) in_cycle = true;
        if (in_cycle) cycle.push_back(id);
      }
      std::sort(cycle.begin(), cycle.end());
      violations.push_back({ViolationKind::Cycle, std::move(cycle)});
    }
    for (int id : path) state[id] = 2;
  }
  return violations;
}

}  // namespace udgec
