#include "udgec/edits.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace udgec {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_spaces(std::string_view text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t space = text.find(' ', pos);
    if (space == std::string_view::npos) space = text.size();
    if (space > pos) out.emplace_back(text.substr(pos, space - pos));
    pos = space + 1;
  }
  return out;
}

std::vector<std::string_view> split_fields(std::string_view text) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    size_t sep = text.find("|||", pos);
    if (sep == std::string_view::npos) {
      out.push_back(text.substr(pos));
      return out;
    }
    out.push_back(text.substr(pos, sep - pos));
    pos = sep + 3;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Insertion points collide with spans whose closed interval contains them;
// spans collide when they share a token; insertions only at the same offset.
bool collides(const Edit& a, const Edit& b) {
  const bool ia = a.start == a.end;
  const bool ib = b.start == b.end;
  if (ia && ib) return a.start == b.start;
  if (ia) return b.start <= a.start && a.start <= b.end;
  if (ib) return a.start <= b.start && b.start <= a.end;
  return a.start < b.end && b.start < a.end;
}

Edit merge_cluster(std::span<const std::string> source, const std::vector<Edit>& members) {
  Edit merged;
  merged.annotator = members.front().annotator;
  merged.start = members.front().start;
  merged.end = members.front().end;
  for (const Edit& e : members) {
    merged.start = std::min(merged.start, e.start);
    merged.end = std::max(merged.end, e.end);
  }

  std::vector<char> claimed(static_cast<size_t>(merged.end - merged.start), 0);
  for (const Edit& e : members)
    for (int i = e.start; i < e.end; ++i) claimed[static_cast<size_t>(i - merged.start)] = 1;

  // Constituent replacements in source order (members are already sorted by
  // (start, end) with input order preserved on ties), interleaved with any
  // source tokens the constituents do not claim.
  size_t mi = 0;
  for (int pos = merged.start; pos <= merged.end; ++pos) {
    while (mi < members.size() && members[mi].start == pos) {
      const auto& repl = members[mi].replacement;
      merged.replacement.insert(merged.replacement.end(), repl.begin(), repl.end());
      ++mi;
    }
    if (pos < merged.end && !claimed[static_cast<size_t>(pos - merged.start)])
      merged.replacement.push_back(source[static_cast<size_t>(pos)]);
  }

  // External type of the widest constituent, leftmost on ties.
  const Edit* widest = &members.front();
  for (const Edit& e : members) {
    const int w = e.end - e.start;
    const int best = widest->end - widest->start;
    if (w > best || (w == best && e.start < widest->start)) widest = &e;
  }
  merged.external_type = widest->external_type;
  return merged;
}

}  // namespace

MalformedAnnotation::MalformedAnnotation(int line, const std::string& detail)
    : std::runtime_error("malformed M2 annotation at line " + std::to_string(line) + ": " +
                         detail),
      line(line) {}

SpanOutOfBounds::SpanOutOfBounds(int sentence_index, Edit edit)
    : std::runtime_error("edit span [" + std::to_string(edit.start) + ", " +
                         std::to_string(edit.end) + ") out of bounds in sentence " +
                         std::to_string(sentence_index)),
      sentence_index(sentence_index),
      edit(std::move(edit)) {}

std::vector<EditedSentence> read_m2(std::istream& in) {
  std::vector<EditedSentence> sentences;
  EditedSentence current;
  bool open = false;
  std::string line;
  int lineno = 0;

  auto flush = [&] {
    if (open) sentences.push_back(std::move(current));
    current = EditedSentence{};
    open = false;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.size() >= 2 && line[0] == 'S' && line[1] == ' ') {
      flush();
      current.source_tokens = split_spaces(std::string_view(line).substr(2));
      open = true;
      continue;
    }
    if (line.size() >= 2 && line[0] == 'A' && line[1] == ' ') {
      if (!open) throw MalformedAnnotation(lineno, "annotation before any source line");
      const auto fields = split_fields(std::string_view(line).substr(2));
      if (fields.size() < 6)
        throw MalformedAnnotation(lineno, "expected 6 |||-separated fields, got " +
                                              std::to_string(fields.size()));

      std::istringstream span_in{std::string(fields[0])};
      std::string start_text, end_text;
      span_in >> start_text >> end_text;
      Edit edit;
      if (!parse_int(start_text, edit.start) || !parse_int(end_text, edit.end))
        throw MalformedAnnotation(lineno, "non-integer span offsets");

      const std::string type(trim(fields[1]));
      if (type == "noop" || (edit.start == -1 && edit.end == -1)) continue;
      if (!type.empty()) edit.external_type = type;

      const std::string_view correction = fields[2];
      if (correction != "-NONE-") edit.replacement = split_spaces(correction);

      if (!parse_int(trim(fields[5]), edit.annotator))
        throw MalformedAnnotation(lineno, "non-integer annotator id");

      // A zero-width edit with nothing to insert is a noop in disguise.
      if (edit.start == edit.end && edit.replacement.empty()) continue;

      const int len = static_cast<int>(current.source_tokens.size());
      if (edit.start < 0 || edit.end < edit.start || edit.end > len)
        throw SpanOutOfBounds(static_cast<int>(sentences.size()), edit);
      current.edits.push_back(std::move(edit));
      continue;
    }
    throw MalformedAnnotation(lineno, "unrecognized line \"" + line + "\"");
  }
  flush();
  return sentences;
}

std::vector<EditedSentence> read_m2_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_m2(in);
}

EditedSentence select_annotator(const EditedSentence& sentence, int annotator) {
  EditedSentence out;
  out.source_tokens = sentence.source_tokens;
  for (const Edit& e : sentence.edits)
    if (e.annotator == annotator) out.edits.push_back(e);
  return out;
}

std::vector<Edit> merge_overlapping(std::span<const std::string> source_tokens,
                                    std::vector<Edit> edits) {
  std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    return a.start != b.start ? a.start < b.start : a.end < b.end;
  });

  std::vector<std::vector<Edit>> clusters;
  for (Edit& e : edits) {
    std::vector<size_t> hits;
    for (size_t c = 0; c < clusters.size(); ++c)
      for (const Edit& m : clusters[c])
        if (collides(e, m)) {
          hits.push_back(c);
          break;
        }
    if (hits.empty()) {
      clusters.push_back({std::move(e)});
      continue;
    }
    // Fold every colliding cluster into the first one, then append the edit.
    std::vector<Edit>& target = clusters[hits.front()];
    for (size_t i = hits.size(); i-- > 1;) {
      auto& victim = clusters[hits[i]];
      target.insert(target.end(), std::make_move_iterator(victim.begin()),
                    std::make_move_iterator(victim.end()));
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(hits[i]));
    }
    target.push_back(std::move(e));
    std::stable_sort(target.begin(), target.end(), [](const Edit& a, const Edit& b) {
      return a.start != b.start ? a.start < b.start : a.end < b.end;
    });
  }

  std::vector<Edit> out;
  out.reserve(clusters.size());
  for (const auto& cluster : clusters)
    out.push_back(cluster.size() == 1 ? cluster.front()
                                      : merge_cluster(source_tokens, cluster));
  std::sort(out.begin(), out.end(), [](const Edit& a, const Edit& b) {
    return a.start != b.start ? a.start < b.start : a.end < b.end;
  });
  return out;
}

AppliedEdits apply_edits(std::span<const std::string> source_tokens,
                         const std::vector<Edit>& edits) {
  AppliedEdits out;
  int pos = 0;
  const int n = static_cast<int>(source_tokens.size());
  for (const Edit& e : edits) {
    if (e.start < pos || e.end < e.start || e.end > n)
      throw std::invalid_argument("edits must be sorted, non-overlapping and in bounds");
    for (; pos < e.start; ++pos) out.tokens.push_back(source_tokens[static_cast<size_t>(pos)]);
    const int t_start = static_cast<int>(out.tokens.size());
    out.tokens.insert(out.tokens.end(), e.replacement.begin(), e.replacement.end());
    out.spans.emplace_back(t_start, static_cast<int>(out.tokens.size()));
    pos = e.end;
  }
  for (; pos < n; ++pos) out.tokens.push_back(source_tokens[static_cast<size_t>(pos)]);
  return out;
}

}  // namespace udgec
