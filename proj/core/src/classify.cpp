#include "udgec/classify.hpp"

#include <algorithm>
#include <cctype>

namespace udgec {

namespace {

std::string ascii_upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string ascii_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool passes_pos_filter(const Token& token, const Scheme& scheme) {
  return !scheme.pos_filter() || token.upos == *scheme.pos_filter();
}

}  // namespace

Scheme Scheme::feature(std::string name, std::optional<std::string> pos_filter) {
  if (name.empty()) throw std::invalid_argument("feature scheme needs a feature name");
  return Scheme(SchemeKind::Feature, std::move(name), std::move(pos_filter));
}

Scheme Scheme::parse(const std::string& text) {
  const std::string lower = ascii_lower(text);
  if (lower == "upos") return upos();
  if (lower == "deprel") return deprel();
  if (lower.rfind("feature:", 0) == 0) {
    const std::string rest = text.substr(8);
    const size_t colon = rest.find(':');
    if (colon == std::string::npos) {
      if (rest.empty()) throw std::invalid_argument("feature scheme needs a feature name");
      return feature(rest);
    }
    std::string name = rest.substr(0, colon);
    std::string pos = ascii_upper(rest.substr(colon + 1));
    if (name.empty() || pos.empty())
      throw std::invalid_argument("bad feature scheme \"" + text + "\"");
    return feature(std::move(name), std::move(pos));
  }
  throw std::invalid_argument("unknown scheme \"" + text +
                              "\" (expected upos, deprel, or feature:<Name>[:<UPOS>])");
}

std::string Scheme::to_string() const {
  switch (kind_) {
    case SchemeKind::Upos:
      return "UPOS";
    case SchemeKind::Deprel:
      return "DEPREL";
    case SchemeKind::Feature:
      return pos_filter_ ? "FEATURE:" + feature_ + ":" + *pos_filter_ : "FEATURE:" + feature_;
  }
  return "UPOS";
}

const char* to_string(EditKind kind) {
  switch (kind) {
    case EditKind::Addition:
      return "Addition";
    case EditKind::Deletion:
      return "Deletion";
    case EditKind::Replacement:
      return "Replacement";
  }
  return "Replacement";
}

std::optional<EditKind> edit_kind_from_string(const std::string& text) {
  const std::string lower = ascii_lower(text);
  if (lower == "addition" || lower == "add") return EditKind::Addition;
  if (lower == "deletion" || lower == "del") return EditKind::Deletion;
  if (lower == "replacement" || lower == "rep") return EditKind::Replacement;
  return std::nullopt;
}

RepresentativeChoice representative_info(Span span, const ParsedSentence& sentence) {
  RepresentativeChoice choice;
  if (span.start >= span.end) return choice;
  int best_depth = 0;
  for (int offset = span.start; offset < span.end; ++offset) {
    const int id = offset + 1;
    const int d = depth(sentence, id);
    if (!choice.id || d < best_depth) {
      choice.id = id;
      best_depth = d;
      choice.tie = false;
    } else if (d == best_depth) {
      choice.tie = true;  // leftmost already held
    }
  }
  return choice;
}

std::optional<int> representative(Span span, const ParsedSentence& sentence) {
  return representative_info(span, sentence).id;
}

std::optional<std::string> label_of(const Token& token, const Scheme& scheme) {
  switch (scheme.kind()) {
    case SchemeKind::Upos:
      return token.upos;
    case SchemeKind::Deprel:
      return token.deprel;
    case SchemeKind::Feature: {
      if (!passes_pos_filter(token, scheme)) return std::nullopt;
      const auto it = token.feats.find(scheme.feature_name());
      if (it == token.feats.end()) return std::nullopt;
      return it->second;
    }
  }
  return std::nullopt;
}

FormMismatch::FormMismatch(const std::string& detail)
    : std::runtime_error("target span does not match the edit replacement: " + detail) {}

ClassifiedEdit classify(const Edit& edit, const ParsedSentence& source,
                        const ParsedSentence& target, Span target_span, const Scheme& scheme) {
  const Span source_span{edit.start, edit.end};
  if (source_span.start >= source_span.end && target_span.start >= target_span.end)
    throw std::invalid_argument("degenerate edit with empty source and target spans");

  if (target_span.end - target_span.start != static_cast<int>(edit.replacement.size()))
    throw FormMismatch("span length " +
                       std::to_string(target_span.end - target_span.start) + " vs " +
                       std::to_string(edit.replacement.size()) + " replacement tokens");
  for (int offset = target_span.start; offset < target_span.end; ++offset) {
    const std::string& form = target.token(offset + 1).form;
    const std::string& expected = edit.replacement[static_cast<size_t>(offset - target_span.start)];
    if (form != expected)
      throw FormMismatch("\"" + form + "\" vs \"" + expected + "\" at offset " +
                         std::to_string(offset));
  }

  ClassifiedEdit out;
  out.scheme = scheme;
  out.external_type = edit.external_type;
  out.source_span = {source_span.start, source_span.end};
  out.target_span = {target_span.start, target_span.end};

  const RepresentativeChoice src = representative_info(source_span, source);
  const RepresentativeChoice tgt = representative_info(target_span, target);
  out.source_rep = src.id;
  out.target_rep = tgt.id;
  out.source_tie = src.tie;
  out.target_tie = tgt.tie;

  if (!src.id)
    out.type.kind = EditKind::Addition;
  else if (!tgt.id)
    out.type.kind = EditKind::Deletion;
  else
    out.type.kind = EditKind::Replacement;

  if (src.id) out.type.source_label = label_of(source.token(*src.id), scheme);
  if (tgt.id) out.type.target_label = label_of(target.token(*tgt.id), scheme);

  if (scheme.kind() == SchemeKind::Feature) {
    out.scheme_applicable =
        src.id && tgt.id && passes_pos_filter(source.token(*src.id), scheme) &&
        passes_pos_filter(target.token(*tgt.id), scheme) &&
        source.token(*src.id).upos == target.token(*tgt.id).upos;
    if (!out.scheme_applicable) {
      out.type.source_label.reset();
      out.type.target_label.reset();
    }
  }
  return out;
}

CorpusClassification classify_corpus(const CorpusBundle& bundle, const Scheme& scheme,
                                     int annotator) {
  CorpusClassification result;
  const size_t n = bundle.m2.size();
  if (bundle.source_parses.size() != n || bundle.corrected_parses.size() != n)
    throw std::invalid_argument("bundle sequences have different lengths");

  for (size_t i = 0; i < n; ++i) {
    const int sentence_index = static_cast<int>(i);
    const EditedSentence& m2s = bundle.m2[i];
    const ParsedSentence& src = bundle.source_parses[i];
    const ParsedSentence& cor = bundle.corrected_parses[i];

    if (src.forms() != m2s.source_tokens) {
      result.failures.push_back(
          {sentence_index, "source parse forms differ from the M2 source tokens"});
      continue;
    }

    const EditedSentence selected = select_annotator(m2s, annotator);
    const std::vector<Edit> merged = merge_overlapping(m2s.source_tokens, selected.edits);
    const AppliedEdits applied = apply_edits(m2s.source_tokens, merged);

    if (cor.forms() != applied.tokens) {
      result.failures.push_back(
          {sentence_index, "corrected parse forms differ from the applied edits"});
      continue;
    }

    std::vector<ClassifiedEdit> sentence_edits;
    try {
      for (size_t j = 0; j < merged.size(); ++j) {
        const auto [t_start, t_end] = applied.spans[j];
        ClassifiedEdit ce = classify(merged[j], src, cor, Span{t_start, t_end}, scheme);
        ce.sentence_index = sentence_index;
        ce.edit_index = static_cast<int>(j);
        sentence_edits.push_back(std::move(ce));
      }
    } catch (const CycleDetected& e) {
      result.failures.push_back({sentence_index, e.what()});
      continue;
    }
    for (ClassifiedEdit& ce : sentence_edits) {
      if (ce.source_span.second > ce.source_span.first) {
        ++result.nonempty_spans;
        if (ce.source_tie) ++result.spans_with_tie;
      }
      if (ce.target_span.second > ce.target_span.first) {
        ++result.nonempty_spans;
        if (ce.target_tie) ++result.spans_with_tie;
      }
      result.edits.push_back(std::move(ce));
    }
  }
  return result;
}

}  // namespace udgec
