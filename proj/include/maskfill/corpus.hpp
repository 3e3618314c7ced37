#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace maskfill {

/// Half-open token range [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end > start ? end - start : 0; }
  bool overlaps(const Span& o) const noexcept { return start < o.end && o.start < end; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Argument {
  std::string role;
  Span span;
  friend bool operator==(const Argument&, const Argument&) = default;
};

struct EventMention {
  std::string event_type;
  Span trigger;
  std::vector<Argument> arguments;
  friend bool operator==(const EventMention&, const EventMention&) = default;
};

struct AnnotatedSample {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<EventMention> events;
  friend bool operator==(const AnnotatedSample&, const AnnotatedSample&) = default;
};

struct Corpus {
  std::vector<AnnotatedSample> samples;
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Every trigger and argument span of the sample, in event order.
std::vector<Span> event_spans(const AnnotatedSample& s);

/// Tokens under `span`; the span must lie within the token list.
std::vector<std::string> surface(const std::vector<std::string>& tokens, const Span& span);

/// Lists invariant violations; empty iff the sample is valid. Never throws.
std::vector<std::string> validate_sample(const AnnotatedSample& s);

/// True when a token is non-empty and contains no ASCII whitespace.
bool is_valid_token(const std::string& token) noexcept;

// Record codec. Objects use sorted keys; `dump()` gives the canonical line.
nlohmann::json span_to_json(const Span& s);
Span span_from_json(const nlohmann::json& j);
nlohmann::json sample_to_json(const AnnotatedSample& s);
AnnotatedSample sample_from_json(const nlohmann::json& j);

/// Streams newline-delimited records, one per call, without validating them.
class RecordReader {
 public:
  struct Record {
    std::size_t line = 0;
    nlohmann::json value;
  };

  explicit RecordReader(std::istream& in) : in_(in) {}

  /// Next non-blank record, or nullopt at end of input. Throws CorpusError on bad JSON.
  std::optional<Record> next();

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

/// Decodes and validates one record (an optional "provenance" field is
/// tolerated). Throws CorpusError carrying the record's line number.
AnnotatedSample decode_sample_record(const RecordReader::Record& rec);

/// Parses and validates a whole corpus; throws CorpusError with the line number
/// and sample id on the first malformed record, invalid sample or duplicate id.
Corpus parse_corpus(std::istream& in);
Corpus parse_corpus_string(const std::string& text);
Corpus load_corpus(const std::string& path);

/// Canonical form: one record per line, sorted keys, no insignificant whitespace.
void serialize_corpus(const Corpus& c, std::ostream& out);
std::string serialize_corpus(const Corpus& c);

}  // namespace maskfill
