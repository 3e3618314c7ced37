#include "maskfill/corpus.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "maskfill/errors.hpp"

namespace maskfill {

using nlohmann::json;

namespace {

std::string fmt_span(const Span& s) {
  return "[" + std::to_string(s.start) + "," + std::to_string(s.end) + ")";
}

void check_span(const Span& s, std::size_t n_tokens, const std::string& field,
                std::vector<std::string>& out) {
  if (s.start >= s.end) {
    out.push_back(field + " " + fmt_span(s) + " is empty or reversed");
  } else if (s.end > n_tokens) {
    out.push_back(field + " " + fmt_span(s) + " out of bounds for " + std::to_string(n_tokens) +
                  " tokens");
  }
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw CorpusError(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw CorpusError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known) {
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (auto name : known) ok = ok || k == name;
    if (!ok) throw CorpusError("unknown field '" + k + "'");
  }
}

}  // namespace

std::vector<Span> event_spans(const AnnotatedSample& s) {
  std::vector<Span> out;
  for (const auto& ev : s.events) {
    out.push_back(ev.trigger);
    for (const auto& arg : ev.arguments) out.push_back(arg.span);
  }
  return out;
}

std::vector<std::string> surface(const std::vector<std::string>& tokens, const Span& span) {
  return {tokens.begin() + static_cast<std::ptrdiff_t>(span.start),
          tokens.begin() + static_cast<std::ptrdiff_t>(span.end)};
}

bool is_valid_token(const std::string& token) noexcept {
  if (token.empty()) return false;
  for (char c : token) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return false;
  }
  return true;
}

std::vector<std::string> validate_sample(const AnnotatedSample& s) {
  std::vector<std::string> out;
  if (s.id.empty()) out.emplace_back("id is empty");
  if (s.tokens.empty()) out.emplace_back("tokens is empty");
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (!is_valid_token(s.tokens[i])) {
      out.push_back("tokens[" + std::to_string(i) + "] is empty or contains whitespace");
    }
  }
  const std::size_t n = s.tokens.size();
  for (std::size_t e = 0; e < s.events.size(); ++e) {
    const auto& ev = s.events[e];
    const std::string prefix = "events[" + std::to_string(e) + "]";
    if (ev.event_type.empty()) out.push_back(prefix + ".type is empty");
    check_span(ev.trigger, n, prefix + ".trigger", out);
    for (std::size_t a = 0; a < ev.arguments.size(); ++a) {
      const auto& arg = ev.arguments[a];
      const std::string field = prefix + ".arguments[" + std::to_string(a) + "]";
      if (arg.role.empty()) out.push_back(field + ".role is empty");
      check_span(arg.span, n, field + ".span", out);
      if (ev.trigger.overlaps(arg.span)) {
        out.push_back(prefix + ".trigger " + fmt_span(ev.trigger) + " overlaps " + field +
                      ".span " + fmt_span(arg.span));
      }
    }
  }
  return out;
}

json span_to_json(const Span& s) { return json::array({s.start, s.end}); }

Span span_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw CorpusError("span must be a [start,end] pair of integers");
  }
  if (j[0].get<long long>() < 0 || j[1].get<long long>() < 0) {
    throw CorpusError("span offsets must be non-negative");
  }
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

json sample_to_json(const AnnotatedSample& s) {
  json events = json::array();
  for (const auto& ev : s.events) {
    json args = json::array();
    for (const auto& a : ev.arguments) {
      args.push_back({{"role", a.role}, {"span", span_to_json(a.span)}});
    }
    events.push_back(
        {{"type", ev.event_type}, {"trigger", span_to_json(ev.trigger)}, {"arguments", args}});
  }
  return {{"id", s.id}, {"tokens", s.tokens}, {"events", events}};
}

AnnotatedSample sample_from_json(const json& j) {
  if (!j.is_object()) throw CorpusError("record must be an object");
  AnnotatedSample s;
  s.id = require_string(j, "id");
  const json& tokens = require(j, "tokens");
  if (!tokens.is_array()) throw CorpusError("field 'tokens' must be an array");
  for (const auto& t : tokens) {
    if (!t.is_string()) throw CorpusError("tokens must be strings");
    s.tokens.push_back(t.get<std::string>());
  }
  const json& events = require(j, "events");
  if (!events.is_array()) throw CorpusError("field 'events' must be an array");
  for (const auto& e : events) {
    if (!e.is_object()) throw CorpusError("event must be an object");
    reject_unknown(e, {"type", "trigger", "arguments"});
    EventMention ev;
    ev.event_type = require_string(e, "type");
    ev.trigger = span_from_json(require(e, "trigger"));
    const json& args = require(e, "arguments");
    if (!args.is_array()) throw CorpusError("field 'arguments' must be an array");
    for (const auto& a : args) {
      if (!a.is_object()) throw CorpusError("argument must be an object");
      reject_unknown(a, {"role", "span"});
      ev.arguments.push_back({require_string(a, "role"), span_from_json(require(a, "span"))});
    }
    s.events.push_back(std::move(ev));
  }
  return s;
}

std::optional<RecordReader::Record> RecordReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      return Record{line_, json::parse(text)};
    } catch (const json::parse_error& e) {
      throw CorpusError(std::string("malformed record: ") + e.what(), line_);
    }
  }
  return std::nullopt;
}

AnnotatedSample decode_sample_record(const RecordReader::Record& rec) {
  AnnotatedSample s;
  try {
    if (rec.value.is_object()) reject_unknown(rec.value, {"id", "tokens", "events", "provenance"});
    s = sample_from_json(rec.value);
  } catch (const CorpusError& e) {
    throw CorpusError(std::string("malformed record: ") + e.what(), rec.line);
  }
  auto violations = validate_sample(s);
  if (!violations.empty()) {
    throw CorpusError("sample '" + s.id + "': " + violations.front(), rec.line);
  }
  return s;
}

Corpus parse_corpus(std::istream& in) {
  Corpus c;
  std::unordered_set<std::string> ids;
  RecordReader reader(in);
  while (auto rec = reader.next()) {
    AnnotatedSample s = decode_sample_record(*rec);
    if (!ids.insert(s.id).second) {
      throw CorpusError("duplicate id '" + s.id + "'", rec->line);
    }
    c.samples.push_back(std::move(s));
  }
  return c;
}

Corpus parse_corpus_string(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return parse_corpus(in);
  } catch (const CorpusError& e) {
    throw CorpusError(path + ": " + e.what());
  }
}

void serialize_corpus(const Corpus& c, std::ostream& out) {
  for (const auto& s : c.samples) out << sample_to_json(s).dump() << '\n';
}

std::string serialize_corpus(const Corpus& c) {
  std::ostringstream out;
  serialize_corpus(c, out);
  return out.str();
}

}  // namespace maskfill
