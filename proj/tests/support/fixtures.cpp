#include "fixtures.hpp"

#include <algorithm>
#include <sstream>

namespace maskfill::testing {

namespace {

std::vector<std::string> split(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng.uniform_below(items.size())];
}

struct EventTemplate {
  std::string type;
  std::vector<std::string> triggers;
  std::string agent_role;
  std::string place_role;
};

const std::vector<EventTemplate>& templates() {
  static const std::vector<EventTemplate> t = {
      {"Movement:Transport", {"left", "traveled", "arrived", "moved", "returned"}, "Artifact",
       "Destination"},
      {"Conflict:Attack", {"attacked", "bombed", "fired", "raided", "shelled"}, "Attacker",
       "Place"},
      {"Contact:Meet", {"met", "talked", "gathered", "convened"}, "Entity", "Place"},
      {"Life:Die", {"died", "perished", "drowned"}, "Victim", "Place"},
      {"Personnel:Elect", {"won", "triumphed", "prevailed"}, "Person", "Place"},
  };
  return t;
}

const std::vector<std::string> kAgents = {
    "Mike",          "the soldiers",    "rebel forces", "the president", "two men",
    "the delegation", "local officials", "the convoy",  "Sarah",         "the militants",
    "a spokesman",   "the coalition",   "three workers"};
const std::vector<std::string> kPlaces = {
    "this town",    "Baghdad",        "the capital",   "northern Iraq", "the border",
    "a village",    "the city center", "Washington",   "the airport",   "the base",
    "southern provinces"};
const std::vector<std::string> kTimes = {"yesterday", "on Tuesday", "last week", "this morning",
                                         "overnight", "in March", "on Sunday evening"};
const std::vector<std::string> kAdjuncts = {
    "the police said",   "according to reports", "officials confirmed", "reportedly",
    ", witnesses said ,", "it was reported that", "in a statement",     "sources told reporters",
    "once again",        "as expected",           "despite the rain",   "for the first time",
    "after a long delay", "with little warning"};

struct Builder {
  AnnotatedSample s;
  Span append(const std::string& text) {
    const auto toks = split(text);
    Span sp{s.tokens.size(), s.tokens.size() + toks.size()};
    s.tokens.insert(s.tokens.end(), toks.begin(), toks.end());
    return sp;
  }
};

void add_clause(Builder& b, Rng& rng, bool with_event) {
  if (rng.uniform01() < 0.4) b.append(pick(rng, kAdjuncts));
  if (!with_event) {
    b.append(pick(rng, kAgents));
    b.append(pick(rng, std::vector<std::string>{"remained", "stayed", "waited", "spoke"}));
    if (rng.uniform01() < 0.5) b.append(pick(rng, kAdjuncts));
    return;
  }
  const auto& tpl = pick(rng, templates());
  EventMention ev;
  ev.event_type = tpl.type;
  ev.arguments.push_back({tpl.agent_role, b.append(pick(rng, kAgents))});
  if (rng.uniform01() < 0.3) b.append(pick(rng, kAdjuncts));
  ev.trigger = b.append(pick(rng, tpl.triggers));
  if (rng.uniform01() < 0.7) {
    b.append(pick(rng, std::vector<std::string>{"in", "near", "to", "at"}));
    ev.arguments.push_back({tpl.place_role, b.append(pick(rng, kPlaces))});
  }
  if (rng.uniform01() < 0.6) ev.arguments.push_back({"Time", b.append(pick(rng, kTimes))});
  if (rng.uniform01() < 0.5) b.append(pick(rng, kAdjuncts));
  b.s.events.push_back(std::move(ev));
}

}  // namespace

AnnotatedSample transport_sample() {
  AnnotatedSample s;
  s.id = "mike";
  s.tokens = {"Mike", "left", "this", "town", "yesterday", "."};
  s.events.push_back({"Transport",
                      {1, 2},
                      {{"Artifact", {0, 1}}, {"Destination", {2, 4}}, {"Time", {4, 5}}}});
  return s;
}

Corpus synthetic_corpus(std::size_t n, std::uint64_t seed) {
  Corpus c;
  Rng rng(seed);
  char id[32];
  for (std::size_t i = 0; i < n; ++i) {
    Builder b;
    std::snprintf(id, sizeof id, "s%04zu", i);
    b.s.id = id;
    const double r = rng.uniform01();
    const std::size_t events = r < 0.08 ? 0 : (r < 0.8 ? 1 : 2);
    add_clause(b, rng, events >= 1);
    if (events == 2) {
      b.append(pick(rng, std::vector<std::string>{"and", ", while", "; meanwhile ,", "after"}));
      add_clause(b, rng, true);
    } else if (events == 0 && rng.uniform01() < 0.5) {
      b.append("and");
      add_clause(b, rng, false);
    }
    b.append(".");
    c.samples.push_back(std::move(b.s));
  }
  return c;
}

namespace {

AnnotatedSample random_with_tokens(Rng& rng, std::vector<std::string> tokens,
                                   std::size_t max_events) {
  AnnotatedSample s;
  s.id = "r";
  s.tokens = std::move(tokens);
  const std::size_t n = s.tokens.size();
  const std::size_t events = rng.uniform_below(max_events + 1);
  auto random_span = [&](std::size_t max_len) {
    const std::size_t start = rng.uniform_below(n);
    const std::size_t len = 1 + rng.uniform_below(std::min(max_len, n - start));
    return Span{start, start + len};
  };
  for (std::size_t e = 0; e < events; ++e) {
    EventMention ev;
    ev.event_type = "E" + std::to_string(e);
    ev.trigger = random_span(2);
    const std::size_t args = rng.uniform_below(3);
    for (std::size_t a = 0; a < args; ++a) {
      Span sp = random_span(3);
      if (sp.overlaps(ev.trigger)) continue;
      ev.arguments.push_back({"R" + std::to_string(a), sp});
    }
    s.events.push_back(std::move(ev));
  }
  return s;
}

}  // namespace

AnnotatedSample random_sample(Rng& rng, std::size_t max_tokens, std::size_t max_events,
                              std::size_t vocab) {
  const std::size_t n = 1 + rng.uniform_below(max_tokens);
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < n; ++i) {
    tokens.push_back(std::string(1, static_cast<char>('a' + rng.uniform_below(vocab))));
  }
  return random_with_tokens(rng, std::move(tokens), max_events);
}

AnnotatedSample random_unique_sample(Rng& rng, std::size_t max_tokens, std::size_t max_events) {
  const std::size_t n = 1 + rng.uniform_below(max_tokens);
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < n; ++i) tokens.push_back("t" + std::to_string(i));
  return random_with_tokens(rng, std::move(tokens), max_events);
}

std::vector<std::vector<std::string>> plain_sentences(std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<std::string>> out;
  for (auto& s : synthetic_corpus(n, seed).samples) out.push_back(std::move(s.tokens));
  return out;
}

}  // namespace maskfill::testing
