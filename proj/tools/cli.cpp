#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "maskfill/augment.hpp"
#include "maskfill/corpus.hpp"
#include "maskfill/errors.hpp"
#include "maskfill/fragmenter.hpp"
#include "maskfill/harness.hpp"
#include "maskfill/io.hpp"
#include "maskfill/metrics.hpp"
#include "maskfill/ngram.hpp"
#include "maskfill/remote.hpp"

namespace maskfill::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kEndpointEnv = "MASKFILL_ENDPOINT";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;

  std::string in;
  std::string out;
  std::string model;
  std::string lexicon;
  std::string corpus_in;
  std::string orig;
  std::string aug;
  std::string table;
  std::string out_dir;
  std::string manifest;
  std::string role = "train";
  std::vector<std::string> splits;
  bool grid = false;

  std::string backend = "native-ngram";
  std::string scorer = "native-ngram";
  std::string endpoint = "http://127.0.0.1:8080";
  std::size_t max_in_flight = 4;

  std::size_t order = 3;
  double smoothing = 0.01;

  std::uint64_t seed = 1024;
  std::size_t n_aug = 1;
  std::size_t top_k = 100;
  double top_p = 0.7;
  std::size_t beam_size = 5;
  std::size_t num_candidates = 1;
  std::size_t min_fill_len = 1;
  std::size_t max_fill_len = 10;
  std::size_t min_mask_len = 1;
  std::size_t max_mask_len = 10;
  std::size_t retries = 5;
  std::size_t workers = 1;
  std::string mask_token = kDefaultMaskToken;
  double p_replace = 0.3;
};

struct Context {
  Options opt;
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> inputs;

  void log(const std::string& msg) const { err << "maskfill: " << msg << '\n'; }

  std::string require_path(const std::string& value, const std::string& flag) {
    if (value.empty()) throw UsageError("missing required option " + flag);
    if (!fs::exists(value)) throw IoError(flag + ": no such file " + value);
    inputs.push_back(value);
    return value;
  }

  /// Writes data to the --out path (atomically) or to standard output.
  void emit(const std::string& path, const std::string& text) const {
    if (path.empty()) {
      out << text;
      return;
    }
    std::error_code ec;
    const auto target = fs::weakly_canonical(path, ec);
    for (const auto& in : inputs) {
      if (fs::weakly_canonical(in, ec) == target) {
        throw UsageError("refusing to overwrite input file " + in);
      }
    }
    write_file_atomic(path, text);
  }
};

std::vector<std::string> config_values(const json& v) {
  std::vector<std::string> out;
  auto one = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(one(x));
  } else {
    out.push_back(one(v));
  }
  return out;
}

/// Fills options that were not given on the command line from the config
/// file. Sections named after the active subcommand path take precedence over
/// top-level keys.
void apply_config(const std::vector<CLI::App*>& path, const json& cfg) {
  std::vector<const json*> sections{&cfg};
  const json* node = &cfg;
  for (const auto* app : path) {
    auto it = node->find(app->get_name());
    if (it == node->end() || !it->is_object()) break;
    node = &*it;
    sections.push_back(node);
  }
  CLI::App* leaf = path.back();
  for (CLI::Option* opt : leaf->get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty() || opt->get_lnames().front() == "help") {
      continue;
    }
    for (auto s = sections.rbegin(); s != sections.rend(); ++s) {
      const json* found = nullptr;
      for (const auto& name : opt->get_lnames()) {
        std::string alt = name;
        for (auto& c : alt) c = c == '-' ? '_' : c;
        if (auto it = (*s)->find(name); it != (*s)->end() && !it->is_object()) found = &*it;
        else if (auto it2 = (*s)->find(alt); it2 != (*s)->end() && !it2->is_object()) found = &*it2;
        if (found) break;
      }
      if (!found) continue;
      opt->add_result(config_values(*found));
      opt->run_callback();
      break;
    }
  }
}

std::shared_ptr<const NgramModel> native_model(Context& ctx, const std::string& train_corpus) {
  if (!ctx.opt.model.empty()) {
    ctx.require_path(ctx.opt.model, "--model");
    return std::make_shared<const NgramModel>(NgramModel::load(ctx.opt.model));
  }
  std::vector<std::vector<std::string>> sentences;
  for (const auto& s : load_corpus(train_corpus).samples) sentences.push_back(s.tokens);
  return std::make_shared<const NgramModel>(
      NgramModel::train(sentences, ctx.opt.order, ctx.opt.smoothing));
}

std::string effective_endpoint(const Context& ctx, const CLI::App& sub) {
  auto* opt = sub.get_option_no_throw("--endpoint");
  const bool from_flag = opt != nullptr && opt->count() > 0;
  if (!from_flag) {
    if (const char* env = std::getenv(kEndpointEnv); env && *env) return env;
  }
  return ctx.opt.endpoint;
}

RemoteOptions remote_options(const Context& ctx) {
  RemoteOptions r;
  r.max_in_flight = ctx.opt.max_in_flight;
  return r;
}

// --- subcommands -----------------------------------------------------------

int cmd_validate(Context& ctx) {
  const auto path = ctx.require_path(ctx.opt.in, "--in");
  std::ifstream in(path, std::ios::binary);
  RecordReader reader(in);
  std::unordered_set<std::string> ids;
  std::size_t samples = 0, problems = 0;
  while (true) {
    std::optional<RecordReader::Record> rec;
    try {
      rec = reader.next();
    } catch (const CorpusError& e) {
      ctx.log(path + ": " + e.what());
      return kExitData;
    }
    if (!rec) break;
    ++samples;
    AnnotatedSample s;
    try {
      s = sample_from_json(rec->value);
    } catch (const CorpusError& e) {
      ctx.log(path + ": line " + std::to_string(rec->line) + ": malformed record: " + e.what());
      ++problems;
      continue;
    }
    for (const auto& v : validate_sample(s)) {
      ctx.log(path + ": line " + std::to_string(rec->line) + ": sample '" + s.id + "': " + v);
      ++problems;
    }
    if (!ids.insert(s.id).second) {
      ctx.log(path + ": line " + std::to_string(rec->line) + ": duplicate id '" + s.id + "'");
      ++problems;
    }
  }
  if (problems > 0) {
    ctx.log(std::to_string(problems) + " problem(s) in " + std::to_string(samples) + " samples");
    return kExitData;
  }
  ctx.out << "ok " << samples << " samples\n";
  return kExitOk;
}

int cmd_fragments(Context& ctx) {
  const Corpus c = load_corpus(ctx.require_path(ctx.opt.in, "--in"));
  std::ostringstream text;
  for (const auto& s : c.samples) {
    json frags = json::array();
    for (const auto& f : compute_adjunct_fragments(s)) frags.push_back(span_to_json(f.span));
    text << json{{"id", s.id}, {"fragments", frags}}.dump() << '\n';
  }
  ctx.emit(ctx.opt.out, text.str());
  return kExitOk;
}

int cmd_mask(Context& ctx) {
  const Corpus c = load_corpus(ctx.require_path(ctx.opt.in, "--in"));
  MaskConfig mc{ctx.opt.min_mask_len, ctx.opt.max_mask_len, ctx.opt.mask_token};
  std::ostringstream text;
  for (const auto& s : c.samples) {
    Rng rng = Rng::derive(ctx.opt.seed, s.id, 0);
    try {
      text << masked_sample_to_json(select_and_mask(s, rng, mc)).dump() << '\n';
    } catch (const NoEligibleFragment& e) {
      ctx.log(std::string("skipped: ") + e.what());
    }
  }
  ctx.emit(ctx.opt.out, text.str());
  return kExitOk;
}

int cmd_gen_infill_data(Context& ctx) {
  const auto sentences = read_plain_sentences(ctx.require_path(ctx.opt.in, "--in"));
  std::ostringstream text;
  for (const auto& ex : generate_infill_training_examples(sentences, ctx.opt.seed,
                                                          ctx.opt.mask_token)) {
    text << infill_example_to_json(ex).dump() << '\n';
  }
  ctx.emit(ctx.opt.out, text.str());
  return kExitOk;
}

int cmd_train_ngram(Context& ctx) {
  std::vector<std::vector<std::string>> sentences;
  if (!ctx.opt.in.empty()) sentences = read_plain_sentences(ctx.require_path(ctx.opt.in, "--in"));
  if (!ctx.opt.corpus_in.empty()) {
    for (const auto& s : load_corpus(ctx.require_path(ctx.opt.corpus_in, "--corpus-in")).samples) {
      sentences.push_back(s.tokens);
    }
  }
  if (ctx.opt.in.empty() && ctx.opt.corpus_in.empty()) {
    throw UsageError("train-ngram needs --in or --corpus-in");
  }
  const auto model = NgramModel::train(sentences, ctx.opt.order, ctx.opt.smoothing);
  ctx.emit(ctx.opt.out, model.to_json().dump() + "\n");
  return kExitOk;
}

AugmentConfig augment_config(const Context& ctx, const Corpus& c) {
  const auto& o = ctx.opt;
  if (o.n_aug < 1) throw UsageError("--n-aug must be at least 1");
  if (o.min_fill_len < 1 || o.max_fill_len < o.min_fill_len) {
    throw UsageError("need 1 <= --min-fill-len <= --max-fill-len");
  }
  if (o.min_mask_len < 1 || o.max_mask_len < o.min_mask_len) {
    throw UsageError("need 1 <= --min-mask-len <= --max-mask-len");
  }
  AugmentConfig cfg;
  cfg.mask = {o.min_mask_len, o.max_mask_len, o.mask_token};
  cfg.filter.banned_lexemes = harvest_trigger_lexemes(c);
  cfg.filter.min_fill_len = o.min_fill_len;
  cfg.filter.max_fill_len = o.max_fill_len;
  cfg.filter.mask_token = o.mask_token;
  cfg.n_aug = o.n_aug;
  cfg.retries = o.retries;
  cfg.num_candidates = o.num_candidates;
  cfg.top_k = o.top_k;
  cfg.top_p = o.top_p;
  cfg.beam_size = o.beam_size;
  cfg.seed = o.seed;
  return cfg;
}

int cmd_augment(Context& ctx, const CLI::App& sub) {
  const auto path = ctx.require_path(ctx.opt.in, "--in");
  const Corpus c = load_corpus(path);
  const AugmentConfig cfg = augment_config(ctx, c);

  std::unique_ptr<Infiller> backend;
  if (ctx.opt.backend == "native-ngram") {
    backend = std::make_unique<NgramBackend>(native_model(ctx, path));
  } else if (ctx.opt.backend == "remote") {
    auto remote = std::make_unique<RemoteBackend>(effective_endpoint(ctx, sub), remote_options(ctx));
    ctx.log("remote model " + remote->health() + " at " + remote->endpoint());
    backend = std::move(remote);
  } else {
    throw UsageError("unknown backend '" + ctx.opt.backend + "'");
  }

  const AugmentResult result = augment_corpus(c, *backend, cfg, ctx.opt.workers);
  for (const auto& note : result.notes) ctx.log(note);
  ctx.log("wrote " + std::to_string(result.samples.size()) + " augmented samples from " +
          std::to_string(c.samples.size()) + " sources");
  ctx.emit(ctx.opt.out, serialize_augmented(result.samples));
  return kExitOk;
}

int cmd_synonym(Context& ctx) {
  const Corpus c = load_corpus(ctx.require_path(ctx.opt.in, "--in"));
  const auto lexicon = load_synonym_lexicon(ctx.require_path(ctx.opt.lexicon, "--lexicon"));
  if (!(ctx.opt.p_replace >= 0.0 && ctx.opt.p_replace <= 1.0)) {
    throw UsageError("--p-replace must lie in [0, 1]");
  }
  std::vector<AugmentedSample> out;
  for (const auto& s : c.samples) {
    for (std::size_t j = 0; j < ctx.opt.n_aug; ++j) {
      const auto stream = derive_seed(ctx.opt.seed, s.id, j);
      Rng rng(stream);
      auto a = synonym_replacement(s, lexicon, ctx.opt.p_replace, rng, j);
      a.provenance.seed = stream;
      out.push_back(std::move(a));
    }
  }
  ctx.emit(ctx.opt.out, serialize_augmented(out));
  return kExitOk;
}

int cmd_backtranslate(Context& ctx, const CLI::App& sub) {
  const Corpus c = load_corpus(ctx.require_path(ctx.opt.in, "--in"));
  RemoteBackend translator(effective_endpoint(ctx, sub), remote_options(ctx));
  const MaskConfig mc{ctx.opt.min_mask_len, ctx.opt.max_mask_len, ctx.opt.mask_token};
  std::vector<AugmentedSample> out;
  for (const auto& s : c.samples) {
    for (std::size_t j = 0; j < ctx.opt.n_aug; ++j) {
      const auto stream = derive_seed(ctx.opt.seed, s.id, j);
      Rng rng(stream);
      try {
        auto a = span_backtranslation(s, translator, rng, mc, j);
        a.provenance.seed = stream;
        out.push_back(std::move(a));
      } catch (const NoEligibleFragment& e) {
        ctx.log(std::string("skipped: ") + e.what());
        break;
      } catch (const BackendUnavailable& e) {
        ctx.log("sample '" + s.id + "' skipped: " + e.what());
        break;
      }
    }
  }
  ctx.emit(ctx.opt.out, serialize_augmented(out));
  return kExitOk;
}

int cmd_metrics(Context& ctx, const CLI::App& sub) {
  const auto orig_path = ctx.require_path(ctx.opt.orig, "--orig");
  const Corpus orig = load_corpus(orig_path);
  const auto aug = load_augmented(ctx.require_path(ctx.opt.aug, "--aug"));

  std::unique_ptr<Scorer> scorer;
  if (ctx.opt.scorer == "native-ngram") {
    scorer = std::make_unique<NgramBackend>(native_model(ctx, orig_path));
  } else if (ctx.opt.scorer == "remote") {
    scorer = std::make_unique<RemoteBackend>(effective_endpoint(ctx, sub), remote_options(ctx));
  } else {
    throw UsageError("unknown scorer '" + ctx.opt.scorer + "'");
  }
  const MetricsReport report = evaluate_pair_corpus(orig, aug, *scorer);
  if (!ctx.opt.table.empty()) ctx.emit(ctx.opt.table, report_table(report));
  ctx.emit(ctx.opt.out, report_to_json(report).dump() + "\n");
  return kExitOk;
}

int cmd_subsample(Context& ctx) {
  const auto path = ctx.require_path(ctx.opt.in, "--in");
  if (ctx.opt.out_dir.empty()) throw UsageError("missing required option --out-dir");
  require_trainable_role(ctx.opt.role);
  if (!ctx.opt.manifest.empty()) {
    const json m = json::parse(read_file(ctx.require_path(ctx.opt.manifest, "--manifest")));
    require_trainable_role(role_in_manifest(m, path));
  }
  std::vector<SplitSpec> specs;
  if (ctx.opt.grid) specs = default_low_resource_splits(ctx.opt.seed);
  for (const auto& s : ctx.opt.splits) {
    try {
      specs.push_back(parse_split_spec(s, ctx.opt.seed));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const Corpus c = load_corpus(path);
  for (const auto& input : ctx.inputs) {
    std::error_code ec;
    if (fs::weakly_canonical(input, ec).parent_path() == fs::weakly_canonical(ctx.opt.out_dir, ec)) {
      throw UsageError("--out-dir must not contain the input files");
    }
  }
  const Manifest m = export_experiment(c, specs, ctx.opt.out_dir);
  for (const auto& e : m.splits) ctx.log(e.name + ": " + std::to_string(e.size) + " samples");
  return kExitOk;
}

// --- argument wiring --------------------------------------------------------

void add_in(CLI::App* app, Options& o, const std::string& help) {
  app->add_option("--in", o.in, help);
}

void add_out(CLI::App* app, Options& o) {
  app->add_option("--out", o.out, "Output file (standard output when omitted)");
}

void add_seed(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "Global random seed");
}

void add_mask_opts(CLI::App* app, Options& o) {
  app->add_option("--min-mask-len", o.min_mask_len, "Shortest fragment eligible for masking");
  app->add_option("--max-mask-len", o.max_mask_len, "Longest fragment eligible for masking");
  app->add_option("--mask-token", o.mask_token, "Mask placeholder token");
}

void add_ngram_opts(CLI::App* app, Options& o) {
  app->add_option("--model", o.model,
                  "Trained n-gram model (trained on the input corpus when omitted)");
  app->add_option("--order", o.order, "n-gram order when training on the fly")
      ->check(CLI::Range(2, 16));
  app->add_option("--smoothing", o.smoothing, "Add-k smoothing constant when training on the fly")
      ->check(CLI::NonNegativeNumber);
}

void add_remote_opts(CLI::App* app, Options& o) {
  app->add_option("--endpoint", o.endpoint,
                  std::string("Remote service URL (overridden by $") + kEndpointEnv +
                      " unless given as a flag)");
  app->add_option("--max-in-flight", o.max_in_flight, "Concurrent remote requests")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{Options{}, out, err, {}};
  Options& o = ctx.opt;

  CLI::App app{"Mask-then-Fill data augmentation for event-extraction corpora", "maskfill"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config,
                 "JSON config; top-level keys or per-subcommand sections supply flag values");

  auto* validate = app.add_subcommand("validate", "Check a corpus against the schema and invariants");
  add_in(validate, o, "Corpus file");

  auto* fragments = app.add_subcommand("fragments", "List adjunct fragments per sample");
  add_in(fragments, o, "Corpus file");
  add_out(fragments, o);

  auto* mask = app.add_subcommand("mask", "Mask one eligible adjunct fragment per sample");
  add_in(mask, o, "Corpus file");
  add_out(mask, o);
  add_seed(mask, o);
  add_mask_opts(mask, o);

  auto* gen = app.add_subcommand("gen-infill-data", "Build infilling training examples from plain text");
  add_in(gen, o, "Plain text, one whitespace-tokenized sentence per line");
  add_out(gen, o);
  add_seed(gen, o);
  gen->add_option("--mask-token", o.mask_token, "Mask placeholder token");

  auto* train = app.add_subcommand("train-ngram", "Train the native n-gram infilling model");
  add_in(train, o, "Plain text, one whitespace-tokenized sentence per line");
  train->add_option("--corpus-in", o.corpus_in, "Also train on the tokens of a corpus file");
  add_out(train, o);
  train->add_option("--order", o.order, "n-gram order")->check(CLI::Range(2, 16));
  train->add_option("--smoothing", o.smoothing, "Add-k smoothing constant")
      ->check(CLI::NonNegativeNumber);

  auto* augment = app.add_subcommand("augment", "Mask-then-Fill augmentation");
  add_in(augment, o, "Training corpus");
  add_out(augment, o);
  add_seed(augment, o);
  augment->add_option("--backend", o.backend, "Infilling backend")
      ->check(CLI::IsMember({"native-ngram", "remote"}));
  add_ngram_opts(augment, o);
  add_remote_opts(augment, o);
  augment->add_option("--n-aug", o.n_aug, "Augmentations per sample (grid: 1, 3, 6, 10)");
  augment->add_option("--top-k", o.top_k, "Top-k truncation")->check(CLI::PositiveNumber);
  augment->add_option("--top-p", o.top_p, "Top-p truncation")->check(CLI::Range(1e-12, 1.0));
  augment->add_option("--beam-size", o.beam_size, "Beam size (remote backend only)");
  augment->add_option("--num-candidates", o.num_candidates, "Candidates requested per fill")
      ->check(CLI::PositiveNumber);
  augment->add_option("--min-fill-len", o.min_fill_len, "Shortest accepted fill");
  augment->add_option("--max-fill-len", o.max_fill_len, "Longest accepted fill");
  add_mask_opts(augment, o);
  augment->add_option("--retries", o.retries, "Retries per requested augmentation");
  augment->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* baseline = app.add_subcommand("baseline", "Baseline augmenters");
  baseline->require_subcommand(1);
  auto* synonym = baseline->add_subcommand("synonym", "Synonym replacement of adjunct tokens");
  add_in(synonym, o, "Training corpus");
  add_out(synonym, o);
  add_seed(synonym, o);
  synonym->add_option("--lexicon", o.lexicon, "Lexicon: headword<TAB>syn1,syn2,...");
  synonym->add_option("--p-replace", o.p_replace, "Replacement probability per adjunct token");
  synonym->add_option("--n-aug", o.n_aug, "Augmentations per sample");
  auto* backtranslate =
      baseline->add_subcommand("backtranslate", "Round-trip translation of one adjunct span");
  add_in(backtranslate, o, "Training corpus");
  add_out(backtranslate, o);
  add_seed(backtranslate, o);
  add_remote_opts(backtranslate, o);
  add_mask_opts(backtranslate, o);
  backtranslate->add_option("--n-aug", o.n_aug, "Augmentations per sample");

  auto* metrics = app.add_subcommand("metrics", "Affinity and Dist-1/2 of an augmented corpus");
  metrics->add_option("--orig", o.orig, "Original corpus");
  metrics->add_option("--aug", o.aug, "Augmented corpus");
  metrics->add_option("--scorer", o.scorer, "Scoring backend")
      ->check(CLI::IsMember({"native-ngram", "remote"}));
  add_ngram_opts(metrics, o);
  add_remote_opts(metrics, o);
  add_out(metrics, o);
  metrics->add_option("--table", o.table, "Also write a plain-text summary table here");

  auto* sub = app.add_subcommand("subsample", "Export low-resource training splits");
  add_in(sub, o, "Training corpus");
  sub->add_option("--split", o.splits, "NAME=SIZE[:SEED] or NAME=all (repeatable)");
  sub->add_flag("--grid", o.grid, "Add the S=1000, M=4000, L=8000, F=all grid");
  add_seed(sub, o);
  sub->add_option("--out-dir", o.out_dir, "Directory for split files and manifest.json");
  sub->add_option("--role", o.role, "Role of the input file (dev and test are refused)");
  sub->add_option("--manifest", o.manifest, "Manifest describing the input file's role");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "maskfill: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<CLI::App*> path;
  for (CLI::App* a = &app; !a->get_subcommands().empty();) {
    a = a->get_subcommands().front();
    path.push_back(a);
  }

  try {
    if (!o.config.empty()) {
      json cfg;
      try {
        cfg = json::parse(read_file(o.config));
      } catch (const json::parse_error& e) {
        throw UsageError("config " + o.config + ": " + e.what());
      }
      if (!cfg.is_object()) throw UsageError("config " + o.config + " must hold an object");
      try {
        apply_config(path, cfg);
      } catch (const CLI::ParseError& e) {
        throw UsageError("config " + o.config + ": " + e.what());
      }
      ctx.inputs.push_back(o.config);
    }

    CLI::App* leaf = path.back();
    if (leaf == validate) return cmd_validate(ctx);
    if (leaf == fragments) return cmd_fragments(ctx);
    if (leaf == mask) return cmd_mask(ctx);
    if (leaf == gen) return cmd_gen_infill_data(ctx);
    if (leaf == train) return cmd_train_ngram(ctx);
    if (leaf == augment) return cmd_augment(ctx, *augment);
    if (leaf == synonym) return cmd_synonym(ctx);
    if (leaf == backtranslate) return cmd_backtranslate(ctx, *backtranslate);
    if (leaf == metrics) return cmd_metrics(ctx, *metrics);
    if (leaf == sub) return cmd_subsample(ctx);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    ctx.log(e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    ctx.log(e.what());
    return kExitData;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

int run(int argc, char** argv) { return run(argc, const_cast<const char* const*>(argv)); }

}  // namespace maskfill::cli
