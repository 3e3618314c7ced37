#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "maskfill/augment.hpp"
#include "maskfill/io.hpp"
#include "stub_server.hpp"

using namespace maskfill;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("maskfill_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    write("train.corpus", serialize_corpus(testing::synthetic_corpus(60, 3)));
    std::string plain;
    for (const auto& s : testing::plain_sentences(80, 4)) {
      for (std::size_t i = 0; i < s.size(); ++i) plain += (i ? " " : "") + s[i];
      plain += "\n";
    }
    write("plain.txt", plain);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    write_file_atomic(path(name), text);
  }
  std::string read(const std::string& name) const { return read_file(path(name)); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"augment", "--no-such-flag"}).code == cli::kExitUsage);
  CHECK(run({"augment", "--backend", "gpt"}).code == cli::kExitUsage);
  CHECK(run({"validate"}).code == cli::kExitUsage);
}

TEST_CASE("--help lists flags with their defaults") {
  const auto r = run({"augment", "--help"});
  CHECK(r.code == 0);
  for (const char* needle : {"--n-aug", "--top-k", "100", "--top-p", "0.7", "--max-fill-len",
                             "--retries", "5", "--seed", "1024", "--workers", "--backend",
                             "native-ngram", "--smoothing", "0.01", "--beam-size"}) {
    CHECK_MESSAGE(r.out.find(needle) != std::string::npos, needle);
  }
  CHECK(run({"--help"}).out.find("subsample") != std::string::npos);
}

TEST_CASE("validate") {
  Workspace ws;
  auto ok = run({"validate", "--in", ws.path("train.corpus")});
  CHECK(ok.code == 0);
  CHECK(ok.out == "ok 60 samples\n");

  ws.write("bad.corpus",
           R"({"id":"good","tokens":["a"],"events":[]})"
           "\n"
           R"({"id":"broken","tokens":["a","b","c","d","e","f"],"events":[{"type":"T","trigger":[5,7],"arguments":[]}]})"
           "\n");
  const auto bad = run({"validate", "--in", ws.path("bad.corpus")});
  CHECK(bad.code == cli::kExitData);
  CHECK(bad.err.find("'broken'") != std::string::npos);
  CHECK(bad.err.find("trigger") != std::string::npos);
  CHECK(bad.err.find("line 2") != std::string::npos);

  CHECK(run({"validate", "--in", ws.path("missing.corpus")}).code == cli::kExitData);
}

TEST_CASE("fragments, mask and gen-infill-data") {
  Workspace ws;
  const auto frags = run({"fragments", "--in", ws.path("train.corpus")});
  CHECK(frags.code == 0);
  CHECK(std::count(frags.out.begin(), frags.out.end(), '\n') == 60);

  CHECK(run({"mask", "--in", ws.path("train.corpus"), "--out", ws.path("masked.jsonl"), "--seed", "3"}).code == 0);
  RecordReader::Record rec;
  {
    std::istringstream in(ws.read("masked.jsonl"));
    RecordReader reader(in);
    auto first = reader.next();
    REQUIRE(first);
    rec = *first;
  }
  const auto masked = rec.value["tokens_with_mask"].get<std::vector<std::string>>();
  const auto target = rec.value["target"].get<std::vector<std::string>>();
  CHECK(splice_fill(masked, target) == testing::synthetic_corpus(60, 3).samples[0].tokens);

  CHECK(run({"gen-infill-data", "--in", ws.path("plain.txt"), "--out", ws.path("infill.jsonl")}).code == 0);
  std::istringstream in(ws.read("infill.jsonl"));
  RecordReader reader(in);
  std::size_t n = 0;
  while (auto r = reader.next()) {
    CHECK(r->value.contains("masked_text"));
    CHECK(r->value.contains("target"));
    ++n;
  }
  CHECK(n == 80);
}

TEST_CASE("train-ngram then augment with the saved model") {
  Workspace ws;
  REQUIRE(run({"train-ngram", "--in", ws.path("plain.txt"), "--order", "3", "--out", ws.path("model.json")}).code == 0);
  const auto r = run({"augment", "--in", ws.path("train.corpus"), "--model", ws.path("model.json"),
                      "--n-aug", "3", "--seed", "7", "--out", ws.path("aug.corpus")});
  CHECK(r.code == 0);
  const auto aug = load_augmented(ws.path("aug.corpus"));
  CHECK(aug.size() > 60);
  const Corpus src = load_corpus(ws.path("train.corpus"));
  for (const auto& a : aug) {
    CHECK(validate_sample(a.sample).empty());
    const auto it = std::find_if(src.samples.begin(), src.samples.end(),
                                 [&](const auto& s) { return s.id == a.provenance.source_id; });
    REQUIRE(it != src.samples.end());
    CHECK(surface_violations(*it, a.sample).empty());
  }
}

TEST_CASE("augment is deterministic, with or without workers") {
  Workspace ws;
  const std::vector<std::string> base{"augment", "--in", ws.path("train.corpus"), "--backend",
                                      "native-ngram", "--n-aug", "3", "--seed", "7"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  REQUIRE(run(with({"--out", ws.path("a.corpus")})).code == 0);
  REQUIRE(run(with({"--out", ws.path("b.corpus")})).code == 0);
  REQUIRE(run(with({"--out", ws.path("c.corpus"), "--workers", "4"})).code == 0);
  CHECK(sha256_hex(ws.read("a.corpus")) == sha256_hex(ws.read("b.corpus")));
  CHECK(sha256_hex(ws.read("a.corpus")) == sha256_hex(ws.read("c.corpus")));
  const auto stdout_run = run(base);
  CHECK(stdout_run.out == ws.read("a.corpus"));
}

TEST_CASE("inputs are never overwritten") {
  Workspace ws;
  const std::string before = ws.read("train.corpus");
  const auto r = run({"augment", "--in", ws.path("train.corpus"), "--out", ws.path("train.corpus")});
  CHECK(r.code == cli::kExitUsage);
  CHECK(ws.read("train.corpus") == before);
}

TEST_CASE("config file precedence: flags over config over defaults") {
  Workspace ws;
  ws.write("cfg.json", R"({"seed": 99, "augment": {"n-aug": 2, "seed": 7, "top_k": 50}})");
  REQUIRE(run({"augment", "--config", ws.path("cfg.json"), "--in", ws.path("train.corpus"), "--out",
               ws.path("from_cfg.corpus")})
              .code == 0);
  REQUIRE(run({"augment", "--in", ws.path("train.corpus"), "--n-aug", "2", "--seed", "7", "--top-k",
               "50", "--out", ws.path("from_flags.corpus")})
              .code == 0);
  CHECK(ws.read("from_cfg.corpus") == ws.read("from_flags.corpus"));

  REQUIRE(run({"augment", "--config", ws.path("cfg.json"), "--seed", "8", "--in",
               ws.path("train.corpus"), "--out", ws.path("flag_wins.corpus")})
              .code == 0);
  REQUIRE(run({"augment", "--in", ws.path("train.corpus"), "--n-aug", "2", "--seed", "8", "--top-k",
               "50", "--out", ws.path("flag_ref.corpus")})
              .code == 0);
  CHECK(ws.read("flag_wins.corpus") == ws.read("flag_ref.corpus"));

  ws.write("broken.json", "{nope");
  CHECK(run({"augment", "--config", ws.path("broken.json"), "--in", ws.path("train.corpus")}).code ==
        cli::kExitUsage);
}

TEST_CASE("metrics on an identity augmentation") {
  Workspace ws;
  const auto r = run({"metrics", "--orig", ws.path("train.corpus"), "--aug", ws.path("train.corpus"),
                      "--scorer", "native-ngram", "--table", ws.path("table.txt")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["affinity_mean"].get<double>() == 0.0);
  CHECK(j["counts"]["pairs"] == 60);
  CHECK(ws.read("table.txt").find("dist-1") != std::string::npos);
}

TEST_CASE("subsample") {
  Workspace ws;
  const auto r = run({"subsample", "--in", ws.path("train.corpus"), "--split", "S=10", "--split",
                      "M=20:5", "--split", "F=all", "--out-dir", ws.path("splits")});
  REQUIRE(r.code == 0);
  const auto m = nlohmann::json::parse(ws.read("splits/manifest.json"));
  REQUIRE(m["splits"].size() == 3);
  CHECK(m["splits"][1]["seed"] == 5);
  CHECK(m["splits"][2]["size"] == 60);
  CHECK(load_corpus(ws.path("splits/S.corpus")).samples.size() == 10);

  CHECK(run({"subsample", "--in", ws.path("train.corpus"), "--split", "S=1000", "--out-dir",
             ws.path("too_big")})
            .code == cli::kExitData);
  CHECK(run({"subsample", "--in", ws.path("train.corpus"), "--split", "S=1", "--role", "dev",
             "--out-dir", ws.path("dev")})
            .code == cli::kExitData);
  ws.write("roles.json", R"({"splits":[{"file":"train.corpus","role":"test"}]})");
  CHECK(run({"subsample", "--in", ws.path("train.corpus"), "--split", "S=1", "--manifest",
             ws.path("roles.json"), "--out-dir", ws.path("test")})
            .code == cli::kExitData);
  CHECK(run({"subsample", "--in", ws.path("train.corpus"), "--split", "S=x", "--out-dir",
             ws.path("x")})
            .code == cli::kExitUsage);
}

TEST_CASE("baselines") {
  Workspace ws;
  ws.write("syn.tsv", "said\tstated,noted\nreportedly\tallegedly\n");
  const auto syn = run({"baseline", "synonym", "--in", ws.path("train.corpus"), "--lexicon",
                        ws.path("syn.tsv"), "--p-replace", "1", "--out", ws.path("syn.corpus")});
  REQUIRE(syn.code == 0);
  const auto aug = load_augmented(ws.path("syn.corpus"));
  CHECK(aug.size() == 60);
  for (const auto& a : aug) {
    CHECK(std::find(a.sample.tokens.begin(), a.sample.tokens.end(), "said") == a.sample.tokens.end());
  }

  testing::StubServer server(std::make_shared<const NgramModel>(
      NgramModel::train(testing::plain_sentences(50, 1), 3, 0.01)));
  const auto bt = run({"baseline", "backtranslate", "--in", ws.path("train.corpus"), "--endpoint",
                       server.endpoint(), "--out", ws.path("bt.corpus")});
  REQUIRE(bt.code == 0);
  const auto bt_aug = load_augmented(ws.path("bt.corpus"));
  CHECK(!bt_aug.empty());
  CHECK(bt_aug.size() <= 60);
  for (const auto& a : bt_aug) CHECK(a.provenance.method == "span-backtranslation");
}

TEST_CASE("remote backend end to end, endpoint from the environment") {
  Workspace ws;
  testing::StubServer server(std::make_shared<const NgramModel>(
      NgramModel::train(testing::plain_sentences(200, 1), 3, 0.01)));
  ::setenv("MASKFILL_ENDPOINT", server.endpoint().c_str(), 1);
  const auto r = run({"augment", "--in", ws.path("train.corpus"), "--backend", "remote", "--n-aug",
                      "2", "--out", ws.path("remote.corpus")});
  ::unsetenv("MASKFILL_ENDPOINT");
  REQUIRE(r.code == 0);
  const auto aug = load_augmented(ws.path("remote.corpus"));
  CHECK(!aug.empty());
  for (const auto& a : aug) {
    CHECK(a.provenance.backend_id == "remote:" + server.endpoint());
    CHECK(validate_sample(a.sample).empty());
  }

  server.set_mode(testing::StubServer::Mode::ServerError);
  CHECK(run({"augment", "--in", ws.path("train.corpus"), "--backend", "remote", "--endpoint",
             server.endpoint()})
            .code == cli::kExitData);
}
