#include "maskfill/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>

#include "maskfill/errors.hpp"
#include "maskfill/io.hpp"
#include "maskfill/rng.hpp"

namespace maskfill {

using nlohmann::json;

SplitSpec parse_split_spec(const std::string& text, std::uint64_t default_seed) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error("split spec '" + text + "' must look like NAME=SIZE[:SEED]");
  }
  SplitSpec spec;
  spec.name = text.substr(0, eq);
  spec.seed = default_seed;
  std::string rest = text.substr(eq + 1);
  if (auto colon = rest.find(':'); colon != std::string::npos) {
    try {
      spec.seed = std::stoull(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error("bad seed in split spec '" + text + "'");
    }
    rest.resize(colon);
  }
  if (rest != "all") {
    std::size_t used = 0;
    try {
      spec.size = std::stoull(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) throw Error("bad size in split spec '" + text + "'");
  }
  return spec;
}

std::vector<SplitSpec> default_low_resource_splits(std::uint64_t seed) {
  return {{"S", 1000, seed}, {"M", 4000, seed}, {"L", 8000, seed}, {"F", std::nullopt, seed}};
}

std::vector<std::size_t> subsample_indices(std::size_t corpus_size, std::size_t size,
                                           std::uint64_t seed) {
  if (size > corpus_size) {
    throw SizeExceedsCorpus("requested " + std::to_string(size) + " samples from a corpus of " +
                            std::to_string(corpus_size));
  }
  std::vector<std::size_t> idx(corpus_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  // Partial shuffle: position i receives a uniform pick from the unshuffled tail.
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + rng.uniform_below(corpus_size - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Corpus subsample(const Corpus& c, const SplitSpec& spec) {
  if (!spec.size) return c;
  Corpus out;
  for (auto i : subsample_indices(c.samples.size(), *spec.size, spec.seed)) {
    out.samples.push_back(c.samples[i]);
  }
  return out;
}

json manifest_to_json(const Manifest& m) {
  json splits = json::array();
  for (const auto& e : m.splits) {
    splits.push_back({{"name", e.name},
                      {"size", e.size},
                      {"seed", e.seed},
                      {"file", e.file},
                      {"digest", e.digest}});
  }
  return {{"digest_algorithm", m.digest_algorithm}, {"role", m.role}, {"splits", splits}};
}

Manifest manifest_from_json(const json& j) {
  Manifest m;
  try {
    m.digest_algorithm = j.at("digest_algorithm").get<std::string>();
    m.role = j.value("role", "train");
    for (const auto& e : j.at("splits")) {
      m.splits.push_back({e.at("name").get<std::string>(), e.at("size").get<std::size_t>(),
                          e.at("seed").get<std::uint64_t>(), e.at("file").get<std::string>(),
                          e.at("digest").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void require_trainable_role(const std::string& role) {
  if (role == "dev" || role == "test") {
    throw Error("refusing to subsample a " + role + " split; only training data is augmented");
  }
}

std::string role_in_manifest(const json& manifest, const std::string& file) {
  const std::string base = std::filesystem::path(file).filename().string();
  if (!manifest.is_object()) return "train";
  const std::string top_role = manifest.value("role", "train");
  if (auto it = manifest.find("splits"); it != manifest.end() && it->is_array()) {
    for (const auto& e : *it) {
      const std::string f = e.value("file", "");
      if (f == file || f == base) return e.value("role", top_role);
    }
  }
  return "train";
}

Manifest export_experiment(const Corpus& c, const std::vector<SplitSpec>& specs,
                           const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::set<std::string> names;
  for (const auto& s : specs) {
    if (s.name.empty() || s.name.find('/') != std::string::npos) {
      throw Error("invalid split name '" + s.name + "'");
    }
    if (!names.insert(s.name).second) throw Error("duplicate split name '" + s.name + "'");
    if (s.size && *s.size > c.samples.size()) {
      throw SizeExceedsCorpus("split '" + s.name + "' asks for " + std::to_string(*s.size) +
                              " samples from a corpus of " + std::to_string(c.samples.size()));
    }
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  Manifest m;
  for (const auto& spec : specs) {
    const Corpus part = subsample(c, spec);
    const std::string text = serialize_corpus(part);
    const std::string file = spec.name + ".corpus";
    write_file_atomic((fs::path(out_dir) / file).string(), text);
    m.splits.push_back({spec.name, part.samples.size(), spec.seed, file, sha256_hex(text)});
  }
  write_file_atomic((fs::path(out_dir) / "manifest.json").string(),
                    manifest_to_json(m).dump() + "\n");
  return m;
}

}  // namespace maskfill
