#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maskfill/corpus.hpp"

namespace maskfill {

struct SplitSpec {
  std::string name;
  std::optional<std::size_t> size;  // nullopt means the whole corpus
  std::uint64_t seed = 1024;
};

/// Parses "NAME=SIZE" or "NAME=all", optionally suffixed ":SEED".
SplitSpec parse_split_spec(const std::string& text, std::uint64_t default_seed);

/// Standard low-resource grid: S=1000, M=4000, L=8000, F=all.
std::vector<SplitSpec> default_low_resource_splits(std::uint64_t seed);

/// Indices chosen by a seeded Fisher-Yates shuffle, truncated and sorted.
std::vector<std::size_t> subsample_indices(std::size_t corpus_size, std::size_t size,
                                           std::uint64_t seed);

/// Uniform sample without replacement, original order preserved.
/// Throws SizeExceedsCorpus when the requested size is too large.
Corpus subsample(const Corpus& c, const SplitSpec& spec);

struct ManifestEntry {
  std::string name;
  std::size_t size = 0;
  std::uint64_t seed = 0;
  std::string file;
  std::string digest;
};

struct Manifest {
  std::string digest_algorithm = "sha256";
  std::string role = "train";
  std::vector<ManifestEntry> splits;
};

nlohmann::json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& j);

/// Throws Error when `role` is dev or test; only training data is subsampled.
void require_trainable_role(const std::string& role);

/// Role recorded for `file` in a manifest, or "train" when the file is not listed.
std::string role_in_manifest(const nlohmann::json& manifest, const std::string& file);

/// Writes one corpus file per spec ("<name>.corpus") and "manifest.json"
/// into out_dir, each atomically. Returns the manifest.
Manifest export_experiment(const Corpus& c, const std::vector<SplitSpec>& specs,
                           const std::string& out_dir);

}  // namespace maskfill
