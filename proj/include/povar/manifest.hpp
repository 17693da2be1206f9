#pragma once
// Run manifests: every CLI invocation that writes files also writes one JSON
// manifest referencing those files plus git-style content hashes, so any
// output can be traced back to its exact inputs and seed.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace povar {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha1_hex(const void* data, std::size_t len);
// Hash of a file's content the way git stores blobs: "blob <size>\0<bytes>".
std::string git_blob_sha1(const std::string& content);

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  std::string config_path;
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::pair<std::string, std::string>> outputs;  // path, blob hash
  std::string notes;
};

std::string utc_timestamp_now();
std::string read_file(const std::string& path);
void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace povar
