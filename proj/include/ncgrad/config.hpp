#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncgrad/serialize.hpp"

namespace ncgrad {

/// Settings shared by the command-line front end and config files. Every
/// field round-trips through to_json / run_config_from_json.
struct RunConfig {
  std::string model = "zoo:depolarizing2";   // "zoo:<name>" or a path to model JSON
  ZooParams params;                          // zoo family parameters
  std::string second_model;                  // tensor-check partner
  std::string mean = "logarithmic";
  std::optional<double> k;                   // defaults to the model's proven constant
  std::string mode = "auto";                 // auto | exact | sampled
  int num_rho = 50;
  std::vector<double> t_grid;                // empty: the default 40-point grid
  std::optional<std::uint64_t> seed;
  int threads = 0;
  int ancilla = 2;
  std::string candidate = "scalar";          // intertwine-check: scalar | direct_sum
  double rate = 1.0;
  int samples = 20;                          // intertwine-check points, mlsi samples
  int restarts = 8;
  int segments = 8;
  int iters = 40;
  std::string output;                        // report path; empty writes to stdout
  std::string trajectory;                    // CSV path for entropy/Fisher trajectories

  /// Throws std::invalid_argument on inconsistent settings (unknown mean or
  /// mode, a sampled mode without a seed, non-positive sizes).
  void validate() const;
  [[nodiscard]] std::uint64_t seed_or_default() const { return seed.value_or(0); }
};

[[nodiscard]] Json to_json(const RunConfig& config);
/// Unknown keys and wrongly typed values throw std::invalid_argument.
[[nodiscard]] RunConfig run_config_from_json(const Json& j);
[[nodiscard]] RunConfig load_run_config(const std::string& path);

/// SHA-1 of "blob <size>\0<content>", as printed by `git hash-object`.
[[nodiscard]] std::string git_blob_sha1(const std::string& content);

struct LoadedModel {
  ZooModel model;
  std::string json_text;   // the document the hash is taken over
  std::string sha1;
};

/// Zoo models are hashed over their serialized JSON (as `zoo build` prints
/// it), files over their raw bytes.
[[nodiscard]] LoadedModel load_model(const std::string& spec, const ZooParams& params = {});
/// Pretty-printed model JSON with a trailing newline.
[[nodiscard]] std::string model_json_text(const ZooModel& model);

}  // namespace ncgrad
