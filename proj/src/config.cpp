#include "ncgrad/config.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include <openssl/sha.h>

namespace ncgrad {

void RunConfig::validate() const {
  (void)OperatorMean::by_name(mean);
  const GEMode parsed = parse_ge_mode(mode);
  if (parsed == GEMode::sampled && !seed) throw std::invalid_argument("config: sampled mode requires a seed");
  if (num_rho < 1) throw std::invalid_argument("config: num_rho must be positive");
  if (ancilla < 1) throw std::invalid_argument("config: ancilla must be positive");
  if (samples < 1) throw std::invalid_argument("config: samples must be positive");
  if (restarts < 1) throw std::invalid_argument("config: restarts must be positive");
  if (segments < 1) throw std::invalid_argument("config: segments must be positive");
  if (iters < 0) throw std::invalid_argument("config: iters must be non-negative");
  if (threads < 0) throw std::invalid_argument("config: threads must be non-negative");
  if (candidate != "scalar" && candidate != "direct_sum") {
    throw std::invalid_argument("config: candidate must be scalar or direct_sum");
  }
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("config: t_grid entries must be positive");
  }
}

Json to_json(const RunConfig& c) {
  Json j;
  j["model"] = c.model;
  j["params"] = c.params;
  j["second_model"] = c.second_model;
  j["mean"] = c.mean;
  j["K"] = c.k ? number(*c.k) : Json(nullptr);
  j["mode"] = c.mode;
  j["num_rho"] = c.num_rho;
  j["t_grid"] = c.t_grid;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["threads"] = c.threads;
  j["ancilla"] = c.ancilla;
  j["candidate"] = c.candidate;
  j["rate"] = c.rate;
  j["samples"] = c.samples;
  j["restarts"] = c.restarts;
  j["segments"] = c.segments;
  j["iters"] = c.iters;
  j["output"] = c.output;
  j["trajectory"] = c.trajectory;
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const std::set<std::string> known = {"model",    "params",  "second_model", "mean",     "K",
                                              "mode",     "num_rho", "t_grid",       "seed",     "threads",
                                              "ancilla",  "candidate", "rate",       "samples",  "restarts",
                                              "segments", "iters",   "output",       "trajectory"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  RunConfig c;
  try {
    if (j.contains("model")) c.model = j.at("model").get<std::string>();
    if (j.contains("params")) {
      for (const auto& [key, value] : j.at("params").items()) {
        c.params[key] = value.is_string() ? value.get<std::string>() : value.dump();
      }
    }
    if (j.contains("second_model")) c.second_model = j.at("second_model").get<std::string>();
    if (j.contains("mean")) c.mean = j.at("mean").get<std::string>();
    if (j.contains("K") && !j.at("K").is_null()) c.k = number_from_json(j.at("K"));
    if (j.contains("mode")) c.mode = j.at("mode").get<std::string>();
    if (j.contains("num_rho")) c.num_rho = j.at("num_rho").get<int>();
    if (j.contains("t_grid")) c.t_grid = j.at("t_grid").get<std::vector<double>>();
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("ancilla")) c.ancilla = j.at("ancilla").get<int>();
    if (j.contains("candidate")) c.candidate = j.at("candidate").get<std::string>();
    if (j.contains("rate")) c.rate = j.at("rate").get<double>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("restarts")) c.restarts = j.at("restarts").get<int>();
    if (j.contains("segments")) c.segments = j.at("segments").get<int>();
    if (j.contains("iters")) c.iters = j.at("iters").get<int>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("trajectory")) c.trajectory = j.at("trajectory").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  const std::string text = read_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "': " + e.what());
  }
  return run_config_from_json(j);
}

std::string git_blob_sha1(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  std::array<unsigned char, SHA_DIGEST_LENGTH> digest{};
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest.data());
  std::ostringstream hex;
  for (unsigned char byte : digest) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(byte);
  return hex.str();
}

std::string model_json_text(const ZooModel& model) { return to_json(model).dump(2) + "\n"; }

LoadedModel load_model(const std::string& spec, const ZooParams& params) {
  constexpr std::string_view prefix = "zoo:";
  if (spec.starts_with(prefix)) {
    ZooModel model = build_model(spec.substr(prefix.size()), params);
    std::string text = model_json_text(model);
    std::string sha = git_blob_sha1(text);
    return {std::move(model), std::move(text), std::move(sha)};
  }
  std::string text = read_file(spec);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("model '" + spec + "': " + e.what());
  }
  ZooModel model = model_from_json(j);
  std::string sha = git_blob_sha1(text);
  return {std::move(model), std::move(text), std::move(sha)};
}

}  // namespace ncgrad
