// Copyright 2026 The PHT Link Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pht: key generation, synthetic data, station daemons, train submission and
// run reports.
//
//   pht keygen --out keys/A --run-id demo-1
//   pht synth --config population.json --out data
//   pht station --config station_a.json
//   pht tse --config tse.json
//   pht submit --config submit.json --out results
//   pht report results/report.json

#include <atomic>
#include <cctype>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pht/crypto.h"
#include "pht/dataset_io.h"
#include "pht/error.h"
#include "pht/manifest.h"
#include "pht/network.h"
#include "pht/population.h"
#include "pht/tcp.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

void OnSignal(int) { g_stop.store(true); }

void ConfigureLogging() {
  spdlog::set_default_logger(spdlog::stderr_color_mt("pht"));
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e %^%l%$ %v");
  const char* level = std::getenv("PHT_LOG");
  spdlog::set_level(level != nullptr ? spdlog::level::from_str(level) : spdlog::level::info);
}

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw pht::Error(pht::ErrorCode::kBadConfig, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw pht::Error(pht::ErrorCode::kBadConfig, path.string() + ": " + e.what());
  }
}

void WriteTextFile(const fs::path& path, const std::string& text, bool force) {
  if (fs::exists(path) && !force) {
    throw pht::Error(pht::ErrorCode::kIoError, path.string() + " exists (use --force)");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw pht::Error(pht::ErrorCode::kIoError, "cannot write " + path.string());
}

// Paths in a config file are relative to the file itself.
fs::path Resolve(const fs::path& config, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : config.parent_path() / path;
}

std::string Require(const json& j, const char* key, const fs::path& config) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw pht::Error(pht::ErrorCode::kBadConfig, config.string() + ": missing \"" + key + "\"");
  }
  return j.at(key).get<std::string>();
}

// Loading anything named by a config is a configuration problem.
template <typename F>
auto LoadConfigured(const std::string& what, F&& load) {
  try {
    return load();
  } catch (const pht::Error& e) {
    throw pht::Error(pht::ErrorCode::kBadConfig, what + ": " + e.what());
  }
}

int CmdKeygen(const fs::path& out, std::string run_id, bool force) {
  if (run_id.empty()) run_id = "run-" + pht::HexEncode(pht::RandomBytes(6));
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw pht::Error(pht::ErrorCode::kIoError, out.string() + ": " + ec.message());
  for (const char* name : {"encryption.pub", "encryption.key", "signing.key", "verification.pub",
                           "anchor.key", "anchor.pub"}) {
    if (fs::exists(out / name) && !force) {
      throw pht::Error(pht::ErrorCode::kIoError, (out / name).string() + " exists (use --force)");
    }
  }
  pht::KeyPair enc = pht::GenerateEncryptionKeyPair(run_id);
  pht::SigningKeys sig = pht::GenerateSigningKeys(run_id);
  pht::SigningKeys anchor = pht::GenerateTrustAnchor();
  auto secret = [](const pht::SecretBytes& s) { return pht::Bytes(s.view().begin(), s.view().end()); };
  pht::WriteKeyFile(out / "encryption.pub",
                    {std::string(pht::kKindEncryptionPublic), enc.key_id, enc.public_encryption_key},
                    false, force);
  pht::WriteKeyFile(out / "encryption.key",
                    {std::string(pht::kKindEncryptionPrivate), enc.key_id,
                     secret(enc.private_decryption_key)},
                    true, force);
  pht::WriteKeyFile(out / "signing.key",
                    {std::string(pht::kKindSigningPrivate), sig.key_id, secret(sig.signing_key)},
                    true, force);
  pht::WriteKeyFile(out / "verification.pub",
                    {std::string(pht::kKindVerification), sig.key_id, sig.verification_key}, false,
                    force);
  pht::WriteKeyFile(out / "anchor.key",
                    {std::string(pht::kKindSigningPrivate), anchor.key_id,
                     secret(anchor.signing_key)},
                    true, force);
  pht::WriteKeyFile(out / "anchor.pub",
                    {std::string(pht::kKindVerification), anchor.key_id, anchor.verification_key},
                    false, force);
  std::cout << "keys for run " << run_id << " written to " << out.string() << "\n";
  return 0;
}

int CmdSynth(const fs::path& config, const fs::path& out, bool force) {
  pht::SyntheticPopulationSpec spec;
  try {
    spec = pht::SyntheticPopulationSpec::FromJson(ReadJsonFile(config));
  } catch (const pht::Error& e) {
    if (e.code() == pht::ErrorCode::kBadConfig) throw;
    throw pht::Error(pht::ErrorCode::kInvalidSpec, e.detail());
  }
  pht::Population pop = pht::GeneratePopulation(spec);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw pht::Error(pht::ErrorCode::kIoError, out.string() + ": " + ec.message());
  fs::path a = out / ("station_" + pop.large.station_id + ".csv");
  fs::path b = out / ("station_" + pop.small.station_id + ".csv");
  fs::path truth = out / "ground_truth.csv";
  for (const fs::path& p : {a, b, truth}) {
    if (fs::exists(p) && !force) {
      throw pht::Error(pht::ErrorCode::kIoError, p.string() + " exists (use --force)");
    }
  }
  pht::WriteDataset(pop.large, a);
  pht::WriteDataset(pop.small, b);
  pht::WriteGroundTruth(pop.truth, truth);
  std::cout << a.string() << " (" << pop.large.rows.size() << " rows)\n"
            << b.string() << " (" << pop.small.rows.size() << " rows)\n"
            << truth.string() << " (" << pop.truth.size() << " pairs)\n";
  return 0;
}

pht::StationKeys LoadStationKeys(const fs::path& dir) {
  return {pht::LoadKeyPair(dir / "encryption.pub", dir / "encryption.key"),
          pht::LoadSigningKeys(dir / "signing.key", dir / "verification.pub")};
}

void ServeUntilSignal(pht::Endpoint& endpoint, const pht::HostPort& listen,
                      const std::function<void()>& on_stop) {
  pht::EndpointServer server(endpoint, listen);
  std::signal(SIGTERM, OnSignal);
  std::signal(SIGINT, OnSignal);
  std::cout << endpoint.id() << " listening on " << listen.host << ":" << server.port()
            << std::endl;
  spdlog::info("{} serving on {}:{}", endpoint.id(), listen.host, server.port());
  server.Serve(&g_stop);
  on_stop();
  spdlog::info("{} stopped", endpoint.id());
}

int CmdStation(const fs::path& config, std::optional<int> timeout_secs) {
  json c = ReadJsonFile(config);
  pht::DataStationConfig sc;
  sc.station_id = Require(c, "station_id", config);
  if (c.value("role", "data") != "data") {
    throw pht::Error(pht::ErrorCode::kBadConfig, "role must be \"data\" for a data station");
  }
  pht::HostPort listen = pht::HostPort::Parse(Require(c, "listen", config));
  fs::path dataset = Resolve(config, Require(c, "dataset", config));
  fs::path anchor = Resolve(config, Require(c, "trust_anchor", config));
  fs::path key_dir = Resolve(config, Require(c, "key_dir", config));
  for (const json& v : c.value("allowed_variables", json::array())) {
    sc.allowed_variables.insert(v.get<std::string>());
  }
  sc.trust_anchor = LoadConfigured("trust anchor", [&] { return pht::LoadVerificationKey(anchor); });
  if (timeout_secs) {
    sc.salt_timeout = *timeout_secs * 1000;
  } else {
    sc.salt_timeout = c.value("salt_timeout_ms", sc.salt_timeout);
  }
  auto data = std::make_shared<const pht::Dataset>(
      LoadConfigured("dataset", [&] { return pht::ReadDataset(dataset); }));
  if (data->station_id != sc.station_id) {
    throw pht::Error(pht::ErrorCode::kBadConfig,
                     "dataset belongs to station " + data->station_id);
  }
  LoadConfigured("key_dir", [&] { return LoadStationKeys(key_dir); });
  std::unique_ptr<pht::AuditLog> audit =
      c.contains("audit_log")
          ? std::make_unique<pht::AuditLog>(Resolve(config, c.at("audit_log").get<std::string>()))
          : std::make_unique<pht::AuditLog>();

  pht::DataStationEndpoint endpoint(
      sc, data, [key_dir](const std::string&) { return LoadStationKeys(key_dir); }, audit.get());
  ServeUntilSignal(endpoint, listen, [&] { endpoint.WipeAll(pht::WallClockMillis()); });
  return 0;
}

int CmdTse(const fs::path& config, std::optional<int> timeout_secs) {
  json c = ReadJsonFile(config);
  pht::TseConfig tc;
  tc.station_id = Require(c, "station_id", config);
  if (c.value("role", "tse") != "tse") {
    throw pht::Error(pht::ErrorCode::kBadConfig, "role must be \"tse\"");
  }
  pht::HostPort listen = pht::HostPort::Parse(Require(c, "listen", config));
  fs::path anchor = Resolve(config, Require(c, "trust_anchor", config));
  fs::path key_dir = Resolve(config, Require(c, "key_dir", config));
  tc.trust_anchor = LoadConfigured("trust anchor", [&] { return pht::LoadVerificationKey(anchor); });
  if (timeout_secs) {
    tc.data_timeout = *timeout_secs * 1000;
  } else {
    tc.data_timeout = c.value("data_timeout_ms", tc.data_timeout);
  }
  if (c.contains("spill_dir")) tc.spill_dir = Resolve(config, c.at("spill_dir").get<std::string>());
  auto load_keys = [key_dir](const std::string&) {
    return pht::LoadKeyPair(key_dir / "encryption.pub", key_dir / "encryption.key");
  };
  LoadConfigured("key_dir", [&] { return load_keys(""); });
  std::unique_ptr<pht::AuditLog> audit =
      c.contains("audit_log")
          ? std::make_unique<pht::AuditLog>(Resolve(config, c.at("audit_log").get<std::string>()))
          : std::make_unique<pht::AuditLog>();
  pht::TseEndpoint endpoint(tc, load_keys, audit.get());
  ServeUntilSignal(endpoint, listen, [&] { endpoint.WipeAll(pht::WallClockMillis()); });
  return 0;
}

std::string Slug(const std::string& name) {
  std::string s;
  for (char ch : name) s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  return s;
}

int CmdSubmit(const fs::path& config, const fs::path& out, std::optional<int> timeout_secs,
              bool force) {
  json c = ReadJsonFile(config);
  json draft = c.at("manifest").is_string()
                   ? ReadJsonFile(Resolve(config, c.at("manifest").get<std::string>()))
                   : c.at("manifest");
  if (!draft.contains("expiry")) {
    draft["expiry"] = pht::WallClockMillis() / 1000 + c.value("lifetime_seconds", 3600);
  }
  pht::TrainManifest m = LoadConfigured("manifest", [&] {
    json stub = draft;
    stub.erase("credential_signature");
    return pht::TrainManifest::FromJson(stub);
  });
  const json& key_dirs = c.at("station_keys");
  m.tse_public_encryption_key = LoadConfigured("TSE key", [&] {
    return pht::LoadPublicKey(Resolve(config, key_dirs.at(m.tse_id).get<std::string>()) /
                              "encryption.pub");
  });
  for (const pht::DataRequest& r : m.data_requests) {
    fs::path dir = Resolve(config, key_dirs.at(r.station_id).get<std::string>());
    m.station_encryption_keys[r.station_id] =
        LoadConfigured("station key", [&] { return pht::LoadPublicKey(dir / "encryption.pub"); });
    m.station_verification_keys[r.station_id] = LoadConfigured(
        "station key", [&] { return pht::LoadVerificationKey(dir / "verification.pub"); });
  }
  fs::path anchor_dir = Resolve(config, Require(c, "trust_anchor_dir", config));
  {
    pht::SigningKeys anchor = LoadConfigured("trust anchor", [&] {
      return pht::LoadSigningKeys(anchor_dir / "anchor.key", anchor_dir / "anchor.pub");
    });
    pht::SignManifest(m, anchor);
  }

  std::map<std::string, pht::HostPort> endpoints;
  for (const auto& [id, addr] : c.at("endpoints").items()) {
    endpoints[id] = pht::HostPort::Parse(addr.get<std::string>());
  }
  pht::TcpHubOptions options;
  if (timeout_secs) options.overall_timeout = *timeout_secs * 1000;

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw pht::Error(pht::ErrorCode::kIoError, out.string() + ": " + ec.message());
  if (fs::exists(out / "report.json") && !force) {
    throw pht::Error(pht::ErrorCode::kIoError, (out / "report.json").string() + " exists (use --force)");
  }

  spdlog::info("submitting train {} run {}", m.train_id, m.run_id);
  pht::ResearcherEndpoint researcher(m);
  pht::RunOutcome outcome = pht::RunTcpHub(researcher, endpoints, pht::FaultPlan{}, options);

  json files = json::array();
  if (outcome.result) {
    WriteTextFile(out / "result.json", outcome.result->ToJson().dump(2) + "\n", true);
    files.push_back("result.json");
    for (const pht::Table& t : outcome.result->tables) {
      std::string name = Slug(t.name) + ".csv";
      WriteTextFile(out / name, pht::TableCsv(t, outcome.result->suppress_marker), true);
      files.push_back(name);
    }
  }
  json timings = json::object();
  auto ms = outcome.milestones;
  if (ms.contains("dispatched")) {
    pht::Millis t0 = ms.at("dispatched");
    for (const auto& [name, t] : ms) {
      if (name != "dispatched") timings[name] = t - t0;
    }
  }
  json audit = {{"timings_ms", timings}, {"messages", outcome.trace.size()}};
  if (outcome.result) {
    audit["linkage"] = outcome.result->ToJson().at("audit").at("linkage");
    audit["suppressed_cells"] = outcome.result->suppressed.size();
  }
  json report = {{"run_id", m.run_id},
                 {"train_id", m.train_id},
                 {"outcome", std::string(pht::RunStatusName(outcome.status))},
                 {"result_files", files},
                 {"audit", audit}};
  if (outcome.status != pht::RunStatus::kCompleted) report["reason"] = outcome.abort_reason;
  WriteTextFile(out / "report.json", report.dump(2) + "\n", true);

  if (outcome.status == pht::RunStatus::kCompleted) {
    std::cout << "run " << m.run_id << " completed; results in " << out.string() << "\n";
    return 0;
  }
  std::cerr << "error: " << outcome.abort_reason << ": run " << m.run_id << " aborted\n";
  return 1;
}

int CmdReport(const fs::path& path) {
  fs::path file = fs::is_directory(path) ? path / "report.json" : path;
  json r = ReadJsonFile(file);
  std::cout << "run:     " << r.value("run_id", "?") << "\n"
            << "outcome: " << r.value("outcome", "?");
  if (r.contains("reason")) std::cout << " (" << r.at("reason").get<std::string>() << ")";
  std::cout << "\n";
  const json& audit = r.value("audit", json::object());
  if (audit.contains("linkage")) std::cout << "linkage: " << audit.at("linkage").dump() << "\n";
  if (audit.contains("suppressed_cells")) {
    std::cout << "suppressed cells: " << audit.at("suppressed_cells").dump() << "\n";
  }
  const json timings = audit.value("timings_ms", json::object());
  for (const auto& [phase, t] : timings.items()) {
    std::cout << "  " << phase << ": " << t.dump() << " ms\n";
  }
  for (const json& f : r.value("result_files", json::array())) {
    fs::path p = file.parent_path() / f.get<std::string>();
    std::cout << "\n== " << f.get<std::string>() << "\n";
    if (p.extension() == ".csv") {
      std::ifstream in(p);
      std::cout << in.rdbuf();
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personal health train record linkage"};
  app.require_subcommand(1);
  std::string config, out, run_id;
  bool force = false;
  std::optional<int> timeout;

  auto* keygen = app.add_subcommand("keygen", "Generate run keys and a trust anchor");
  keygen->add_option("--out", out, "Output directory")->required();
  keygen->add_option("--run-id", run_id, "Run the keys are scoped to");
  keygen->add_flag("--force", force, "Overwrite existing key files");

  auto* synth = app.add_subcommand("synth", "Generate two synthetic station datasets");
  synth->add_option("--config", config, "Population spec (JSON)")->required();
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_flag("--force", force, "Overwrite existing files");

  auto* station = app.add_subcommand("station", "Run a data station daemon");
  station->add_option("--config", config, "Station config (JSON)")->required();
  station->add_option("--timeout", timeout, "Salt wait in seconds");

  auto* tse = app.add_subcommand("tse", "Run the trusted secure environment daemon");
  tse->add_option("--config", config, "TSE config (JSON)")->required();
  tse->add_option("--timeout", timeout, "Data wait in seconds");

  auto* submit = app.add_subcommand("submit", "Sign a train, run it and collect the result");
  submit->add_option("--config", config, "Submission config (JSON)")->required();
  submit->add_option("--out", out, "Result directory")->required();
  submit->add_option("--timeout", timeout, "Whole-run limit in seconds");
  submit->add_flag("--force", force, "Overwrite an existing report");

  auto* report = app.add_subcommand("report", "Print a run report");
  std::string report_path;
  report->add_option("path", report_path, "report.json or its directory");
  report->add_option("--config", report_path, "report.json or its directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: Usage: " << e.what() << "\n";
    return 2;
  }

  ConfigureLogging();
  try {
    if (*keygen) return CmdKeygen(out, run_id, force);
    if (*synth) return CmdSynth(config, out, force);
    if (*station) return CmdStation(config, timeout);
    if (*tse) return CmdTse(config, timeout);
    if (*submit) return CmdSubmit(config, out, timeout, force);
    if (*report) {
      if (report_path.empty()) throw pht::Error(pht::ErrorCode::kBadConfig, "no report given");
      return CmdReport(report_path);
    }
  } catch (const pht::Error& e) {
    std::cerr << "error: " << pht::ErrorCodeName(e.code()) << ": " << e.detail() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
