// tfa: batch runner for time-frequency studies.
//
//   tfa run <config.json> [--out DIR] [--threads N] [--resolution-scale K]
//   tfa validate <config.json>
//
// Exit codes: 0 ok, 1 I/O, 2 invalid config or violated hypothesis,
// 3 resolution or truncation failure. Errors go to stderr as one JSON object.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "tfa/study.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(const std::string& kind) {
  if (kind == "resolution" || kind == "truncation") return 3;
  return 2;
}

int report(const std::string& kind, const std::string& message, const std::string& study = "") {
  json e = {{"error", kind}, {"message", message}};
  if (!study.empty()) e["study"] = study;
  std::cerr << e.dump() << "\n";
  return kind == "io" ? 1 : exit_code(kind);
}

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw tfa::ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
}

void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

int run(const std::string& config, const std::string& out_dir, std::size_t threads, std::size_t scale) {
  const auto studies = tfa::prepare_config(load(config), scale);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  std::vector<std::optional<tfa::Table>> tables(studies.size());
  std::vector<std::exception_ptr> errors(studies.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < studies.size();) {
      try {
        tables[k] = studies[k].run();
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, studies.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = 0;
  for (std::size_t k = 0; k < studies.size(); ++k) {
    if (errors[k]) {
      try {
        std::rethrow_exception(errors[k]);
      } catch (const tfa::Error& e) {
        status = std::max(status, report(e.kind(), e.what(), studies[k].name));
      }
      continue;
    }
    const auto& t = *tables[k];
    write_atomic(fs::path(out_dir) / (t.name + ".csv"), tfa::to_csv(t));
    if (!t.summary.empty()) write_atomic(fs::path(out_dir) / (t.name + ".json"), t.summary.dump(2) + "\n");
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-frequency study runner"};
  app.require_subcommand(1);
  std::string config, out_dir = "reports";
  std::size_t threads = 1, scale = 1;
  auto* run_cmd = app.add_subcommand("run", "execute the studies of a config");
  run_cmd->add_option("config", config, "study config (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "report directory");
  run_cmd->add_option("--threads", threads, "studies run concurrently")->check(CLI::PositiveNumber);
  run_cmd->add_option("--resolution-scale", scale, "multiplier for every grid density")->check(CLI::PositiveNumber);
  auto* validate_cmd = app.add_subcommand("validate", "check a config without running it");
  validate_cmd->add_option("config", config, "study config (JSON)")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) {
      const auto studies = tfa::prepare_config(load(config));
      json ok = {{"valid", true}, {"studies", json::array()}};
      for (const auto& s : studies) ok["studies"].push_back({{"name", s.name}, {"study", s.kind}});
      std::cout << ok.dump() << "\n";
      return 0;
    }
    return run(config, out_dir, threads, scale);
  } catch (const tfa::Error& e) {
    return report(e.kind(), e.what());
  } catch (const IoError& e) {
    return report("io", e.what());
  } catch (const fs::filesystem_error& e) {
    return report("io", e.what());
  } catch (const std::exception& e) {
    return report("internal", e.what());
  }
}
