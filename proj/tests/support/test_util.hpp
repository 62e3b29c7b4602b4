// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <spawn.h>
#include <sys/wait.h>
#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geocov/gazetteer.hpp"
#include "geocov/toponym.hpp"
#include "geocov/transport.hpp"

namespace geocov::testing {

inline std::filesystem::path data_dir() { return GEOCOV_TEST_DATA; }
inline std::filesystem::path data_file(const std::string& name) { return data_dir() / name; }
inline std::string cli_path() { return GEOCOV_CLI_PATH; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

/// Removes itself on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "geocov-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Starts the CLI with stdout and stderr sent to files. Extra environment
// entries are "NAME=value" strings appended to the current environment.
inline pid_t spawn_cli(const std::vector<std::string>& args, const std::filesystem::path& out,
                       const std::filesystem::path& err = "/dev/null",
                       const std::vector<std::string>& extra_env = {}) {
  std::vector<std::string> argv_store{cli_path()};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);
  std::vector<std::string> env_store;
  for (char** e = environ; *e; ++e) env_store.emplace_back(*e);
  env_store.insert(env_store.end(), extra_env.begin(), extra_env.end());
  std::vector<char*> envp;
  for (auto& e : env_store) envp.push_back(e.data());
  envp.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, out.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addopen(&actions, 2, err.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, argv[0], &actions, nullptr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw std::runtime_error("posix_spawn failed for " + cli_path());
  return pid;
}

// Exit status of a finished child; 128 + signal when it was killed.
inline int wait_child(pid_t pid) {
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw std::runtime_error("waitpid failed");
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline CliResult run_cli_process(const std::vector<std::string>& args,
                                 const std::vector<std::string>& extra_env = {}) {
  char tmpl[] = "/tmp/geocov-cli-XXXXXX";
  if (!mkdtemp(tmpl)) throw std::runtime_error("mkdtemp failed");
  const std::filesystem::path dir = tmpl;
  CliResult r;
  r.exit_code = wait_child(spawn_cli(args, dir / "out", dir / "err", extra_env));
  r.out = read_file(dir / "out");
  r.err = read_file(dir / "err");
  std::filesystem::remove_all(dir);
  return r;
}

inline const GazetteerIndex& fixture_index() {
  static const GazetteerIndex index = GazetteerIndex::from_csv(data_file("gazetteer.csv"));
  return index;
}

inline const StopWords& fixture_stopwords() {
  static const StopWords words = StopWords::load(data_file("stopwords.txt"));
  return words;
}

/// Transport whose answers come from a callback; counts calls.
class ScriptedTransport final : public Transport {
 public:
  using Script = std::function<HttpResponse(const HttpRequest&, int call)>;
  explicit ScriptedTransport(Script script) : script_(std::move(script)) {}

  HttpResponse get(const HttpRequest& request) override {
    const int n = calls_.fetch_add(1);
    {
      std::lock_guard lock(mu_);
      seen_.push_back(request);
    }
    return script_(request, n);
  }
  int calls() const { return calls_.load(); }
  std::vector<HttpRequest> seen() const {
    std::lock_guard lock(mu_);
    return seen_;
  }

 private:
  Script script_;
  std::atomic<int> calls_{0};
  mutable std::mutex mu_;
  std::vector<HttpRequest> seen_;
};

inline HttpResponse ok(std::string body) {
  HttpResponse r;
  r.status = 200;
  r.body = std::move(body);
  return r;
}

inline HttpResponse status(int code, std::string body = {}) {
  HttpResponse r;
  r.status = code;
  r.body = std::move(body);
  return r;
}

}  // namespace geocov::testing
