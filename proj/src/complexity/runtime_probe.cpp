#include "hdrbench/runtime_probe.hpp"

#include <sys/utsname.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "hdrbench/error.hpp"
#include "hdrbench/image_io.hpp"

namespace hdrbench::complexity {

namespace {

std::mutex probe_mutex;

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::string substitute(std::string command, const std::string& key,
                       const std::string& value) {
  const std::size_t at = command.find(key);
  if (at == std::string::npos) return command + " " + value;
  for (std::size_t pos = at; pos != std::string::npos;
       pos = command.find(key, pos + value.size()))
    command.replace(pos, key.size(), value);
  return command;
}

double run_once(const std::string& command, const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::remove(out, ec);

  const auto start = std::chrono::steady_clock::now();
  const int status = std::system(command.c_str());
  const auto stop = std::chrono::steady_clock::now();

  if (status == -1) throw ProbeFailure("could not launch: " + command);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw ProbeFailure(fmt::format("command exited with status {}: {}",
                                   WIFEXITED(status) ? WEXITSTATUS(status) : -1, command));
  if (!std::filesystem::exists(out))
    throw ProbeFailure("command produced no output at " + out.string());
  try {
    (void)read_pfm(out);
  } catch (const Error& e) {
    throw ProbeFailure(std::string("command output is not a valid PFM: ") + e.what());
  }
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

std::string hardware_fingerprint() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        cpu = line.substr(colon + 1);
        cpu.erase(0, cpu.find_first_not_of(' '));
      }
      break;
    }
  }
  utsname u{};
  std::string os = "unknown os";
  if (uname(&u) == 0) os = fmt::format("{} {} {}", u.sysname, u.release, u.machine);
  return fmt::format("{}; {} hw threads; {}", cpu, std::thread::hardware_concurrency(), os);
}

ProbeResult runtime_probe(const std::string& command,
                          const std::filesystem::path& stack_dir, int repeats) {
  if (repeats < 1) throw ProbeFailure("repeats must be >= 1");
  if (!std::filesystem::is_directory(stack_dir))
    throw ProbeFailure("stack directory '" + stack_dir.string() + "' does not exist");

  const std::scoped_lock lock(probe_mutex);

  const auto scratch = std::filesystem::temp_directory_path() /
                       fmt::format("hdrbench-probe-{}", ::getpid());
  std::filesystem::create_directories(scratch);
  const auto out = scratch / "pred.pfm";
  const std::string full =
      substitute(substitute(command, "{stack}", shell_quote(stack_dir.string())), "{out}",
                 shell_quote(out.string()));

  ProbeResult result;
  result.hardware = hardware_fingerprint();
  try {
    run_once(full, out);  // warm-up
    for (int i = 0; i < repeats; ++i) result.runs.push_back(run_once(full, out));
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove_all(scratch, ec);
    throw;
  }
  std::error_code ec;
  std::filesystem::remove_all(scratch, ec);

  auto sorted = result.runs;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  result.median_seconds =
      sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return result;
}

}  // namespace hdrbench::complexity
