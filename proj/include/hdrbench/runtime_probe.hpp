#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hdrbench::complexity {

struct ProbeResult {
  double median_seconds = 0.0;
  std::vector<double> runs;  // timed runs, warm-up excluded
  std::string hardware;      // fingerprint of the measuring machine
};

// Times `command` on one exposure-stack directory. The command is run through
// the shell with "{stack}" and "{out}" replaced by the quoted stack directory
// and a fresh output path; when a placeholder is missing the value is
// appended as an argument instead. One warm-up run precedes `repeats` timed
// runs; every run must exit 0 and leave a decodable PFM at the output path.
// Probes are serialized process-wide. Throws ProbeFailure.
ProbeResult runtime_probe(const std::string& command,
                          const std::filesystem::path& stack_dir, int repeats = 3);

std::string hardware_fingerprint();

}  // namespace hdrbench::complexity
