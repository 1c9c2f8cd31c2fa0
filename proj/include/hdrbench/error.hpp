#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hdrbench {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a documented type invariant (non-finite pixel, bad
// exposure time, mismatched shapes, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the domain of a function, e.g. a tonemap input
// that was not normalized to [0,1] first.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The ground truth carries no usable normalization statistic (all-zero peak
// or a zero percentile).
class DegenerateGroundTruth : public Error {
 public:
  using Error::Error;
};

// Malformed image file. `offset()` is the byte position at which decoding
// stopped.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

// Shape inference failed for a named layer.
class ShapeError : public Error {
 public:
  ShapeError(std::string layer, const std::string& what)
      : Error("layer '" + layer + "': " + what), layer_(std::move(layer)) {}

  const std::string& layer() const noexcept { return layer_; }

 private:
  std::string layer_;
};

// Malformed graph, scene or phase description.
class SpecError : public Error {
 public:
  using Error::Error;
};

class ProbeFailure : public Error {
 public:
  using Error::Error;
};

// Scoring of a single image failed; carries the image id.
class ScoringError : public Error {
 public:
  ScoringError(std::string id, const std::string& what)
      : Error("image '" + id + "': " + what), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// A submission directory could not be scored; one message per failing id.
class SubmissionError : public Error {
 public:
  explicit SubmissionError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "submission rejected:";
    for (const auto& item : items) out += "\n  " + item;
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace hdrbench
