#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "spsum/error.hpp"

namespace spsum {

/// Wall-clock guard polled once per outer iteration by the long-running
/// algorithms. Default-constructed deadlines never expire.
class Deadline {
 public:
  using clock = std::chrono::steady_clock;

  Deadline() = default;

  static Deadline after_minutes(double minutes) {
    Deadline d;
    d.at_ = clock::now() + std::chrono::duration_cast<clock::duration>(
                               std::chrono::duration<double, std::ratio<60>>(minutes));
    d.minutes_ = minutes;
    return d;
  }

  bool expired() const { return at_ && clock::now() > *at_; }

  void check(const char* where) const {
    if (expired()) {
      throw Error(ErrorCode::Timeout,
                  std::string(where) + " exceeded " + std::to_string(minutes_) + " minutes");
    }
  }

 private:
  std::optional<clock::time_point> at_;
  double minutes_ = 0.0;
};

}  // namespace spsum
