#ifndef SURROGATE_TIMING_HPP
#define SURROGATE_TIMING_HPP

#include <chrono>
#include <limits>

namespace surrogate {

using Clock = std::chrono::steady_clock;

/// Wall-clock point after which long-running searches return their incumbent.
class Deadline {
public:
  Deadline() : at_(Clock::time_point::max()) {}

  static Deadline never() { return Deadline(); }

  static Deadline after(double seconds) {
    Deadline d;
    if (seconds < 1e9) {
      d.at_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(seconds));
    }
    return d;
  }

  bool expired() const {
    return at_ != Clock::time_point::max() && Clock::now() >= at_;
  }

  bool unlimited() const { return at_ == Clock::time_point::max(); }

  /// The earlier of two deadlines.
  static Deadline earliest(const Deadline& a, const Deadline& b) {
    Deadline d;
    d.at_ = std::min(a.at_, b.at_);
    return d;
  }

private:
  Clock::time_point at_;
};

class Stopwatch {
public:
  Stopwatch() : start_(Clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

private:
  Clock::time_point start_;
};

} // namespace surrogate

#endif
