#pragma once

#include <ctime>

namespace smoothperf {

/// Per-thread CPU stopwatch that can be paused, so that bookkeeping done
/// between iterations (trace metrics) is not charged to the solver.
class CpuStopwatch {
 public:
  CpuStopwatch() { resume(); }

  void pause() {
    if (running_) {
      accumulated_ += now_ms() - started_;
      running_ = false;
    }
  }

  void resume() {
    if (!running_) {
      started_ = now_ms();
      running_ = true;
    }
  }

  double elapsed_ms() const { return accumulated_ + (running_ ? now_ms() - started_ : 0.0); }

 private:
  static double now_ms() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
  }

  double accumulated_ = 0.0;
  double started_ = 0.0;
  bool running_ = false;
};

/// Pauses a stopwatch for the lifetime of the guard.
class PauseGuard {
 public:
  explicit PauseGuard(CpuStopwatch& sw) : sw_(sw) { sw_.pause(); }
  ~PauseGuard() { sw_.resume(); }
  PauseGuard(const PauseGuard&) = delete;
  PauseGuard& operator=(const PauseGuard&) = delete;

 private:
  CpuStopwatch& sw_;
};

}  // namespace smoothperf
