#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace reeblab {

// Error taxonomy shared by all modules. Every throwing path names its code so
// the CLI can emit a machine-readable error record.
enum class ErrorCode {
  NotHyperbolic,
  BadParams,
  DiscretenessSuspect,
  NonTermination,
  BudgetExceeded,
  HorizonExceeded,
  InsufficientData,
  ParamViolation,
  OutOfChart,
  EventResolutionFailure,
  RefinementDiverged,
  ClassCollision,
  CollarEscapeViolation,
  EquivarianceViolation,
  NotIrreducible,
  AssertionFailed,
  IOError,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw LabError(code, what);
}

// Deterministic RNG for all sampling. One generator per pipeline stage,
// seeded from the config seed; never shared across threads.
using Rng = std::mt19937_64;

// Worker count: LAB_THREADS caps it, default is single-threaded so that
// data artifacts are reproducible without any merge discipline.
int worker_count();

// Chunked parallel map with deterministic output ordering: fn(i) writes only
// to slot i of a pre-sized buffer, so the result is independent of the
// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// FNV-1a, used for config hashes in the run manifest.
std::uint64_t fnv1a(const std::string& bytes);

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

inline double wrap_angle(double a) {
  // into (-pi, pi]
  while (a <= -kPi) a += kTwoPi;
  while (a > kPi) a -= kTwoPi;
  return a;
}

inline double wrap_two_pi(double a) {
  // into [0, 2*pi)
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

}  // namespace reeblab
