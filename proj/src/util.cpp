#include "reeblab/util.hpp"

#include <atomic>
#include <cstdlib>

namespace reeblab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::DiscretenessSuspect: return "DiscretenessSuspect";
    case ErrorCode::NonTermination: return "NonTermination";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ParamViolation: return "ParamViolation";
    case ErrorCode::OutOfChart: return "OutOfChart";
    case ErrorCode::EventResolutionFailure: return "EventResolutionFailure";
    case ErrorCode::RefinementDiverged: return "RefinementDiverged";
    case ErrorCode::ClassCollision: return "ClassCollision";
    case ErrorCode::CollarEscapeViolation: return "CollarEscapeViolation";
    case ErrorCode::EquivarianceViolation: return "EquivarianceViolation";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::AssertionFailed: return "AssertionFailed";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

int worker_count() {
  const char* env = std::getenv("LAB_THREADS");
  if (env == nullptr) return 1;
  int n = std::atoi(env);
  if (n < 1) return 1;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw > 0 && n > static_cast<int>(hw)) n = static_cast<int>(hw);
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace reeblab
