#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace ixdrl {

enum class ErrorCode {
  MalformedRecord,
  ManifestMismatch,
  NonContiguousTimesteps,
  EmptyDataset,
  IoError,
  EmptySequence,
  DimensionMismatch,
  SingleCluster,
  RangeInvalid,
  DimensionUnknown,
  InvalidArgument,
  EmptyTrainSet,
  EmptyTestSet,
  TooManyFeatures,
  ModelGatedOut,
  SteppingTerminal,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for codes that mean "the input data is bad" as opposed to a usage error.
bool is_data_error(ErrorCode code);

/// Resolves a worker count: 0 means "one per hardware thread".
unsigned resolve_jobs(unsigned jobs);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is handed out in
/// index order; callers write results into per-index slots so the output is
/// independent of the schedule. The first exception thrown is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = resolve_jobs(jobs);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Shortest-safe decimal form: 17 significant digits, round-trips every double.
std::string format_double(double v);

/// splitmix64 step; used to derive independent per-item seeds from a root seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// FNV-1a 64-bit digest, rendered as 16 hex characters.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace ixdrl
