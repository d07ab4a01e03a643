#pragma once

#include <complex>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qcorr {

using cplx = std::complex<double>;

// Default numerical tolerances. Norm-level checks (traces, probabilities,
// unitarity of induced operators) use kNormTol; elementwise algebraic
// identities are held to the tighter kAlgebraTol.
inline constexpr double kNormTol = 1e-10;
inline constexpr double kAlgebraTol = 1e-12;

// All library errors derive from Error; what() reads "<Kind>: <detail>" so
// callers (and the CLI) can surface the kind without RTTI gymnastics.
class Error : public std::runtime_error {
 public:
  Error(const std::string& kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(kind) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define QCORR_DEFINE_ERROR(NAME)                                \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& d) : Error(#NAME, d) {}    \
  }

QCORR_DEFINE_ERROR(ModeCollision);
QCORR_DEFINE_ERROR(TruncationOverflow);
QCORR_DEFINE_ERROR(EmptySubsystem);
QCORR_DEFINE_ERROR(BranchPointerMismatch);
QCORR_DEFINE_ERROR(UnsupportedDimension);
QCORR_DEFINE_ERROR(ZeroState);
QCORR_DEFINE_ERROR(UnknownMode);
QCORR_DEFINE_ERROR(NonUnitaryElement);
QCORR_DEFINE_ERROR(MissingFrequencyGrid);
QCORR_DEFINE_ERROR(UnpolarizedState);
QCORR_DEFINE_ERROR(GridMismatch);
QCORR_DEFINE_ERROR(DegenerateGrid);
QCORR_DEFINE_ERROR(HeraldFailure);
QCORR_DEFINE_ERROR(InvalidEnvironment);
QCORR_DEFINE_ERROR(UnsupportedState);
QCORR_DEFINE_ERROR(NothingToRead);
QCORR_DEFINE_ERROR(InvariantViolation);
QCORR_DEFINE_ERROR(ConfigError);

#undef QCORR_DEFINE_ERROR

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is split into
// contiguous index blocks and every fn(i) writes only its own slot, so output
// is independent of the thread count.
inline void parallel_for_indexed(std::size_t n, int threads,
                                 const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qcorr
