#pragma once

#include <exception>
#include <mutex>

namespace parashear {

/// Holds the first exception thrown inside a parallel loop body so it can be
/// rethrown after the region ends.
class ExceptionSlot {
 public:
  template <class Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!err_) err_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (err_) std::rethrow_exception(err_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr err_;
};

}  // namespace parashear
