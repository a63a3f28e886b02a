#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace subtle {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial text, unknown generator names, bad matrices.
class parse_error : public error {
 public:
  using error::error;
};

/// Ring construction problems and operands that live in different rings.
class ring_error : public error {
 public:
  using error::error;
};

/// Exponent left the 32-bit range.
class overflow_error : public error {
 public:
  using error::error;
};

class inhomogeneous_error : public error {
 public:
  using error::error;
};

/// An argument outside the documented domain (n too small, unsupported
/// generator for an operation, ...).
class domain_error : public error {
 public:
  using error::error;
};
/// A computed value contradicts its expected closed form (e.g. an element that is
/// A theorem-level check came out the wrong way (e.g. an element that is
/// neither regular nor in the ideal). Distinct from infrastructure errors.
class mismatch_error : public error {
 public:
  using error::error;
};

/// The Buchberger pair budget ran out before the basis was complete.
class budget_exceeded : public error {
 public:
  budget_exceeded(std::uint64_t steps, std::string context)
      : error("budget exceeded after " + std::to_string(steps) + " pair reductions" +
              (context.empty() ? std::string() : " (" + context + ")")),
        steps_(steps),
        context_(std::move(context)) {}

  std::uint64_t steps() const noexcept { return steps_; }
  const std::string& context() const noexcept { return context_; }

 private:
  std::uint64_t steps_;
  std::string context_;
};

}  // namespace subtle
