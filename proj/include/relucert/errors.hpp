#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relucert {

enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  ZeroRow,
  NotAFrame,
  DegenerateHull,
  AtOrigin,
  OrphanVertex,
  NotOmnidirectional,
  NotNonnegOmnidirectional,
  NotConverged,
  SolverFailed,
  FrameMismatch,
  ReconstructionFailed,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every exception thrown by the library. The kind lets callers
/// (the CLI in particular) dispatch without a chain of catch clauses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ZeroRowError : public Error {
 public:
  explicit ZeroRowError(std::size_t row)
      : Error(ErrorKind::ZeroRow, "row " + std::to_string(row) + " has (near) zero norm"),
        row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class SolverFailedError : public Error {
 public:
  SolverFailedError(std::size_t index, std::size_t facet, const std::string& detail)
      : Error(ErrorKind::SolverFailed, "solver failed for index " + std::to_string(index) +
                                           " on facet " + std::to_string(facet) + ": " + detail),
        index_(index),
        facet_(facet) {}
  std::size_t index() const noexcept { return index_; }
  std::size_t facet() const noexcept { return facet_; }

 private:
  std::size_t index_;
  std::size_t facet_;
};

}  // namespace relucert
