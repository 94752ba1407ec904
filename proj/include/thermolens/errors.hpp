#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermolens {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameter or configuration value. `key` names the offending field.
struct ValidationError : Error {
  std::string key;
  ValidationError(std::string k, const std::string& what)
      : Error(k + ": " + what), key(std::move(k)) {}
};

struct ParseError : Error {
  int line;
  ParseError(int l, const std::string& what)
      : Error("line " + std::to_string(l) + ": " + what), line(l) {}
};

struct IoError : Error {
  std::string path;
  IoError(std::string p, const std::string& what)
      : Error(p + ": " + what), path(std::move(p)) {}
};

// Base for mathematical failures of the solvers (exit code 2 in the CLI).
struct SolverError : Error {
  double residual;
  SolverError(const std::string& what, double res)
      : Error(what), residual(res) {}
};

struct NonConvergenceError : SolverError {
  int iterations;
  NonConvergenceError(const std::string& what, int iters, double res)
      : SolverError(what + " (iterations " + std::to_string(iters) +
                        ", residual " + std::to_string(res) + ")",
                    res),
        iterations(iters) {}
};

// 1 - 2 k(theta) p dropped below the admissible floor.
struct DegeneracyError : SolverError {
  double min_value;
  std::size_t location;
  DegeneracyError(double v, std::size_t loc)
      : SolverError("degenerate pressure coefficient: min(1-2k(theta)p) = " +
                        std::to_string(v) + " at node " + std::to_string(loc),
                    v),
        min_value(v),
        location(loc) {}
};

}  // namespace thermolens
