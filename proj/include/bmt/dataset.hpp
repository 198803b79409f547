#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bmt/errors.hpp"
#include "bmt/linalg.hpp"

namespace bmt {

// A regression problem: target y, always-kept controls Z (may be empty), and
// the candidate pool X over which selection runs. Rows are time periods.
struct Dataset {
  std::vector<double> y;
  Matrix z;  // T x zeta, zeta may be 0
  Matrix x;  // T x n
  std::vector<std::string> candidate_names;  // optional, same length as x.cols() when set

  std::size_t rows() const { return y.size(); }
  std::size_t zeta() const { return z.cols(); }
  std::size_t n_candidates() const { return x.cols(); }

  void validate() const {
    const std::size_t t = rows();
    if (t == 0) throw InsufficientRows("dataset has no rows");
    if (!z.empty() && z.rows() != t)
      throw DimensionMismatch("controls have " + std::to_string(z.rows()) +
                              " rows, target has " + std::to_string(t));
    if (x.rows() != t)
      throw DimensionMismatch("candidates have " + std::to_string(x.rows()) +
                              " rows, target has " + std::to_string(t));
    if (x.cols() == 0) throw InsufficientColumns("candidate pool is empty");
    if (!candidate_names.empty() && candidate_names.size() != x.cols())
      throw DimensionMismatch("candidate_names size does not match candidate count");
    if (t < zeta() + 2)
      throw InsufficientRows("need at least zeta + 2 rows, got " + std::to_string(t));
    for (double v : y)
      if (!std::isfinite(v)) throw NonFinite("target contains a non-finite value");
    for (std::size_t j = 0; j < z.cols(); ++j)
      for (std::size_t i = 0; i < t; ++i)
        if (!std::isfinite(z(i, j))) throw NonFinite("controls contain a non-finite value");
    for (std::size_t j = 0; j < x.cols(); ++j)
      for (std::size_t i = 0; i < t; ++i)
        if (!std::isfinite(x(i, j))) throw NonFinite("candidates contain a non-finite value");
  }
};

}  // namespace bmt
