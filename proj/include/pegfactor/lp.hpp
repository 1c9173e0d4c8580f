// Copyright 2026 The pegfactor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <limits>
#include <memory>
#include <utility>
#include <vector>

namespace pegfactor {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0;
  std::vector<double> x;
  int iterations = 0;
};

// Small dense LP:  maximize c.x  s.t.  row_lo <= A x <= row_hi,  lo <= x <= hi.
// Dictionary simplex.  The first solve runs two phases; afterwards rows may be
// appended and finite row bounds moved, and the next solve re-optimizes with
// the dual simplex from the previous basis.
class Lp {
 public:
  static constexpr double inf = std::numeric_limits<double>::infinity();
  using Coefs = std::vector<std::pair<int, double>>;

  Lp();
  ~Lp();
  Lp(const Lp&);
  Lp& operator=(const Lp&);

  // Columns are fixed once the first solve has happened.
  int add_var(double lo, double hi, double obj = 0.0);
  int add_row(Coefs coef, double lo, double hi);
  int add_le(Coefs coef, double rhs) { return add_row(std::move(coef), -inf, rhs); }
  int add_ge(Coefs coef, double rhs) { return add_row(std::move(coef), rhs, inf); }
  int add_eq(Coefs coef, double rhs) { return add_row(std::move(coef), rhs, rhs); }
  // A side that was infinite when the row was added must stay infinite.
  void set_row_bounds(int row, double lo, double hi);

  // Relaxes every row by a deterministic pseudo-random amount in
  // (scale/2, scale] * (1 + |rhs|).  Breaks degeneracy; zero disables.
  void set_perturbation(double scale);

  int num_vars() const;
  int num_rows() const;

  LpResult solve(int max_iter = 500000);

 private:
  struct Impl;
  std::unique_ptr<Impl> p_;
};

// One-shot convenience wrapper.
struct LpProblem {
  static constexpr double inf = Lp::inf;
  int num_vars = 0;
  std::vector<double> c, lo, hi;
  struct Row {
    Lp::Coefs coef;
    double lo, hi;
  };
  std::vector<Row> rows;

  int add_var(double lower, double upper, double obj = 0.0) {
    lo.push_back(lower);
    hi.push_back(upper);
    c.push_back(obj);
    return num_vars++;
  }
  void add_le(Lp::Coefs coef, double rhs) { rows.push_back({std::move(coef), -inf, rhs}); }
  void add_ge(Lp::Coefs coef, double rhs) { rows.push_back({std::move(coef), rhs, inf}); }
  void add_eq(Lp::Coefs coef, double rhs) { rows.push_back({std::move(coef), rhs, rhs}); }
};

LpResult solve_lp(const LpProblem& p, int max_iter = 500000);

}  // namespace pegfactor
