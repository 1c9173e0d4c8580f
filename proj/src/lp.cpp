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

#include "pegfactor/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace pegfactor {

namespace {

constexpr double kEps = 1e-9;      // reduced-cost optimality
constexpr double kPivTol = 1e-7;   // smallest admissible pivot
constexpr double kFeasTol = 1e-9;  // primal feasibility slack

}  // namespace

struct Lp::Impl {
  // user view
  std::vector<double> c, lo, hi;
  struct URow {
    Coefs coef;
    double lo, hi;
    int le = -1, ge = -1;  // internal inequality ids
  };
  std::vector<URow> urows;

  // x_j = off + sgn*y  (one column) or y+ - y-  (two columns)
  struct Map {
    int col = -1, col_neg = -1;
    double off = 0, sgn = 1;
  };
  std::vector<Map> map;
  int ncols = 0;
  std::vector<double> cc;  // objective in column space
  double cz = 0;

  // internal rows:  sum a y <= rhs
  struct Ineq {
    std::vector<std::pair<int, double>> coef;
    double rhs;
  };
  std::vector<Ineq> ineqs;

  // dictionary  x_B[i] = b[i] - sum_j a[i][j] x_N[j],  z = z0 + sum d[j] x_N[j]
  int m = 0, n = 0;
  std::vector<double> A, b, d;
  double z0 = 0;
  std::vector<int> basic, nonbasic;
  std::vector<int> where;  // id -> row (>=0) or -(col+1)
  int art_col = -1;
  bool built = false;
  long pivots_since_build = 0;
  double perturb = 0;

  double jitter(size_t k, double rhs) const {
    if (perturb == 0) return 0;
    uint64_t z = (k + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    const double u = 0.5 + 0.5 * double(z >> 11) / double(1ull << 53);
    return perturb * u * (1.0 + std::abs(rhs));
  }

  int art_id() const { return ncols; }
  int slack_id(int k) const { return ncols + 1 + k; }

  double& a(int i, int j) { return A[size_t(i) * n + j]; }

  void pivot(int r, int s) {
    const double inv = 1.0 / a(r, s);
    double* rr = &A[size_t(r) * n];
    for (int j = 0; j < n; ++j) rr[j] *= inv;
    rr[s] = inv;
    b[r] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      double* ri = &A[size_t(i) * n];
      const double f = ri[s];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) ri[j] -= f * rr[j];
      ri[s] = -f * inv;
      b[i] -= f * b[r];
      if (b[i] < 0 && b[i] > -kFeasTol) b[i] = 0;
    }
    const double ds = d[s];
    if (ds != 0.0) {
      for (int j = 0; j < n; ++j) d[j] -= ds * rr[j];
      d[s] = -ds * inv;
      z0 += ds * b[r];
    }
    std::swap(basic[r], nonbasic[s]);
    where[basic[r]] = r;
    where[nonbasic[s]] = -(s + 1);
    ++pivots_since_build;
  }

  LpStatus primal(int& iters, int max_iter) {
    int stall = 0;
    double last = z0;
    while (true) {
      if (iters >= max_iter) return LpStatus::iteration_limit;
      const bool bland = stall > 50;
      int s = -1;
      double best = kEps;
      for (int j = 0; j < n; ++j) {
        if (j == art_col || d[j] <= kEps) continue;
        if (bland) {
          if (s < 0 || nonbasic[j] < nonbasic[s]) s = j;
        } else if (d[j] > best) {
          best = d[j];
          s = j;
        }
      }
      if (s < 0) return LpStatus::optimal;
      int r = -1;
      if (bland) {
        double ratio = 0;
        for (int i = 0; i < m; ++i) {
          const double ais = a(i, s);
          if (ais > kPivTol) {
            const double t = b[i] / ais;
            if (r < 0 || t < ratio - 1e-12 || (t <= ratio + 1e-12 && basic[i] < basic[r])) {
              r = i;
              ratio = t;
            }
          }
        }
      } else {
        // Harris: bound the step with a small slack, then take the largest pivot.
        double tmax = inf;
        for (int i = 0; i < m; ++i) {
          const double ais = a(i, s);
          if (ais > kPivTol) tmax = std::min(tmax, (b[i] + kFeasTol) / ais);
        }
        double big = 0;
        for (int i = 0; i < m; ++i) {
          const double ais = a(i, s);
          if (ais > kPivTol && b[i] / ais <= tmax && ais > big) {
            big = ais;
            r = i;
          }
        }
      }
      if (r < 0) return LpStatus::unbounded;
      pivot(r, s);
      ++iters;
      if (z0 > last + 1e-9 * (1.0 + std::abs(last))) {
        last = z0;
        stall = 0;
      } else {
        ++stall;
      }
    }
  }

  // Restores primal feasibility while keeping d <= 0.  Falls back to Bland's
  // rule when the objective stops moving.
  LpStatus dual(int& iters, int max_iter) {
    int stall = 0;
    double last = z0;
    while (true) {
      if (iters >= max_iter) return LpStatus::iteration_limit;
      const bool bland = stall > 50;
      int r = -1;
      double worst = -kFeasTol;
      for (int i = 0; i < m; ++i) {
        if (b[i] >= -kFeasTol) continue;
        if (bland ? (r < 0 || basic[i] < basic[r]) : b[i] < worst) {
          worst = b[i];
          r = i;
        }
      }
      if (r < 0) return LpStatus::optimal;
      int s = -1;
      double best = inf, piv = 0;
      for (int j = 0; j < n; ++j) {
        if (j == art_col) continue;
        const double arj = a(r, j);
        if (arj < -kPivTol) {
          const double t = std::min(0.0, d[j]) / arj;
          bool take;
          if (bland) take = t < best - 1e-12 || (t <= best + 1e-12 && nonbasic[j] < nonbasic[s]);
          else take = t < best - 1e-12 || (t <= best + 1e-12 && -arj > piv);
          if (take) {
            best = t;
            s = j;
            piv = -arj;
          }
        }
      }
      if (s < 0) return LpStatus::infeasible;
      pivot(r, s);
      ++iters;
      if (z0 < last - 1e-9 * (1.0 + std::abs(last))) {
        last = z0;
        stall = 0;
      } else {
        ++stall;
      }
    }
  }

  void map_columns() {
    const int nv = int(c.size());
    map.assign(nv, {});
    ncols = 0;
    for (int j = 0; j < nv; ++j) {
      if (lo[j] > hi[j]) throw std::invalid_argument("lp: empty variable bounds");
      if (std::isfinite(lo[j])) map[j] = {ncols++, -1, lo[j], 1.0};
      else if (std::isfinite(hi[j])) map[j] = {ncols++, -1, hi[j], -1.0};
      else {
        map[j].col = ncols++;
        map[j].col_neg = ncols++;
      }
    }
    cc.assign(ncols, 0.0);
    cz = 0;
    for (int j = 0; j < nv; ++j) {
      const Map& mp = map[j];
      if (mp.col_neg >= 0) {
        cc[mp.col] += c[j];
        cc[mp.col_neg] -= c[j];
      } else {
        cz += c[j] * mp.off;
        cc[mp.col] += c[j] * mp.sgn;
      }
    }
  }

  Ineq translate(const Coefs& coef, double rhs, double sign) const {
    Ineq q;
    q.rhs = sign * rhs;
    for (auto [j, v] : coef) {
      const double av = sign * v;
      const Map& mp = map[j];
      if (mp.col_neg >= 0) {
        q.coef.push_back({mp.col, av});
        q.coef.push_back({mp.col_neg, -av});
      } else {
        q.rhs -= av * mp.off;
        q.coef.push_back({mp.col, av * mp.sgn});
      }
    }
    return q;
  }

  void make_ineqs(URow& r) {
    r.le = r.ge = -1;
    if (std::isfinite(r.hi)) {
      r.le = int(ineqs.size());
      ineqs.push_back(translate(r.coef, r.hi, 1.0));
      ineqs.back().rhs += jitter(ineqs.size(), r.hi);
    }
    if (std::isfinite(r.lo)) {
      r.ge = int(ineqs.size());
      ineqs.push_back(translate(r.coef, r.lo, -1.0));
      ineqs.back().rhs += jitter(ineqs.size(), r.lo);
    }
  }

  void rebuild_ineqs() {
    ineqs.clear();
    for (int j = 0; j < int(c.size()); ++j)
      if (map[j].col_neg < 0 && std::isfinite(lo[j]) && std::isfinite(hi[j]))
        ineqs.push_back({{{map[j].col, 1.0}}, hi[j] - lo[j]});
    for (auto& r : urows) make_ineqs(r);
  }

  // Appends one internal row to a built dictionary, substituting basics.
  void append(int k) {
    const Ineq& q = ineqs[k];
    std::vector<double> row(n, 0.0);
    double rhs = q.rhs;
    for (auto [col, v] : q.coef) {
      const int w = where[col];
      if (w < 0) {
        row[-w - 1] += v;
      } else {
        rhs -= v * b[w];
        const double* ri = &A[size_t(w) * n];
        for (int j = 0; j < n; ++j) row[j] -= v * ri[j];
      }
    }
    if (art_col >= 0) row[art_col] = 0.0;
    A.insert(A.end(), row.begin(), row.end());
    b.push_back(rhs);
    if (rhs < -kFeasTol) dirty = true;
    basic.push_back(slack_id(k));
    where.push_back(m);
    ++m;
  }

  // Shifts the right-hand side of internal row k by delta.  A relaxation of a
  // tight row first pivots its slack into the basis so the current vertex
  // survives; the row then simply gains slack.
  bool dirty = false;  // primal infeasibility may be pending

  void shift_rhs(int k, double delta) {
    ineqs[k].rhs += delta;
    if (!built) return;
    int w = where[slack_id(k)];
    if (w < 0 && delta > 0 && !dirty) {
      const int s = -w - 1;
      double tmax = inf;
      for (int i = 0; i < m; ++i) {
        const double ais = a(i, s);
        if (ais > kPivTol) tmax = std::min(tmax, (b[i] + kFeasTol) / ais);
      }
      int r = -1;
      double big = 0;
      for (int i = 0; i < m; ++i) {
        const double ais = a(i, s);
        if (ais > kPivTol && b[i] / ais <= tmax && ais > big) {
          big = ais;
          r = i;
        }
      }
      if (r >= 0) {
        pivot(r, s);
        w = r;
      }
    }
    if (w >= 0) {
      b[w] += delta;
      if (b[w] < -kFeasTol) dirty = true;
    } else {
      const int s = -w - 1;
      for (int i = 0; i < m; ++i) {
        b[i] += a(i, s) * delta;
        if (b[i] < -kFeasTol) dirty = true;
      }
      z0 -= d[s] * delta;
    }
  }

  LpStatus build(int& iters, int max_iter) {
    map_columns();
    rebuild_ineqs();
    m = int(ineqs.size());
    n = ncols + 1;
    art_col = ncols;
    A.assign(size_t(m) * n, 0.0);
    b.assign(m, 0.0);
    d.assign(n, 0.0);
    z0 = 0;
    basic.resize(m);
    nonbasic.resize(n);
    where.assign(ncols + 1 + m, 0);
    for (int j = 0; j < ncols; ++j) {
      nonbasic[j] = j;
      where[j] = -(j + 1);
    }
    nonbasic[art_col] = art_id();
    where[art_id()] = -(art_col + 1);
    double minb = 0;
    int minrow = -1;
    for (int i = 0; i < m; ++i) {
      basic[i] = slack_id(i);
      where[slack_id(i)] = i;
      for (auto [col, v] : ineqs[i].coef) a(i, col) += v;
      b[i] = ineqs[i].rhs;
      a(i, art_col) = -1.0;
      if (b[i] < minb) {
        minb = b[i];
        minrow = i;
      }
    }
    built = true;
    dirty = false;
    pivots_since_build = 0;
    if (minrow >= 0) {
      const int keep = art_col;
      art_col = -1;  // allowed to move during phase one
      d[keep] = -1.0;
      pivot(minrow, keep);
      LpStatus st = primal(iters, max_iter);
      if (st == LpStatus::iteration_limit) return st;
      if (z0 < -1e-7) return LpStatus::infeasible;
      const int w = where[art_id()];
      if (w >= 0) {
        int best = -1;
        for (int j = 0; j < n; ++j)
          if (std::abs(a(w, j)) > kPivTol && (best < 0 || std::abs(a(w, j)) > std::abs(a(w, best)))) best = j;
        if (best >= 0) pivot(w, best);
      }
      art_col = -where[art_id()] - 1;
    }
    for (int i = 0; i < m; ++i) a(i, art_col) = 0.0;
    // Phase two objective over the current nonbasics.
    std::fill(d.begin(), d.end(), 0.0);
    z0 = cz;
    for (int j = 0; j < n; ++j)
      if (nonbasic[j] < ncols) d[j] += cc[nonbasic[j]];
    for (int i = 0; i < m; ++i) {
      const int v = basic[i];
      if (v < ncols && cc[v] != 0.0) {
        z0 += cc[v] * b[i];
        for (int j = 0; j < n; ++j) d[j] -= cc[v] * a(i, j);
      }
    }
    d[art_col] = 0.0;
    return LpStatus::optimal;
  }

  // Cost shifting: push near-zero reduced costs to small distinct negatives so
  // the dual ratio test is not tied everywhere.  Undone by recompute_costs().
  void shift_costs() {
    for (int j = 0; j < n; ++j) {
      if (j == art_col) continue;
      if (d[j] > 0) d[j] = 0;  // treat as zero and shift below
      uint64_t z = uint64_t(nonbasic[j] + 1) * 0x9E3779B97F4A7C15ull;
      z ^= z >> 29;
      const double delta = 1e-7 * (1.0 + double(z % 1024) / 1024.0);
      if (d[j] > -delta) d[j] = -delta;
    }
  }

  void recompute_costs() {
    std::fill(d.begin(), d.end(), 0.0);
    z0 = cz;
    for (int j = 0; j < n; ++j)
      if (nonbasic[j] < ncols) d[j] += cc[nonbasic[j]];
    for (int i = 0; i < m; ++i) {
      const int v = basic[i];
      if (v < ncols && cc[v] != 0.0) {
        z0 += cc[v] * b[i];
        const double* ri = &A[size_t(i) * n];
        for (int j = 0; j < n; ++j) d[j] -= cc[v] * ri[j];
      }
    }
    if (art_col >= 0) d[art_col] = 0.0;
  }

  std::vector<double> extract() const {
    std::vector<double> y(ncols, 0.0);
    for (int i = 0; i < m; ++i)
      if (basic[i] < ncols) y[basic[i]] = b[i];
    std::vector<double> x(c.size());
    for (size_t j = 0; j < c.size(); ++j) {
      const Map& mp = map[j];
      x[j] = mp.col_neg >= 0 ? y[mp.col] - y[mp.col_neg] : mp.off + mp.sgn * y[mp.col];
    }
    return x;
  }

  bool consistent(const std::vector<double>& x) const {
    const double tol = 1e-6 + 2 * perturb;
    for (size_t j = 0; j < x.size(); ++j)
      if (x[j] < lo[j] - tol || x[j] > hi[j] + tol) return false;
    for (auto& r : urows) {
      double v = 0;
      for (auto [j, a] : r.coef) v += a * x[j];
      if (v < r.lo - tol * (1 + std::abs(r.lo)) || v > r.hi + tol * (1 + std::abs(r.hi))) return false;
    }
    return true;
  }
};

Lp::Lp() : p_(std::make_unique<Impl>()) {}
Lp::~Lp() = default;
Lp::Lp(const Lp& o) : p_(std::make_unique<Impl>(*o.p_)) {}
Lp& Lp::operator=(const Lp& o) {
  if (this != &o) p_ = std::make_unique<Impl>(*o.p_);
  return *this;
}

int Lp::add_var(double lo, double hi, double obj) {
  if (p_->built) throw std::logic_error("lp: columns are fixed after the first solve");
  p_->lo.push_back(lo);
  p_->hi.push_back(hi);
  p_->c.push_back(obj);
  return int(p_->c.size()) - 1;
}

int Lp::add_row(Coefs coef, double lo, double hi) {
  for (auto& [j, v] : coef)
    if (j < 0 || j >= int(p_->c.size())) throw std::out_of_range("lp: row references unknown variable");
  p_->urows.push_back({std::move(coef), lo, hi});
  if (p_->built) {
    const size_t first = p_->ineqs.size();
    p_->make_ineqs(p_->urows.back());
    for (size_t k = first; k < p_->ineqs.size(); ++k) p_->append(int(k));
  }
  return int(p_->urows.size()) - 1;
}

void Lp::set_row_bounds(int row, double lo, double hi) {
  auto& r = p_->urows.at(row);
  if (std::isfinite(lo) != std::isfinite(r.lo) || std::isfinite(hi) != std::isfinite(r.hi))
    throw std::invalid_argument("lp: a row side cannot switch between finite and infinite");
  if (r.le >= 0 && hi != r.hi) p_->shift_rhs(r.le, hi - r.hi);
  if (r.ge >= 0 && lo != r.lo) p_->shift_rhs(r.ge, -(lo - r.lo));
  r.lo = lo;
  r.hi = hi;
}

void Lp::set_perturbation(double scale) {
  p_->perturb = scale;
  p_->built = false;
}

int Lp::num_vars() const { return int(p_->c.size()); }
int Lp::num_rows() const { return int(p_->urows.size()); }

LpResult Lp::solve(int max_iter) {
  Impl& P = *p_;
  LpResult res;
  int iters = 0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    LpStatus st;
    if (!P.built || attempt > 0 || P.pivots_since_build > 20000) {
      st = P.build(iters, max_iter);
      if (st == LpStatus::optimal) st = P.primal(iters, max_iter);
    } else {
      st = LpStatus::optimal;
      if (P.dirty) {
        // Primal pivots during relaxations may have spoiled dual feasibility;
        // cost shifting restores it before the dual pass.
        P.shift_costs();
        st = P.dual(iters, max_iter);
        P.recompute_costs();
      }
      if (st == LpStatus::optimal) st = P.primal(iters, max_iter);
    }
    res.status = st;
    res.iterations = iters;
    if (st == LpStatus::optimal) P.dirty = false;
    if (st == LpStatus::infeasible && attempt == 0 && P.pivots_since_build > 0) {
      P.built = false;  // confirm from a fresh factorization
      continue;
    }
    if (st != LpStatus::optimal) {
      P.built = false;
      return res;
    }
    res.x = P.extract();
    if (!P.consistent(res.x) && attempt == 0) {
      P.built = false;
      continue;
    }
    res.objective = 0;
    for (size_t j = 0; j < P.c.size(); ++j) res.objective += P.c[j] * res.x[j];
    return res;
  }
  return res;
}

LpResult solve_lp(const LpProblem& p, int max_iter) {
  Lp lp;
  for (int j = 0; j < p.num_vars; ++j) lp.add_var(p.lo[j], p.hi[j], p.c[j]);
  for (auto& r : p.rows) lp.add_row(r.coef, r.lo, r.hi);
  return lp.solve(max_iter);
}

}  // namespace pegfactor
