// Copyright 2026 The sgnash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgnash/sparse_ldl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include <amd.h>
#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sgnash/error.hpp"

namespace sgnash {
namespace {

constexpr int kBlock = 96;
constexpr int kDenseFallbackLimit = 500;
constexpr double kSmallPivot = 1e-12;

void CheckLower(const SymmetricLower& h) {
  Require(h.rows() == h.cols(), ErrorCode::kDimensionMismatch, "matrix must be square");
  Require(h.isCompressed(), ErrorCode::kInvalidArgument, "matrix must be compressed");
  for (int c = 0; c < h.outerSize(); ++c) {
    int prev = -1;
    for (SymmetricLower::InnerIterator it(h, c); it; ++it) {
      Require(it.row() >= c && it.row() > prev, ErrorCode::kInvalidArgument,
              "expected a sorted lower triangle");
      prev = static_cast<int>(it.row());
    }
  }
}

// Off-diagonal pattern of the full symmetric matrix, columns sorted.
void FullPattern(const SymmetricLower& h, std::vector<int>* ptr, std::vector<int>* idx) {
  const int n = static_cast<int>(h.cols());
  std::vector<int> count(n, 0);
  for (int c = 0; c < n; ++c) {
    for (SymmetricLower::InnerIterator it(h, c); it; ++it) {
      if (it.row() == c) continue;
      ++count[c];
      ++count[it.row()];
    }
  }
  ptr->assign(n + 1, 0);
  for (int c = 0; c < n; ++c) (*ptr)[c + 1] = (*ptr)[c] + count[c];
  idx->assign((*ptr)[n], 0);
  std::vector<int> fill(ptr->begin(), ptr->end() - 1);
  for (int c = 0; c < n; ++c) {
    for (SymmetricLower::InnerIterator it(h, c); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (r == c) continue;
      (*idx)[fill[c]++] = r;
      (*idx)[fill[r]++] = c;
    }
  }
}

std::vector<int> EliminationTree(int n, const std::vector<int>& ptr,
                                 const std::vector<int>& idx) {
  std::vector<int> parent(n, -1);
  std::vector<int> ancestor(n, -1);
  for (int k = 0; k < n; ++k) {
    for (int p = ptr[k]; p < ptr[k + 1]; ++p) {
      int i = idx[p];
      while (i != -1 && i < k) {
        const int next = ancestor[i];
        ancestor[i] = k;
        if (next == -1) {
          parent[i] = k;
          break;
        }
        i = next;
      }
    }
  }
  return parent;
}

std::vector<int> Postorder(const std::vector<int>& parent) {
  const int n = static_cast<int>(parent.size());
  std::vector<int> head(n, -1);
  std::vector<int> next(n, -1);
  for (int j = n - 1; j >= 0; --j) {
    if (parent[j] == -1) continue;
    next[j] = head[parent[j]];
    head[parent[j]] = j;
  }
  std::vector<int> post;
  post.reserve(n);
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (parent[root] != -1) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      const int p = stack.back();
      const int child = head[p];
      if (child == -1) {
        stack.pop_back();
        post.push_back(p);
      } else {
        head[p] = next[child];
        stack.push_back(child);
      }
    }
  }
  return post;
}

// Pattern of P A P^T (off-diagonal, full, sorted) for perm[new] = old.
void PermutePattern(const std::vector<int>& ptr, const std::vector<int>& idx,
                    const std::vector<int>& perm, const std::vector<int>& pinv,
                    std::vector<int>* pptr, std::vector<int>* pidx) {
  const int n = static_cast<int>(perm.size());
  pptr->assign(n + 1, 0);
  pidx->resize(idx.size());
  for (int j = 0; j < n; ++j) {
    const int old = perm[j];
    (*pptr)[j + 1] = (*pptr)[j] + (ptr[old + 1] - ptr[old]);
    int out = (*pptr)[j];
    for (int p = ptr[old]; p < ptr[old + 1]; ++p) (*pidx)[out++] = pinv[idx[p]];
    std::sort(pidx->begin() + (*pptr)[j], pidx->begin() + (*pptr)[j + 1]);
  }
}

// Factors the leading p columns of the symmetric front f (lower triangle
// significant). On exit f(:, 0:p) holds unit-lower L below the diagonal and D
// on it; f(p:, p:) holds the Schur complement. Returns the failing column.
std::optional<int> PartialLdl(Eigen::MatrixXd& f, int p, double tiny,
                              std::vector<int>* small_cols) {
  const int k = static_cast<int>(f.rows());
  Eigen::VectorXd v;
  for (int c0 = 0; c0 < p; c0 += kBlock) {
    const int nb = std::min(kBlock, p - c0);
    for (int j = c0; j < c0 + nb; ++j) {
      const double d = f(j, j);
      if (!std::isfinite(d) || d == 0.0) return j;
      if (std::abs(d) < tiny) small_cols->push_back(j);
      const int below = k - j - 1;
      v = f.col(j).tail(below);
      for (int c = j + 1; c < c0 + nb; ++c) {
        const int off = c - j - 1;
        f.col(c).tail(k - c) -= v.tail(below - off) * (v[off] / d);
      }
      f.col(j).tail(below) = v / d;
    }
    const int rest = k - (c0 + nb);
    if (rest == 0) continue;
    const auto lp = f.block(c0 + nb, c0, rest, nb);
    const Eigen::MatrixXd w = lp * f.diagonal().segment(c0, nb).asDiagonal();
    f.bottomRightCorner(rest, rest).triangularView<Eigen::Lower>() -= lp * w.transpose();
  }
  return std::nullopt;
}

struct Update {
  std::vector<int> rows;
  Eigen::MatrixXd mat;
};

}  // namespace

HAssembler::HAssembler(const Eigen::SparseMatrix<double>& g_pattern) {
  const int n = static_cast<int>(g_pattern.cols());
  Eigen::SparseMatrix<double, Eigen::RowMajor> gr = g_pattern;
  std::vector<int> mark(n, -1);
  std::vector<int> rows;
  std::vector<Eigen::Index> outer{0};
  std::vector<int> inner;
  for (int j = 0; j < n; ++j) {
    rows.clear();
    rows.push_back(j);
    mark[j] = j;
    for (Eigen::SparseMatrix<double>::InnerIterator it(g_pattern, j); it; ++it) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator jt(gr, it.row()); jt;
           ++jt) {
        const int k = static_cast<int>(jt.col());
        if (k > j && mark[k] != j) {
          mark[k] = j;
          rows.push_back(k);
        }
      }
    }
    std::sort(rows.begin(), rows.end());
    inner.insert(inner.end(), rows.begin(), rows.end());
    outer.push_back(static_cast<Eigen::Index>(inner.size()));
  }
  std::vector<int> outer_int(outer.begin(), outer.end());
  std::vector<double> zeros(inner.size(), 0.0);
  pattern_ = Eigen::Map<const SymmetricLower>(n, n, static_cast<Eigen::Index>(inner.size()),
                                              outer_int.data(), inner.data(), zeros.data());
}

SymmetricLower HAssembler::Build(const Eigen::SparseMatrix<double>& grad,
                                 const Eigen::VectorXd& g, const Eigen::VectorXd& w) const {
  SymmetricLower h = pattern_;
  BuildInto(grad, g, w, &h);
  return h;
}

void HAssembler::BuildInto(const Eigen::SparseMatrix<double>& grad, const Eigen::VectorXd& g,
                           const Eigen::VectorXd& w, SymmetricLower* h) const {
  const int n = static_cast<int>(pattern_.cols());
  Require(grad.cols() == n && g.size() == n && w.size() == n, ErrorCode::kDimensionMismatch,
          "H assembly inputs disagree on the constraint count");
  Require(h->rows() == n && h->cols() == n && h->nonZeros() == pattern_.nonZeros(),
          ErrorCode::kDimensionMismatch, "H does not carry the assembler pattern");
  Require((w.array() > 0.0).all(), ErrorCode::kInvalidArgument, "weights must be positive");
  Eigen::SparseMatrix<double, Eigen::RowMajor> gr = grad;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(grad, j); it; ++it) {
      const double gv = it.value();
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator jt(gr, it.row()); jt;
           ++jt) {
        if (jt.col() >= j) acc[jt.col()] += gv * jt.value();
      }
    }
    for (SymmetricLower::InnerIterator it(*h, j); it; ++it) {
      it.valueRef() = acc[it.row()];
      acc[it.row()] = 0.0;
    }
    h->coeffRef(j, j) -= w[j] * g[j];
  }
}

SymmetricLower BuildH(const Eigen::SparseMatrix<double>& grad, const Eigen::VectorXd& g,
                      const Eigen::VectorXd& w) {
  return HAssembler(grad).Build(grad, g, w);
}

double FillFraction(const SymmetricLower& h) {
  const double n = static_cast<double>(h.cols());
  if (n == 0) return 0.0;
  double diag = 0;
  for (int c = 0; c < h.outerSize(); ++c) {
    for (SymmetricLower::InnerIterator it(h, c); it; ++it) {
      if (it.row() == c) diag += 1;
    }
  }
  return (2.0 * static_cast<double>(h.nonZeros()) - diag) / (n * n);
}

Eigen::MatrixXd ToDense(const SymmetricLower& h) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (int c = 0; c < h.outerSize(); ++c) {
    for (SymmetricLower::InnerIterator it(h, c); it; ++it) {
      out(it.row(), c) = it.value();
      out(c, it.row()) = it.value();
    }
  }
  return out;
}

struct LdlFactorization::Impl {
  Ordering ordering;
  int n = 0;
  bool analyzed = false;
  std::vector<int> pat_outer;
  std::vector<int> pat_inner;

  std::vector<int> perm;
  std::vector<int> pinv;
  // Supernode s owns columns [first[s], first[s+1]) and front rows rows[s].
  std::vector<int> first;
  std::vector<std::vector<int>> rows;
  std::vector<int> num_children;
  // Assembly map: entries of H bucketed by supernode.
  std::vector<int> asm_ptr;
  std::vector<int> asm_src;
  std::vector<int> asm_row;
  std::vector<int> asm_col;

  std::vector<Eigen::MatrixXd> panels;
  Eigen::VectorXd d;
  std::vector<int> small;
  std::optional<Eigen::LDLT<Eigen::MatrixXd>> dense;
  int factorizations = 0;
  mutable std::atomic<long> solves{0};
};

LdlFactorization::LdlFactorization(Ordering ordering) : impl_(std::make_unique<Impl>()) {
  impl_->ordering = ordering;
}
LdlFactorization::~LdlFactorization() = default;
LdlFactorization::LdlFactorization(LdlFactorization&&) noexcept = default;
LdlFactorization& LdlFactorization::operator=(LdlFactorization&&) noexcept = default;

void LdlFactorization::Analyze(const SymmetricLower& h) {
  CheckLower(h);
  Impl& m = *impl_;
  const int n = static_cast<int>(h.cols());
  m.n = n;
  m.pat_outer.assign(h.outerIndexPtr(), h.outerIndexPtr() + n + 1);
  m.pat_inner.assign(h.innerIndexPtr(), h.innerIndexPtr() + h.nonZeros());

  std::vector<int> ptr;
  std::vector<int> idx;
  FullPattern(h, &ptr, &idx);

  std::vector<int> order(n);
  if (m.ordering == Ordering::kAmd && n > 0) {
    // AMD rejects a null index array, which an empty vector may hand out.
    idx.reserve(1);
    const int status = amd_order(n, ptr.data(), idx.data(), order.data(), nullptr, nullptr);
    Require(status == AMD_OK || status == AMD_OK_BUT_JUMBLED, ErrorCode::kInternal,
            "minimum degree ordering failed");
  } else {
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<int> inv(n);
  for (int k = 0; k < n; ++k) inv[order[k]] = k;
  std::vector<int> pptr;
  std::vector<int> pidx;
  PermutePattern(ptr, idx, order, inv, &pptr, &pidx);
  std::vector<int> parent = EliminationTree(n, pptr, pidx);
  // Relabel by an elimination-tree postorder so supernodes are contiguous
  // and every child's update sits on top of the stack when its parent runs.
  const std::vector<int> post = Postorder(parent);
  m.perm.resize(n);
  for (int k = 0; k < n; ++k) m.perm[k] = order[post[k]];
  m.pinv.resize(n);
  for (int k = 0; k < n; ++k) m.pinv[m.perm[k]] = k;
  PermutePattern(ptr, idx, m.perm, m.pinv, &pptr, &pidx);
  parent = EliminationTree(n, pptr, pidx);

  // Column counts by row-subtree traversal.
  std::vector<int> count(n, 1);
  std::vector<int> mark(n, -1);
  for (int i = 0; i < n; ++i) {
    mark[i] = i;
    for (int p = pptr[i]; p < pptr[i + 1]; ++p) {
      for (int j = pidx[p]; j != -1 && j < i && mark[j] != i; j = parent[j]) {
        mark[j] = i;
        ++count[j];
      }
    }
  }

  m.first.clear();
  std::vector<int> snode_of(n);
  for (int j = 0; j < n; ++j) {
    const bool extends = j > 0 && parent[j - 1] == j && count[j - 1] == count[j] + 1;
    if (!extends) m.first.push_back(j);
    snode_of[j] = static_cast<int>(m.first.size()) - 1;
  }
  const int ns = static_cast<int>(m.first.size());
  m.first.push_back(n);

  m.rows.assign(ns, {});
  for (int s = 0; s < ns; ++s) {
    for (int c = m.first[s]; c < m.first[s + 1]; ++c) m.rows[s].push_back(c);
  }
  std::vector<int> smark(ns, -1);
  std::fill(mark.begin(), mark.end(), -1);
  for (int i = 0; i < n; ++i) {
    mark[i] = i;
    for (int p = pptr[i]; p < pptr[i + 1]; ++p) {
      for (int j = pidx[p]; j != -1 && j < i && mark[j] != i; j = parent[j]) {
        mark[j] = i;
        const int s = snode_of[j];
        if (i >= m.first[s + 1] && smark[s] != i) {
          smark[s] = i;
          m.rows[s].push_back(i);
        }
      }
    }
  }
  m.num_children.assign(ns, 0);
  for (int s = 0; s < ns; ++s) {
    const int width = m.first[s + 1] - m.first[s];
    if (static_cast<int>(m.rows[s].size()) > width) {
      ++m.num_children[snode_of[m.rows[s][width]]];
    }
  }

  m.asm_ptr.assign(ns + 1, 0);
  for (int c = 0; c < n; ++c) {
    for (int p = m.pat_outer[c]; p < m.pat_outer[c + 1]; ++p) {
      const int j = std::min(m.pinv[c], m.pinv[m.pat_inner[p]]);
      ++m.asm_ptr[snode_of[j] + 1];
    }
  }
  for (int s = 0; s < ns; ++s) m.asm_ptr[s + 1] += m.asm_ptr[s];
  const int nnz = m.asm_ptr[ns];
  m.asm_src.resize(nnz);
  m.asm_row.resize(nnz);
  m.asm_col.resize(nnz);
  std::vector<int> fill(m.asm_ptr.begin(), m.asm_ptr.end() - 1);
  for (int c = 0; c < n; ++c) {
    for (int p = m.pat_outer[c]; p < m.pat_outer[c + 1]; ++p) {
      const int a = m.pinv[c];
      const int b = m.pinv[m.pat_inner[p]];
      const int j = std::min(a, b);
      const int out = fill[snode_of[j]]++;
      m.asm_src[out] = p;
      m.asm_row[out] = std::max(a, b);
      m.asm_col[out] = j;
    }
  }
  m.analyzed = true;
  m.panels.clear();
  m.dense.reset();
}

void LdlFactorization::Factorize(const SymmetricLower& h) {
  Impl& m = *impl_;
  const bool same_pattern =
      m.analyzed && h.cols() == m.n && h.isCompressed() &&
      std::equal(m.pat_outer.begin(), m.pat_outer.end(), h.outerIndexPtr()) &&
      static_cast<std::size_t>(h.nonZeros()) == m.pat_inner.size() &&
      std::equal(m.pat_inner.begin(), m.pat_inner.end(), h.innerIndexPtr());
  if (!same_pattern) Analyze(h);
  const int n = m.n;
  const int ns = static_cast<int>(m.first.size()) - 1;
  ++m.factorizations;
  m.small.clear();
  m.dense.reset();
  m.panels.assign(ns, Eigen::MatrixXd());
  m.d.resize(n);

  const double* values = h.valuePtr();
  double max_abs = 0.0;
  for (Eigen::Index p = 0; p < h.nonZeros(); ++p) max_abs = std::max(max_abs, std::abs(values[p]));
  const double tiny = kSmallPivot * max_abs;

  std::vector<int> relpos(n, -1);
  std::vector<Update> stack;
  std::vector<int> small_cols;
  std::optional<int> failed;
  for (int s = 0; s < ns && !failed; ++s) {
    const std::vector<int>& rows = m.rows[s];
    const int k = static_cast<int>(rows.size());
    const int p = m.first[s + 1] - m.first[s];
    for (int a = 0; a < k; ++a) relpos[rows[a]] = a;
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(k, k);
    for (int e = m.asm_ptr[s]; e < m.asm_ptr[s + 1]; ++e) {
      f(relpos[m.asm_row[e]], relpos[m.asm_col[e]]) += values[m.asm_src[e]];
    }
    for (int c = 0; c < m.num_children[s]; ++c) {
      const Update& u = stack.back();
      const int r = static_cast<int>(u.rows.size());
      std::vector<int> map(r);
      for (int a = 0; a < r; ++a) map[a] = relpos[u.rows[a]];
      for (int b = 0; b < r; ++b) {
        for (int a = b; a < r; ++a) f(map[a], map[b]) += u.mat(a, b);
      }
      stack.pop_back();
    }
    small_cols.clear();
    failed = PartialLdl(f, p, tiny, &small_cols);
    if (failed) {
      *failed += m.first[s];
      break;
    }
    for (int c : small_cols) m.small.push_back(m.perm[m.first[s] + c]);
    m.d.segment(m.first[s], p) = f.diagonal().head(p);
    if (k > p) {
      Update u;
      u.rows.assign(rows.begin() + p, rows.end());
      u.mat = f.bottomRightCorner(k - p, k - p);
      stack.push_back(std::move(u));
    }
    m.panels[s] = f.leftCols(p);
  }
  if (!failed) return;

  const int pivot = m.perm[*failed];
  m.panels.clear();
  Require(n < kDenseFallbackLimit, ErrorCode::kNumeric,
          "zero or non-finite pivot at index " + std::to_string(pivot) +
              " of a " + std::to_string(n) + "-dimensional matrix");
  m.dense.emplace(ToDense(h));
  Require(m.dense->info() == Eigen::Success, ErrorCode::kNumeric,
          "dense LDL^T fallback failed after zero pivot at index " + std::to_string(pivot));
  m.small.clear();
  const Eigen::VectorXd dd = m.dense->vectorD();
  Eigen::VectorXi tr = m.dense->transpositionsP().indices();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = 0; k < n; ++k) std::swap(order[k], order[tr[k]]);
  for (int k = 0; k < n; ++k) {
    if (std::abs(dd[k]) < tiny) m.small.push_back(order[k]);
  }
  m.d = dd;
}

Eigen::VectorXd LdlFactorization::Solve(const Eigen::VectorXd& b) const {
  const Impl& m = *impl_;
  Require(m.analyzed && m.factorizations > 0, ErrorCode::kInvalidArgument,
          "solve called before factorization");
  Require(b.size() == m.n, ErrorCode::kDimensionMismatch, "right-hand side length mismatch");
  ++m.solves;
  if (m.dense) return m.dense->solve(b);
  const int n = m.n;
  const int ns = static_cast<int>(m.first.size()) - 1;
  Eigen::VectorXd y(n);
  for (int k = 0; k < n; ++k) y[k] = b[m.perm[k]];
  Eigen::VectorXd tmp;
  for (int s = 0; s < ns; ++s) {
    const Eigen::MatrixXd& panel = m.panels[s];
    const int p = static_cast<int>(panel.cols());
    const int k = static_cast<int>(panel.rows());
    auto ys = y.segment(m.first[s], p);
    panel.topRows(p).triangularView<Eigen::UnitLower>().solveInPlace(ys);
    if (k > p) {
      tmp.noalias() = panel.bottomRows(k - p) * ys;
      for (int a = 0; a < k - p; ++a) y[m.rows[s][p + a]] -= tmp[a];
    }
  }
  y.array() /= m.d.array();
  for (int s = ns - 1; s >= 0; --s) {
    const Eigen::MatrixXd& panel = m.panels[s];
    const int p = static_cast<int>(panel.cols());
    const int k = static_cast<int>(panel.rows());
    auto ys = y.segment(m.first[s], p);
    if (k > p) {
      tmp.resize(k - p);
      for (int a = 0; a < k - p; ++a) tmp[a] = y[m.rows[s][p + a]];
      ys.noalias() -= panel.bottomRows(k - p).transpose() * tmp;
    }
    panel.topRows(p).transpose().triangularView<Eigen::UnitUpper>().solveInPlace(ys);
  }
  Eigen::VectorXd x(n);
  for (int k = 0; k < n; ++k) x[m.perm[k]] = y[k];
  return x;
}

int LdlFactorization::size() const { return impl_->n; }
const std::vector<int>& LdlFactorization::permutation() const { return impl_->perm; }
const std::vector<int>& LdlFactorization::small_pivots() const { return impl_->small; }
bool LdlFactorization::used_dense_fallback() const { return impl_->dense.has_value(); }
int LdlFactorization::num_supernodes() const {
  return impl_->first.empty() ? 0 : static_cast<int>(impl_->first.size()) - 1;
}

long LdlFactorization::factor_nonzeros() const {
  long total = 0;
  const Impl& m = *impl_;
  for (std::size_t s = 0; s + 1 < m.first.size(); ++s) {
    const long p = m.first[s + 1] - m.first[s];
    const long k = static_cast<long>(m.rows[s].size());
    total += p * (p - 1) / 2 + (k - p) * p;
  }
  return total;
}

Eigen::SparseMatrix<double> LdlFactorization::FactorL() const {
  const Impl& m = *impl_;
  Eigen::SparseMatrix<double> l(m.n, m.n);
  if (m.dense || m.panels.empty()) return l;
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t s = 0; s < m.panels.size(); ++s) {
    const Eigen::MatrixXd& panel = m.panels[s];
    for (int c = 0; c < panel.cols(); ++c) {
      const int col = m.first[s] + c;
      trips.emplace_back(col, col, 1.0);
      for (int a = c + 1; a < panel.rows(); ++a) {
        trips.emplace_back(m.rows[s][a], col, panel(a, c));
      }
    }
  }
  l.setFromTriplets(trips.begin(), trips.end());
  return l;
}

Eigen::VectorXd LdlFactorization::FactorD() const { return impl_->d; }
int LdlFactorization::num_factorizations() const { return impl_->factorizations; }
long LdlFactorization::num_solves() const { return impl_->solves.load(); }

}  // namespace sgnash
