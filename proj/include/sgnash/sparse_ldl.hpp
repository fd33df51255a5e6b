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

#ifndef SGNASH_SPARSE_LDL_HPP_
#define SGNASH_SPARSE_LDL_HPP_

#include <atomic>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace sgnash {

// Symmetric matrices are passed as their lower triangle, diagonal included,
// in compressed column storage with sorted row indices.
using SymmetricLower = Eigen::SparseMatrix<double>;

// H = G^T G - diag(w .* g) for a constraint-gradient matrix G whose columns
// are the gradients. The pattern of G^T G is computed once from the pattern
// of G and reused for every numeric assembly.
class HAssembler {
 public:
  explicit HAssembler(const Eigen::SparseMatrix<double>& g_pattern);

  SymmetricLower Build(const Eigen::SparseMatrix<double>& grad,
                       const Eigen::VectorXd& g, const Eigen::VectorXd& w) const;
  // Overwrites the values of h, which must carry this assembler's pattern.
  void BuildInto(const Eigen::SparseMatrix<double>& grad, const Eigen::VectorXd& g,
                 const Eigen::VectorXd& w, SymmetricLower* h) const;

  const SymmetricLower& pattern() const { return pattern_; }

 private:
  SymmetricLower pattern_;
};

SymmetricLower BuildH(const Eigen::SparseMatrix<double>& grad, const Eigen::VectorXd& g,
                      const Eigen::VectorXd& w);

// Structural nonzeros of the full symmetric matrix over n^2.
double FillFraction(const SymmetricLower& h);

// Full symmetric dense copy.
Eigen::MatrixXd ToDense(const SymmetricLower& h);

enum class Ordering { kAmd, kNatural };

// P H P^T = L D L^T with P from approximate minimum degree (composed with an
// elimination-tree postorder) and a supernodal multifrontal numeric phase.
// No pivoting is done beyond checking diagonal magnitudes. When a zero or
// non-finite pivot appears and n < 500 the factorization switches to a dense
// pivoted LDL^T; larger problems raise kNumeric naming the pivot.
class LdlFactorization {
 public:
  explicit LdlFactorization(Ordering ordering = Ordering::kAmd);
  ~LdlFactorization();
  LdlFactorization(LdlFactorization&&) noexcept;
  LdlFactorization& operator=(LdlFactorization&&) noexcept;

  // Symbolic analysis; Factorize calls it when the pattern changes.
  void Analyze(const SymmetricLower& h);
  void Factorize(const SymmetricLower& h);

  Eigen::VectorXd Solve(const Eigen::VectorXd& b) const;

  int size() const;
  // perm[k] is the original index of the k-th pivot.
  const std::vector<int>& permutation() const;
  // Original indices of pivots with |D| < 1e-12 max|H|.
  const std::vector<int>& small_pivots() const;
  bool used_dense_fallback() const;
  int num_supernodes() const;
  // Nonzeros of L below the diagonal.
  long factor_nonzeros() const;

  // Factors in the permuted space; empty when the dense fallback ran.
  Eigen::SparseMatrix<double> FactorL() const;
  Eigen::VectorXd FactorD() const;

  int num_factorizations() const;
  long num_solves() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sgnash

#endif  // SGNASH_SPARSE_LDL_HPP_
