#pragma once

// Exact (double precision, compensated) evaluation of the sums that appear
// in the quadrinomial estimate: S_chi(Psi), its subgroup-averaged form,
// bilinear sums and quadrilinear sums with three-index weights.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "quadsum/field.hpp"

namespace quadsum {

/// chi_j(g^t) = exp(2 pi i j t / (p-1)); j = 0 is the trivial character.
struct CharacterIndex {
  std::uint64_t j = 0;

  /// (p-1) / gcd(j, p-1).
  std::uint64_t order(const FieldCtx& ctx) const;
};

struct SumValue {
  std::complex<double> value;
  double magnitude = 0.0;
  std::uint64_t term_count = 0;
};

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(std::complex<double> z) noexcept {
    add_part(re_, re_c_, z.real());
    add_part(im_, im_c_, z.imag());
  }
  void add(const CompensatedSum& other) noexcept {
    add({other.re_, other.im_});
    add({other.re_c_, other.im_c_});
  }
  std::complex<double> value() const noexcept { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double x) noexcept {
    const double t = sum + x;
    if ((sum >= 0 ? sum : -sum) >= (x >= 0 ? x : -x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

inline constexpr std::uint64_t kDecomposedBudget = 1'000'000'000;
inline constexpr std::uint64_t kQuadlinearBudget = 100'000'000;

/// sum_{x in F_p^*} chi_j(x) e_p(Psi(x)), walking x = g^t so every power is a
/// table lookup.
SumValue sum_exact(const FieldCtx& ctx, const SparsePoly& psi, CharacterIndex chi);

/// The same sum written as
///   (1/(alpha beta gamma)) sum_{x in G_alpha} sum_{y in G_beta}
///       sum_{z in G_gamma} sum_{w != 0} chi(wxyz) e_p(Psi(wxyz)),
/// where alpha, beta, gamma are gcd(k_i, p-1) of the first three terms and the
/// argument of e_p is expanded using x^k = 1 on G_alpha (and likewise), i.e.
///   theta_{w,x,y} rho_{w,x,z} sigma_{w,y,z} e_p(d (wxyz)^n).
/// Requires exactly four terms and alpha beta gamma (p-1) <= budget.
SumValue sum_decomposed(const FieldCtx& ctx, const SparsePoly& psi, CharacterIndex chi,
                        std::uint64_t budget = kDecomposedBudget);

/// sum_{x in X} sum_{y in Y} a_x b_y e_p(xy). Sets are residues in [0, p).
SumValue bilinear_sum(const FieldCtx& ctx, std::span<const Residue> xs,
                      std::span<const Residue> ys,
                      std::span<const std::complex<double>> x_weights,
                      std::span<const std::complex<double>> y_weights);

/// Dense three-index weight array, indexed by positions in the sorted sets.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t n0, std::size_t n1, std::size_t n2,
          std::complex<double> fill = {1.0, 0.0})
      : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill) {}

  std::complex<double>& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * n1_ + j) * n2_ + k];
  }
  const std::complex<double>& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * n1_ + j) * n2_ + k];
  }
  std::size_t dim0() const noexcept { return n0_; }
  std::size_t dim1() const noexcept { return n1_; }
  std::size_t dim2() const noexcept { return n2_; }
  double max_abs() const;

 private:
  std::size_t n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<std::complex<double>> data_;
};

struct QuadWeights {
  Tensor3 theta;  // W x X x Y
  Tensor3 rho;    // W x X x Z
  Tensor3 sigma;  // W x Y x Z
  Tensor3 tau;    // X x Y x Z

  /// All weights equal to one.
  static QuadWeights ones(std::size_t w, std::size_t x, std::size_t y, std::size_t z);
};

/// T = sum_{w,x,y,z} theta rho sigma tau e_p(a wxyz) over sorted, duplicate
/// free subsets of F_p^*. a must be nonzero (Errc::nonzero_required) and
/// |W||X||Y||Z| <= budget (Errc::budget_exceeded).
SumValue quadlinear_sum(const FieldCtx& ctx, std::span<const Residue> ws,
                        std::span<const Residue> xs, std::span<const Residue> ys,
                        std::span<const Residue> zs, const QuadWeights& weights,
                        Residue a, std::uint64_t budget = kQuadlinearBudget);

}  // namespace quadsum
