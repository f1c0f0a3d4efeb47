#pragma once

#include "symvp/sampling.hpp"
#include "symvp/space.hpp"

#include <cstdint>
#include <vector>

namespace symvp {

enum class GroupModel {
  ExactFinite,     ///< finite matrix group, exact closure validated
  QuadratureSO2,   ///< uniform rotation quadrature standing in for SO(2)
};

struct GroupOptions {
  double dedupTol = 1e-8;        ///< matrix identification tolerance
  std::size_t maxElements = 4096;
  int normCheckSamples = 100;    ///< random vectors used to validate norm invariance
  double normCheckTol = 1e-9;
  std::uint64_t normCheckSeed = 0x5eed5eedULL;
};

/// Compact group model acting linearly and norm-invariantly on R^n, carrying
/// normalized Haar weights.  Exact finite groups validate closure under
/// product and inverse at construction; the SO(2) quadrature model skips the
/// closure check and represents the continuous average by a uniform rule.
class GroupAction {
 public:
  /// Validates and wraps an explicit element list (uniform weights).
  static GroupAction exactFinite(std::vector<Matrix> elements, NormSpec norm,
                                 GroupOptions opts = {});
  /// Multiplicative closure of the generators (identity and inverses added).
  static GroupAction fromGenerators(const std::vector<Matrix>& generators, NormSpec norm,
                                    GroupOptions opts = {});

  static GroupAction trivial(int dim, NormSpec norm = NormSpec::l2());
  /// All n! coordinate permutations of R^n.
  static GroupAction symmetric(int n, NormSpec norm = NormSpec::l2());
  /// All 2^n n! signed permutations of R^n.
  static GroupAction signedPermutations(int n, NormSpec norm = NormSpec::l2());
  /// Rotations by 2 pi j / k on R^2, exact finite cyclic group.
  static GroupAction cyclicRotations(int k, NormSpec norm = NormSpec::l2());
  /// Uniform N-point rotation quadrature on R^2; averages trigonometric
  /// polynomials of degree < N exactly.
  static GroupAction so2Quadrature(int points = 64, NormSpec norm = NormSpec::l2());

  int dimension() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  GroupModel model() const { return model_; }
  const std::vector<Matrix>& elements() const { return elements_; }
  const Vector& weights() const { return weights_; }
  const NormSpec& norm() const { return norm_; }

  Vector apply(std::size_t i, const Vector& x) const { return elements_[i] * x; }

  /// Haar average of the orbit: xbar = sum_g w_g g x.  Fixed by every element.
  Vector symmetrize(const Vector& x) const;

  /// Reynolds operator P = sum_g w_g g; a projector onto the fixed subspace.
  Matrix reynolds() const;

  /// Orbit {g x}, deduplicated.
  std::vector<Vector> orbit(const Vector& x, double dedupTol = 1e-10) const;

  /// max_g ||g x - x|| in the attached norm.
  double invarianceResidual(const Vector& x) const;

  /// Adjoint action g -> g^T on the dual space, same weights, dual norm.
  GroupAction adjoint() const;

  struct FixedSubspace {
    Matrix basis;      ///< n x k, orthonormal columns spanning X_G
    Matrix projector;  ///< the Reynolds matrix
    int dim = 0;
  };
  /// Basis of X_G = {x : g x = x for all g} = range of the Reynolds operator.
  FixedSubspace fixedSubspace(double tol = 1e-8) const;

 private:
  GroupAction(std::vector<Matrix> elements, Vector weights, NormSpec norm, GroupModel model);

  void validateNormInvariance(const GroupOptions& opts) const;

  std::vector<Matrix> elements_;
  Vector weights_;
  NormSpec norm_;
  GroupModel model_;
  int dim_;
};

}  // namespace symvp
