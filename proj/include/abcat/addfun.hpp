#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "abcat/bitmatrix.hpp"
#include "abcat/matcat.hpp"

namespace abcat {

enum class Variance { Covariant, Contravariant };

std::string to_string(Variance v);

/// An additive functor G -> Ab with finite values.
///
/// Additivity plus End(Z2) = {0, id} pin the functor down by F(Z2) = F2^k:
/// F(Z2^n) = F2^(k n) and F(f) replaces each entry f_ij by f_ij · I_k.
struct AddFunctor {
  std::size_t k = 0;
  Variance variance = Variance::Covariant;

  static AddFunctor covariant(std::size_t k) { return {k, Variance::Covariant}; }
  static AddFunctor contravariant(std::size_t k) { return {k, Variance::Contravariant}; }

  friend auto operator<=>(const AddFunctor&, const AddFunctor&) = default;
};

/// dim F(Z2^n) = k n.
std::size_t eval_obj(const AddFunctor& F, std::size_t n);
inline std::size_t eval_obj(const AddFunctor& F, GObj a) { return eval_obj(F, a.n); }

/// F(f) as a matrix: f ⊗ I_k, or fᵀ ⊗ I_k for contravariant F.
BitMatrix eval_mor(const AddFunctor& F, const GMor& f);

/// A natural transformation, given by its component at Z2 (k_target x k_source).
/// The component at Z2^n is forced to be I_n ⊗ component_at_z2.
struct NatTrans {
  AddFunctor source;
  AddFunctor target;
  BitMatrix component_at_z2;

  /// Throws std::invalid_argument on a shape or variance mismatch.
  NatTrans(AddFunctor source, AddFunctor target, BitMatrix component);

  BitMatrix component(std::size_t n) const;
  bool is_monic() const;

  friend bool operator==(const NatTrans&, const NatTrans&) = default;
};

/// Vertical composition beta ∘ alpha.
NatTrans compose(const NatTrans& beta, const NatTrans& alpha);

/// Checks the naturality square G(f) ∘ eta_n == eta_m ∘ F(f).
bool is_natural_at(const NatTrans& eta, const GMor& f);

/// One canonical monic inclusion per subgroup of F(Z2) = F2^k, ordered by
/// dimension, then by pivot set, then by the free entries of the basis in rref.
/// The inclusion's columns are the rref basis rows of the subspace.
/// Throws EnumerationLimitError for k > 4.
std::vector<NatTrans> subfunctors(const AddFunctor& F);

/// Number of subspaces of F2^k (sum of Gaussian binomials), computed by recurrence.
std::size_t subspace_count(std::size_t k);

/// Every natural transformation F -> G, one per k_G x k_F matrix in lexicographic
/// order. Throws EnumerationLimitError past the cap, std::invalid_argument on a
/// variance mismatch.
std::vector<NatTrans> nat_transformations(const AddFunctor& F, const AddFunctor& G);

}  // namespace abcat
