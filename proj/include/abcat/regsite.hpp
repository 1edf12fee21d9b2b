#pragma once

#include <cstddef>
#include <map>
#include <optional>

#include "abcat/addfun.hpp"
#include "abcat/bitmatrix.hpp"
#include "abcat/matcat.hpp"
#include "abcat/report.hpp"

namespace abcat {

/// A covering family of the regular topology: a single epimorphism W' ->> W.
class Cover {
 public:
  /// Throws std::invalid_argument unless epsilon is epi.
  explicit Cover(GMor epsilon);
  static std::optional<Cover> make(const GMor& epsilon);

  const GMor& epsilon() const { return epsilon_; }
  GObj source() const { return epsilon_.dom(); }
  GObj target() const { return epsilon_.cod(); }

  friend auto operator<=>(const Cover&, const Cover&) = default;
  friend bool operator==(const Cover&, const Cover&) = default;

 private:
  GMor epsilon_;
};

bool is_cover(const GMor& f);

/// Every cover W' ->> W with dimensions <= bound, skipping the degenerate
/// 0 ->> 0, in (W, W', lexicographic matrix) order.
std::vector<Cover> enumerate_covers(std::size_t bound);

/// A contravariant presheaf candidate: an additive functor whose restriction
/// maps may be overridden on individual morphisms. Overrides exist to build
/// non-sheaves for negative tests.
class Presheaf {
 public:
  /// Throws std::invalid_argument for a covariant functor.
  explicit Presheaf(AddFunctor underlying);

  const AddFunctor& underlying() const { return functor_; }
  std::size_t dim(GObj a) const { return eval_obj(functor_, a); }
  /// F(f): F(cod f) -> F(dom f).
  BitMatrix restrict_along(const GMor& f) const;
  /// Copy with F(f) replaced by `m`. Throws std::invalid_argument on a shape mismatch.
  Presheaf with_restriction(const GMor& f, BitMatrix m) const;
  bool has_overrides() const { return !overrides_.empty(); }

 private:
  AddFunctor functor_;
  std::map<GMor, BitMatrix> overrides_;
};

/// A sheaf of abelian groups on (G, R): a contravariant additive functor plus
/// the largest object dimension for which descent has been verified.
struct SheafAb {
  AddFunctor underlying;
  std::size_t sheaf_checked_bound = 0;

  Presheaf presheaf() const { return Presheaf(underlying); }
};

/// H_a = Hom(-, a), realized as the contravariant functor with k = a.n.
/// Representables satisfy descent; the checked bound starts at 0 and is raised
/// by certify_sheaf.
SheafAb yoneda(GObj a);

/// Section g: W -> a of H_a as a vector in F2^(a.n W.n): columns of g stacked.
/// Under this identification restriction along f is the matrix of H_a(f).
BitVector yoneda_section(const GMor& g);
GMor yoneda_unsection(GObj a, GObj w, const BitVector& v);

/// Descent for every cover W' ->> W with dims <= bound: F(W) -> F(W') is the
/// equalizer of the two restrictions F(W') ⇉ F(W' x_W W').
Report check_sheaf(const Presheaf& F, std::size_t bound);
inline Report check_sheaf(const SheafAb& F, std::size_t bound) { return check_sheaf(F.presheaf(), bound); }

/// Runs check_sheaf and returns the sheaf with its checked bound raised.
/// Throws std::invalid_argument if descent fails.
SheafAb certify_sheaf(const AddFunctor& F, std::size_t bound);

/// Hom(a, b) -> Nat(H_a, H_b) is a bijection, by enumerating both sides.
/// Throws EnumerationLimitError when a.n · b.n > 9.
Report check_full_faithful(GObj a, GObj b);

/// The natural transformation H_a -> H_b given by postcomposition with h.
NatTrans yoneda_map(const GMor& h);

struct LocalLift {
  Cover cover;  // W' ->> W
  GMor lift;    // W' -> B with b ∘ lift == g ∘ epsilon
};

/// Canonical witness that section g: W -> C lifts along b locally: the
/// pullback W' = B x_C W with its projections.
LocalLift local_lift(const GMor& b, const GMor& g);
/// A lift over the identity cover, when g already factors through b.
std::optional<GMor> direct_lift(const GMor& b, const GMor& g);

/// H_B -> H_C is locally surjective for epi b: every section g: W -> C with
/// W.n <= bound lifts over the canonical pullback cover.
/// Throws std::invalid_argument unless b is epi.
Report check_local_surjectivity(const GMor& b, std::size_t bound);

struct ShortExact {
  GMor mono;  // A >-> B
  GMor epi;   // B ->> C
};

/// Throws std::invalid_argument describing the defect when not short exact.
void require_short_exact(const ShortExact& ses);

/// Every sequence A >-> B ->> coker with B.n <= bound (B nonzero), one per
/// mono in (B, A, lexicographic) order, completed by its canonical cokernel.
std::vector<ShortExact> short_exact_sequences(std::size_t bound);

/// The Yoneda image of a short exact sequence is exact in sheaves:
/// sectionwise left exact at every W <= bound, and H_B -> H_C locally surjective.
Report verify_embedding_exact(const ShortExact& ses, std::size_t bound);

}  // namespace abcat
