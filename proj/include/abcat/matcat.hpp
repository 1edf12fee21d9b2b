#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "abcat/bitmatrix.hpp"
#include "abcat/report.hpp"

namespace abcat {

/// The object Z2^n of the category G. n = 0 is the zero object.
struct GObj {
  std::size_t n = 0;

  friend auto operator<=>(const GObj&, const GObj&) = default;
};

/// A morphism Z2^dom -> Z2^cod, stored as its cod x dom matrix.
class GMor {
 public:
  GMor() = default;
  /// Throws std::invalid_argument when the matrix shape disagrees with dom/cod.
  GMor(GObj dom, GObj cod, BitMatrix mat);
  /// Shape taken from the matrix.
  explicit GMor(BitMatrix mat);

  static GMor identity(GObj a);
  static GMor zero(GObj dom, GObj cod);

  GObj dom() const { return dom_; }
  GObj cod() const { return cod_; }
  const BitMatrix& mat() const { return mat_; }

  friend auto operator<=>(const GMor&, const GMor&) = default;
  friend bool operator==(const GMor&, const GMor&) = default;

  std::string to_string() const;

 private:
  GObj dom_;
  GObj cod_;
  BitMatrix mat_;
};

/// g ∘ f. Throws std::invalid_argument unless f.cod == g.dom.
GMor compose(const GMor& g, const GMor& f);
/// Pointwise sum of parallel maps.
GMor operator+(const GMor& f, const GMor& g);

struct Biproduct {
  GObj object;
  GMor inj1, inj2;
  GMor proj1, proj2;
};

Biproduct biproduct(GObj a, GObj b);

/// A chosen (co)kernel: the object together with its canonical (co)kernel map.
struct Kernel {
  GObj object;
  GMor mor;  // object -> dom f, mono
};
struct Cokernel {
  GObj object;
  GMor mor;  // cod f -> object, epi
};

/// Columns of the kernel map are the canonical kernel basis of f.
Kernel kernel(const GMor& f);
/// Quotient by the image, coordinates taken at the non-pivot positions of the
/// canonical image basis.
Cokernel cokernel(const GMor& f);

bool is_mono(const GMor& f);
bool is_epi(const GMor& f);
bool is_iso(const GMor& f);

struct Pullback {
  GObj object;
  GMor p1;  // object -> f.dom
  GMor p2;  // object -> g.dom
};

/// Fiber product of f: a -> c and g: b -> c, computed as the kernel of
/// [f | g] : a ⊕ b -> c. Throws std::invalid_argument if the codomains differ.
Pullback pullback(const GMor& f, const GMor& g);

/// All 2^(a.n * b.n) maps a -> b, in lexicographic order of their row-major
/// entries. Throws EnumerationLimitError past the configured cap.
std::vector<GMor> enumerate_morphisms(GObj a, GObj b);

/// Exhaustive check of the abelian-category axioms over every morphism between
/// objects of dimension <= bound. The degenerate pair (0, 0) is skipped, so
/// bound 0 checks nothing.
Report verify_abelian(std::size_t bound);

/// Checks the abelian axioms on one morphism; appends to `report`.
void verify_abelian_at(const GMor& f, Report& report);

/// True iff every map h: X -> a extends along every mono X >-> Y with
/// X, Y of dimension <= bound.
bool is_injective_object(GObj a, std::size_t bound);

}  // namespace abcat
