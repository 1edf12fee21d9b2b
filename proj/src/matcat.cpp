#include "abcat/matcat.hpp"

#include <stdexcept>

namespace abcat {

GMor::GMor(GObj dom, GObj cod, BitMatrix mat) : dom_(dom), cod_(cod), mat_(std::move(mat)) {
  if (mat_.rows() != cod_.n || mat_.cols() != dom_.n) {
    throw std::invalid_argument("GMor: matrix is " + std::to_string(mat_.rows()) + "x" +
                                std::to_string(mat_.cols()) + " but the map is Z2^" +
                                std::to_string(dom_.n) + " -> Z2^" + std::to_string(cod_.n));
  }
}

GMor::GMor(BitMatrix mat) : dom_{mat.cols()}, cod_{mat.rows()}, mat_(std::move(mat)) {}

GMor GMor::identity(GObj a) { return {a, a, BitMatrix::identity(a.n)}; }

GMor GMor::zero(GObj dom, GObj cod) { return {dom, cod, BitMatrix::zero(cod.n, dom.n)}; }

std::string GMor::to_string() const {
  return "Z2^" + std::to_string(dom_.n) + "->Z2^" + std::to_string(cod_.n) + " " + mat_.to_string();
}

GMor compose(const GMor& g, const GMor& f) {
  if (f.cod() != g.dom()) {
    throw std::invalid_argument("compose: codomain Z2^" + std::to_string(f.cod().n) +
                                " does not match domain Z2^" + std::to_string(g.dom().n));
  }
  return {f.dom(), g.cod(), g.mat() * f.mat()};
}

GMor operator+(const GMor& f, const GMor& g) {
  if (f.dom() != g.dom() || f.cod() != g.cod()) throw std::invalid_argument("sum of non-parallel maps");
  return {f.dom(), f.cod(), f.mat() + g.mat()};
}

Biproduct biproduct(GObj a, GObj b) {
  GObj s{a.n + b.n};
  BitMatrix ia = vstack(BitMatrix::identity(a.n), BitMatrix::zero(b.n, a.n));
  BitMatrix ib = vstack(BitMatrix::zero(a.n, b.n), BitMatrix::identity(b.n));
  return Biproduct{s,
                   GMor{a, s, ia},
                   GMor{b, s, ib},
                   GMor{s, a, ia.transpose()},
                   GMor{s, b, ib.transpose()}};
}

Kernel kernel(const GMor& f) {
  BitMatrix k = kernel_basis(f.mat());
  GObj obj{k.cols()};
  return {obj, GMor{obj, f.dom(), std::move(k)}};
}

Cokernel cokernel(const GMor& f) {
  // With B the canonical image basis, kernel_basis(Bᵀ) has one column per
  // non-pivot coordinate c: e_c plus the c-th entries of the basis vectors at
  // their pivots. Its transpose is the projection along the image onto the
  // complementary coordinates.
  BitMatrix image = image_basis(f.mat());
  BitMatrix q = kernel_basis(image.transpose()).transpose();
  GObj obj{q.rows()};
  return {obj, GMor{f.cod(), obj, std::move(q)}};
}

bool is_mono(const GMor& f) { return rank(f.mat()) == f.dom().n; }
bool is_epi(const GMor& f) { return rank(f.mat()) == f.cod().n; }
bool is_iso(const GMor& f) { return f.dom() == f.cod() && is_mono(f); }

Pullback pullback(const GMor& f, const GMor& g) {
  if (f.cod() != g.cod()) throw std::invalid_argument("pullback: maps have different codomains");
  BitMatrix k = kernel_basis(hstack(f.mat(), g.mat()));
  GObj obj{k.cols()};
  return {obj, GMor{obj, f.dom(), k.row_block(0, f.dom().n)},
          GMor{obj, g.dom(), k.row_block(f.dom().n, g.dom().n)}};
}

std::vector<GMor> enumerate_morphisms(GObj a, GObj b) {
  const std::size_t bits = a.n * b.n;
  require_enumerable(bits, "enumerate_morphisms(Z2^" + std::to_string(a.n) + ", Z2^" +
                               std::to_string(b.n) + ")");
  std::vector<GMor> out;
  out.reserve(std::size_t{1} << bits);
  for (std::size_t code = 0; code < (std::size_t{1} << bits); ++code) {
    BitMatrix m(b.n, a.n);
    // Entry k in row-major order is bit (bits-1-k), so codes run in lexicographic order.
    for (std::size_t k = 0; k < bits; ++k) m.set(k / a.n, k % a.n, (code >> (bits - 1 - k)) & 1);
    out.emplace_back(a, b, std::move(m));
  }
  return out;
}

namespace {

// Some iso phi with mono ∘ phi == f, where both are monos into the same object.
bool factors_through_iso(const GMor& mono, const GMor& f) {
  if (mono.dom() != f.dom()) return false;
  auto phi = solve(mono.mat(), f.mat());
  return phi && rank(*phi) == f.dom().n;
}

}  // namespace

void verify_abelian_at(const GMor& f, Report& report) {
  auto& annihilate = report.section("kernel-cokernel-annihilate");
  auto& criteria = report.section("mono-epi-criteria");
  auto& mono_kernel = report.section("mono-is-kernel-of-cokernel");
  auto& epi_cokernel = report.section("epi-is-cokernel-of-kernel");

  const Kernel k = kernel(f);
  const Cokernel q = cokernel(f);

  ++annihilate.checked;
  if (!compose(f, k.mor).mat().is_zero() || !compose(q.mor, f).mat().is_zero() || !is_mono(k.mor) ||
      !is_epi(q.mor)) {
    annihilate.fail({{"morphism", f.to_string()}});
  }

  ++criteria.checked;
  if (is_mono(f) != (k.object.n == 0) || is_epi(f) != (q.object.n == 0)) {
    criteria.fail({{"morphism", f.to_string()}});
  }

  if (is_mono(f)) {
    ++mono_kernel.checked;
    const Kernel kq = kernel(q.mor);
    if (!factors_through_iso(kq.mor, f)) mono_kernel.fail({{"morphism", f.to_string()}});
  }
  if (is_epi(f)) {
    ++epi_cokernel.checked;
    const Cokernel qk = cokernel(k.mor);
    // psi ∘ qk == f  <=>  qkᵀ psiᵀ == fᵀ
    auto psi_t = solve(qk.mor.mat().transpose(), f.mat().transpose());
    if (qk.object != f.cod() || !psi_t || rank(*psi_t) != f.cod().n) {
      epi_cokernel.fail({{"morphism", f.to_string()}});
    }
  }
}

Report verify_abelian(std::size_t bound) {
  Report report;
  report.name = "verify-abelian";
  std::size_t morphisms = 0;

  for (std::size_t n = 0; n <= bound; ++n) {
    for (std::size_t m = 0; m <= bound; ++m) {
      if (n == 0 && m == 0) continue;
      for (const auto& f : enumerate_morphisms(GObj{n}, GObj{m})) {
        verify_abelian_at(f, report);
        ++morphisms;
      }

      auto& bip = report.section("biproduct-identities");
      ++bip.checked;
      const auto b = biproduct(GObj{n}, GObj{m});
      const bool ok = compose(b.proj1, b.inj1) == GMor::identity(GObj{n}) &&
                      compose(b.proj2, b.inj2) == GMor::identity(GObj{m}) &&
                      compose(b.proj1, b.inj2).mat().is_zero() &&
                      compose(b.proj2, b.inj1).mat().is_zero() &&
                      compose(b.inj1, b.proj1) + compose(b.inj2, b.proj2) == GMor::identity(b.object);
      if (!ok) bip.fail({{"a", n}, {"b", m}});
    }
  }

  report.details["bound"] = bound;
  report.details["morphisms_checked"] = morphisms;
  return report;
}

bool is_injective_object(GObj a, std::size_t bound) {
  for (std::size_t x = 0; x <= bound; ++x) {
    for (std::size_t y = 0; y <= bound; ++y) {
      for (const auto& f : enumerate_morphisms(GObj{x}, GObj{y})) {
        if (!is_mono(f)) continue;
        for (const auto& h : enumerate_morphisms(GObj{x}, a)) {
          // g ∘ f == h  <=>  fᵀ gᵀ == hᵀ
          if (!solve(f.mat().transpose(), h.mat().transpose())) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace abcat
