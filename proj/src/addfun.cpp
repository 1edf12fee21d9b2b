#include "abcat/addfun.hpp"

#include <stdexcept>

#include "abcat/report.hpp"

namespace abcat {

std::string to_string(Variance v) { return v == Variance::Covariant ? "co" : "contra"; }

std::size_t eval_obj(const AddFunctor& F, std::size_t n) { return F.k * n; }

BitMatrix eval_mor(const AddFunctor& F, const GMor& f) {
  return F.variance == Variance::Covariant ? kron_identity(f.mat(), F.k)
                                           : kron_identity(f.mat().transpose(), F.k);
}

NatTrans::NatTrans(AddFunctor source, AddFunctor target, BitMatrix component)
    : source(source), target(target), component_at_z2(std::move(component)) {
  if (source.variance != target.variance) {
    throw std::invalid_argument("NatTrans: source and target have different variance");
  }
  if (component_at_z2.rows() != target.k || component_at_z2.cols() != source.k) {
    throw std::invalid_argument("NatTrans: component must be " + std::to_string(target.k) + "x" +
                                std::to_string(source.k));
  }
}

BitMatrix NatTrans::component(std::size_t n) const { return identity_kron(n, component_at_z2); }

bool NatTrans::is_monic() const { return rank(component_at_z2) == source.k; }

NatTrans compose(const NatTrans& beta, const NatTrans& alpha) {
  if (alpha.target != beta.source) throw std::invalid_argument("NatTrans compose: mismatch");
  return {alpha.source, beta.target, beta.component_at_z2 * alpha.component_at_z2};
}

bool is_natural_at(const NatTrans& eta, const GMor& f) {
  const bool co = eta.source.variance == Variance::Covariant;
  // Covariant: F(dom) -> F(cod); contravariant: F(cod) -> F(dom).
  const std::size_t from = co ? f.dom().n : f.cod().n;
  const std::size_t to = co ? f.cod().n : f.dom().n;
  return eval_mor(eta.target, f) * eta.component(from) == eta.component(to) * eval_mor(eta.source, f);
}

std::size_t subspace_count(std::size_t k) {
  // G(k, j) via G(k, j) = G(k-1, j-1) + 2^j G(k-1, j).
  std::vector<std::vector<std::size_t>> g(k + 1, std::vector<std::size_t>(k + 1, 0));
  for (std::size_t n = 0; n <= k; ++n) {
    g[n][0] = 1;
    for (std::size_t j = 1; j <= n; ++j) g[n][j] = g[n - 1][j - 1] + (std::size_t{1} << j) * g[n - 1][j];
  }
  std::size_t total = 0;
  for (std::size_t j = 0; j <= k; ++j) total += g[k][j];
  return total;
}

namespace {

// Visits every dim x k matrix in reduced row echelon form with full rank.
template <typename Visit>
void for_each_rref(std::size_t k, std::size_t dim, Visit&& visit) {
  std::vector<std::size_t> pivots(dim);
  for (std::size_t i = 0; i < dim; ++i) pivots[i] = i;

  while (true) {
    std::vector<bool> is_pivot(k, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free_slots;
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = pivots[r] + 1; c < k; ++c)
        if (!is_pivot[c]) free_slots.emplace_back(r, c);

    for (std::size_t code = 0; code < (std::size_t{1} << free_slots.size()); ++code) {
      BitMatrix m(dim, k);
      for (std::size_t r = 0; r < dim; ++r) m.set(r, pivots[r], true);
      for (std::size_t s = 0; s < free_slots.size(); ++s) {
        if ((code >> (free_slots.size() - 1 - s)) & 1) m.set(free_slots[s].first, free_slots[s].second, true);
      }
      visit(m);
    }

    // Next pivot combination in lexicographic order.
    std::size_t i = dim;
    while (i > 0 && pivots[i - 1] == k - dim + i - 1) --i;
    if (i == 0) return;
    ++pivots[i - 1];
    for (std::size_t j = i; j < dim; ++j) pivots[j] = pivots[j - 1] + 1;
  }
}

}  // namespace

std::vector<NatTrans> subfunctors(const AddFunctor& F) {
  if (F.k > 4) throw EnumerationLimitError("subfunctors: k = " + std::to_string(F.k) + " exceeds 4");
  std::vector<NatTrans> out;
  for (std::size_t dim = 0; dim <= F.k; ++dim) {
    for_each_rref(F.k, dim, [&](const BitMatrix& basis_rows) {
      out.emplace_back(AddFunctor{dim, F.variance}, F, basis_rows.transpose());
    });
  }
  return out;
}

std::vector<NatTrans> nat_transformations(const AddFunctor& F, const AddFunctor& G) {
  if (F.variance != G.variance) throw std::invalid_argument("nat_transformations: variance mismatch");
  const std::size_t bits = F.k * G.k;
  require_enumerable(bits, "nat_transformations");
  std::vector<NatTrans> out;
  for (const auto& m : enumerate_morphisms(GObj{F.k}, GObj{G.k})) out.emplace_back(F, G, m.mat());
  return out;
}

}  // namespace abcat
