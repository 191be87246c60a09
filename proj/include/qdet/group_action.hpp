#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qdet/complex_matrix.hpp"
#include "qdet/eig.hpp"
#include "qdet/errors.hpp"
#include "qdet/povm.hpp"

namespace qdet {

/// One symmetry: rho -> U rho U^dag, or U conj(rho) U^dag when antiunitary,
/// together with the permutation it induces on the measurement outcomes.
struct GroupElement {
  ComplexMatrix unitary;
  bool antiunitary = false;
  std::vector<int> permutation;  // outcome index map j -> g.j
};

struct GroupAction {
  std::vector<GroupElement> elements;
  int identity_index = 0;

  std::size_t order() const { return elements.size(); }
};

inline ComplexMatrix apply_group_element(const GroupElement& g, const ComplexMatrix& rho) {
  const ComplexMatrix base = g.antiunitary ? rho.conjugate() : rho;
  return g.unitary * base * g.unitary.adjoint();
}

/// Dual (conjugate) representation: conj o R_g o conj, realized by the
/// entrywise-conjugated unitary with the antiunitary flag unchanged.
inline GroupElement dual_element(const GroupElement& g) {
  return GroupElement{g.unitary.conjugate(), g.antiunitary, g.permutation};
}

/// Checks unitarity of every element, covariance R_g(E_h) = E_{g.h},
/// closure of the permutation set under composition, a valid identity, and
/// transitivity of the outcome action. Throws NotCovariantError on failure.
inline void verify_group_action(const GroupAction& action, const Povm& povm) {
  if (action.elements.empty()) throw NotCovariantError("group action has no elements");
  if (action.identity_index < 0 ||
      action.identity_index >= static_cast<int>(action.elements.size()))
    throw NotCovariantError("identity index out of range");

  const std::size_t m = povm.size();
  for (std::size_t gi = 0; gi < action.elements.size(); ++gi) {
    const GroupElement& g = action.elements[gi];
    if (g.unitary.dim() != povm.dim)
      throw NotCovariantError("group element " + std::to_string(gi + 1) +
                              " acts on the wrong dimension");
    const ComplexMatrix gram = g.unitary.adjoint() * g.unitary;
    if ((gram - ComplexMatrix::identity(povm.dim)).max_norm() > 1e-10)
      throw NotCovariantError("group element " + std::to_string(gi + 1) + " is not unitary");
    if (g.permutation.size() != m)
      throw NotCovariantError("group element " + std::to_string(gi + 1) +
                              " permutation has wrong length");
    std::vector<bool> hit(m, false);
    for (int target : g.permutation) {
      if (target < 0 || target >= static_cast<int>(m) || hit[static_cast<std::size_t>(target)])
        throw NotCovariantError("group element " + std::to_string(gi + 1) +
                                " outcome map is not a permutation");
      hit[static_cast<std::size_t>(target)] = true;
    }
    for (std::size_t h = 0; h < m; ++h) {
      const ComplexMatrix moved = apply_group_element(g, povm.elements[h].matrix());
      const std::size_t target = static_cast<std::size_t>(g.permutation[h]);
      if ((moved - povm.elements[target].matrix()).max_norm() > 1e-9)
        throw NotCovariantError("covariance fails for element " + std::to_string(gi + 1) +
                                " on outcome " + std::to_string(h + 1));
    }
  }

  const GroupElement& e = action.elements[static_cast<std::size_t>(action.identity_index)];
  for (std::size_t h = 0; h < m; ++h)
    if (e.permutation[h] != static_cast<int>(h))
      throw NotCovariantError("designated identity does not fix the outcomes");

  // Closure of the permutation part under composition.
  std::vector<std::vector<int>> perms;
  for (const auto& g : action.elements) perms.push_back(g.permutation);
  for (const auto& a : perms)
    for (const auto& b : perms) {
      std::vector<int> composed(m);
      for (std::size_t h = 0; h < m; ++h)
        composed[h] = a[static_cast<std::size_t>(b[h])];
      if (std::find(perms.begin(), perms.end(), composed) == perms.end())
        throw NotCovariantError("outcome permutations are not closed under composition");
    }

  // Transitivity: the orbit of outcome 0 must cover all outcomes.
  std::vector<bool> reached(m, false);
  for (const auto& g : action.elements) reached[static_cast<std::size_t>(g.permutation[0])] = true;
  if (std::find(reached.begin(), reached.end(), false) != reached.end())
    throw NotCovariantError("outcome action is not transitive");
}

namespace detail {

/// Orthonormal Hermitian basis of the d x d operators (real vector space).
inline std::vector<ComplexMatrix> hermitian_basis(std::size_t d) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> basis;
  for (std::size_t i = 0; i < d; ++i) {
    ComplexMatrix m(d);
    m(i, i) = 1.0;
    basis.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      ComplexMatrix sym(d);
      sym(i, j) = inv_sqrt2;
      sym(j, i) = inv_sqrt2;
      basis.push_back(std::move(sym));
      ComplexMatrix anti(d);
      anti(i, j) = Complex{0.0, -inv_sqrt2};
      anti(j, i) = Complex{0.0, inv_sqrt2};
      basis.push_back(std::move(anti));
    }
  return basis;
}

}  // namespace detail

/// Irreducibility in the sense of the covariant capacity theorem: the only
/// density operator fixed by the whole group action is I/d. Checked by the
/// fixed-point space of the group-averaging map on Hermitian operators.
inline bool is_irreducible(const GroupAction& action, std::size_t dim) {
  const auto basis = detail::hermitian_basis(dim);
  const std::size_t n = basis.size();
  const double inv_order = 1.0 / static_cast<double>(action.order());

  // K = T - I where T is the averaging superoperator in the Hermitian basis.
  std::vector<std::vector<double>> k(n, std::vector<double>(n, 0.0));
  for (std::size_t b = 0; b < n; ++b) {
    ComplexMatrix averaged(dim);
    for (const auto& g : action.elements) averaged += apply_group_element(g, basis[b]);
    averaged *= Complex{inv_order, 0.0};
    for (std::size_t a = 0; a < n; ++a) {
      k[a][b] = real_trace_product(basis[a], averaged);
      if (a == b) k[a][b] -= 1.0;
    }
  }

  // Kernel dimension of K via the spectrum of K^T K.
  ComplexMatrix ktk(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += k[c][a] * k[c][b];
      ktk(a, b) = s;
    }
  int kernel_dim = 0;
  for (double lambda : eig_hermitian(HermitianOperator(ktk)).eigenvalues)
    if (std::abs(lambda) <= 1e-9) ++kernel_dim;
  return kernel_dim == 1;  // the identity is always fixed
}

}  // namespace qdet
