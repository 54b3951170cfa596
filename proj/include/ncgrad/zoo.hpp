#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncgrad/qms.hpp"

namespace ncgrad {

/// Finite group acting on l^2(G) together with a length function from
/// cocycle data: v_j delta_g = <b(g), e_j> delta_g and psi(g) = sum_j c_j b_j(g)^2.
struct FiniteGroupModel {
  std::vector<std::vector<int>> cayley;   // cayley[g][h] = index of g h
  int identity = 0;
  std::vector<Matrix> lambda;             // left-regular permutation matrices
  std::vector<RealVector> cocycle;        // b(g)
  std::vector<double> weights;            // c_j
  RealVector psi;
  std::vector<Matrix> v;                  // diagonal jump operators
  bool projections = false;               // every <b(g), e_j> in {0, 1}
  double eigen_residual = 0.0;            // max_g ||L lambda_g - psi(g) lambda_g||_2
  std::vector<std::string> warnings;

  [[nodiscard]] int order() const { return static_cast<int>(cayley.size()); }
};

struct GroupLindblad {
  FiniteGroupModel group;
  LindbladGenerator generator;
};

/// Generator sum_j c_j (v_j^2 x + x v_j^2 - 2 v_j x v_j) on B(l^2(G)). The
/// Cayley table is validated (closure, identity, inverses, associativity;
/// std::invalid_argument otherwise). The eigen-relation L lambda_g =
/// psi(g) lambda_g is measured; a residual above 1e-8 adds a warning (b is
/// then not a cocycle for these weights).
[[nodiscard]] GroupLindblad group_lindblad_from_cocycle(const std::vector<std::vector<int>>& cayley,
                                                        const std::vector<RealVector>& b,
                                                        const std::vector<double>& weights);

/// L = I - E for the trace-preserving conditional expectation onto `sub`,
/// written with self-adjoint jumps: E(x) = sum_a h_a x h_a with sum h_a^2 = 1
/// (hermitized Choi-Kraus operators of E) and jumps (1/2, h_a). Single-block
/// algebras only.
[[nodiscard]] LindbladGenerator conditional_expectation_model(const TracialAlgebra& algebra, const Subalgebra& sub);

/// Jumps (1, p_j). Throws std::invalid_argument naming the offending
/// projection or pair when p_j is not a Hermitian idempotent or two
/// projections do not commute (tolerance 1e-10).
[[nodiscard]] LindbladGenerator commuting_projections_model(const TracialAlgebra& algebra,
                                                            const std::vector<Matrix>& projections);

/// Bit-swap unitaries on l^2({0,1}^d), jumps (1/4, v_j): L A = 1/2 sum (A - v_j A v_j). d in 1..3.
[[nodiscard]] LindbladGenerator hypercube_model(int d);

/// Z_n (n even, n <= 8) with the word-length cocycle, weights 1.
[[nodiscard]] GroupLindblad cyclic_group_model(int n);
/// S_n (n in {3, 4}) with the Hamming cocycle: n^2 projections, weights 1/2.
[[nodiscard]] GroupLindblad symmetric_group_model(int n);
/// Elements of S_n in lexicographic order (identity first) as images of 0..n-1.
[[nodiscard]] std::vector<std::vector<int>> permutations(int n);

/// Depolarizing semigroup on M_n restricted to the invariant subalgebra
/// {diag(a 1_k, b 1_{n-k})}: the two-point Markov chain with stationary
/// weights (k/n, (n-k)/n) jumping to the stationary law at rate 1.
struct RestrictedModel {
  LindbladGenerator generator;
  Subalgebra restriction;
};
[[nodiscard]] RestrictedModel two_point_model(int k, int n);

struct ZooModel {
  std::string name;
  LindbladGenerator generator;
  double proven_k = 0.0;
  std::string reference;
  std::optional<Subalgebra> restriction;
  std::optional<FiniteGroupModel> group;
};

using ZooParams = std::map<std::string, std::string>;

/// Families: depolarizing (n), diagonal (n), projection, projections4,
/// hypercube (d), cyclic (n), symmetric (n), two_point (k, n), zero (n).
/// Catalog aliases (depolarizing2, cyclic4, ...) fix the parameters.
/// Throws std::invalid_argument for unknown names or bad parameters.
[[nodiscard]] ZooModel build_model(const std::string& name, const ZooParams& params = {});

struct CatalogEntry {
  std::string name;
  std::string family;
  ZooParams params;
  double proven_k = 0.0;
  std::string reference;
};

[[nodiscard]] const std::vector<CatalogEntry>& catalog();

}  // namespace ncgrad
