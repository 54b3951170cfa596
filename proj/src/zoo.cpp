#include "ncgrad/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ncgrad {

namespace {

void validate_group(const std::vector<std::vector<int>>& table, int* identity) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw std::invalid_argument("cayley table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("cayley table is not square");
    for (int v : row) {
      if (v < 0 || v >= n) throw std::invalid_argument("cayley table entry out of range");
    }
  }
  int e = -1;
  for (int g = 0; g < n && e < 0; ++g) {
    bool ok = true;
    for (int h = 0; h < n && ok; ++h) ok = table[g][h] == h && table[h][g] == h;
    if (ok) e = g;
  }
  if (e < 0) throw std::invalid_argument("cayley table has no identity element");
  for (int g = 0; g < n; ++g) {
    bool has_inverse = false;
    for (int h = 0; h < n && !has_inverse; ++h) has_inverse = table[g][h] == e && table[h][g] == e;
    if (!has_inverse) throw std::invalid_argument("cayley table: element " + std::to_string(g) + " has no inverse");
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw std::invalid_argument("cayley table is not associative");
        }
      }
    }
  }
  *identity = e;
}

Matrix diagonal(const RealVector& d) { return d.cast<Complex>().asDiagonal(); }

}  // namespace

GroupLindblad group_lindblad_from_cocycle(const std::vector<std::vector<int>>& cayley,
                                          const std::vector<RealVector>& b, const std::vector<double>& weights) {
  FiniteGroupModel group;
  validate_group(cayley, &group.identity);
  const int n = static_cast<int>(cayley.size());
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("cocycle: one vector per group element required");
  const Index d = static_cast<Index>(weights.size());
  for (const auto& bg : b) {
    if (bg.size() != d) throw std::invalid_argument("cocycle: vector length must match the number of weights");
  }
  group.cayley = cayley;
  group.cocycle = b;
  group.weights = weights;

  for (int g = 0; g < n; ++g) {
    Matrix lambda = Matrix::Zero(n, n);
    for (int h = 0; h < n; ++h) lambda(cayley[g][h], h) = 1.0;
    group.lambda.push_back(std::move(lambda));
  }
  group.psi = RealVector::Zero(n);
  for (int g = 0; g < n; ++g) {
    for (Index j = 0; j < d; ++j) group.psi(g) += weights[static_cast<std::size_t>(j)] * b[g](j) * b[g](j);
  }
  group.projections = true;
  std::vector<Jump> jumps;
  for (Index j = 0; j < d; ++j) {
    RealVector diag(n);
    for (int g = 0; g < n; ++g) {
      diag(g) = b[g](j);
      if (diag(g) != 0.0 && diag(g) != 1.0) group.projections = false;
    }
    group.v.push_back(diagonal(diag));
    jumps.push_back({weights[static_cast<std::size_t>(j)], group.v.back()});
  }
  LindbladGenerator generator(TracialAlgebra::full(n), std::move(jumps));
  const auto& algebra = generator.algebra();
  for (int g = 0; g < n; ++g) {
    const Matrix& lambda = group.lambda[static_cast<std::size_t>(g)];
    group.eigen_residual =
        std::max(group.eigen_residual, algebra.gns_norm(generator.apply(lambda) - group.psi(g) * lambda));
  }
  if (std::abs(group.psi(group.identity)) > 1e-12) group.warnings.push_back("psi(e) != 0");
  if (group.eigen_residual > 1e-8) {
    std::ostringstream msg;
    msg << "eigen-relation L lambda_g = psi(g) lambda_g fails (residual " << group.eigen_residual
        << "); b is not a cocycle for these weights";
    group.warnings.push_back(msg.str());
  }
  return {std::move(group), std::move(generator)};
}

LindbladGenerator conditional_expectation_model(const TracialAlgebra& algebra, const Subalgebra& sub) {
  if (!algebra.is_single_block()) {
    throw std::invalid_argument("conditional_expectation_model: only full matrix algebras are supported");
  }
  if (!(sub.algebra() == algebra)) throw std::invalid_argument("conditional_expectation_model: algebra mismatch");
  const int n = algebra.dim();
  // Choi matrix sum_{kl} e_kl (x) E(e_kl); eigenvectors reshape to Kraus operators.
  Matrix choi = Matrix::Zero(n * n, n * n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      Matrix unit = Matrix::Zero(n, n);
      unit(k, l) = 1.0;
      choi.block(k * n, l * n, n, n) = sub.expectation(unit);
    }
  }
  const auto spec = eig_hermitian(choi);
  const double top = spec.eigenvalues(spec.dim() - 1);
  std::vector<Jump> jumps;
  for (Index a = 0; a < spec.dim(); ++a) {
    const double lambda = spec.eigenvalues(a);
    if (lambda < -1e-10 * std::max(1.0, top)) throw NumericalError("conditional expectation is not completely positive");
    if (lambda <= 1e-12 * std::max(1.0, top)) continue;
    // Column k of K is the k-th length-n segment of the eigenvector.
    const Matrix kraus = std::sqrt(lambda) * devectorize(spec.eigenvectors.col(a), n);
    const Matrix h = 0.5 * (kraus + kraus.adjoint());
    const Matrix g = Complex(0.0, -0.5) * (kraus - kraus.adjoint());
    for (const Matrix* m : {&h, &g}) {
      if (m->norm() > 1e-12) jumps.push_back({0.5, hermitian_part(*m)});
    }
  }
  LindbladGenerator generator(algebra, std::move(jumps));
  const int gns = algebra.gns_dim();
  const Matrix expected = Matrix::Identity(gns, gns) - sub.projector();
  const double residual = (generator.superop() - expected).norm();
  if (residual > 1e-10 * (1.0 + expected.norm())) {
    std::ostringstream msg;
    msg << "conditional_expectation_model: jump form misses I - E by " << residual;
    throw NumericalError(msg.str());
  }
  return generator;
}

LindbladGenerator commuting_projections_model(const TracialAlgebra& algebra, const std::vector<Matrix>& projections) {
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const Matrix& p = projections[i];
    if (p.rows() != algebra.dim() || p.cols() != algebra.dim()) {
      throw std::invalid_argument("projection " + std::to_string(i) + " has the wrong size");
    }
    if (!is_hermitian(p, 1e-10) || (p * p - p).norm() > 1e-10) {
      throw std::invalid_argument("projection " + std::to_string(i) + " is not a self-adjoint idempotent");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (commutator(projections[j], p).norm() > 1e-10) {
        throw std::invalid_argument("projections " + std::to_string(j) + " and " + std::to_string(i) +
                                    " do not commute");
      }
    }
  }
  std::vector<Jump> jumps;
  for (const auto& p : projections) jumps.push_back({1.0, p});
  return LindbladGenerator(algebra, std::move(jumps));
}

LindbladGenerator hypercube_model(int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("hypercube_model: d must be in 1..3");
  const int n = 1 << d;
  std::vector<Jump> jumps;
  for (int j = 0; j < d; ++j) {
    Matrix swap = Matrix::Zero(n, n);
    for (int x = 0; x < n; ++x) swap(x ^ (1 << j), x) = 1.0;
    jumps.push_back({0.25, swap});
  }
  return LindbladGenerator(TracialAlgebra::full(n), std::move(jumps));
}

GroupLindblad cyclic_group_model(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("cyclic_group_model: n must be even (embed Z_n into Z_2n)");
  if (n > 8) throw std::invalid_argument("cyclic_group_model: n must be <= 8");
  const int half = n / 2;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  std::vector<RealVector> b(n, RealVector::Zero(half));
  for (int k = 1; k < n; ++k) {
    // Coordinates 1..k for k <= n/2, and k-n/2+1..n/2 beyond.
    const int lo = k <= half ? 1 : k - half + 1;
    const int hi = k <= half ? k : half;
    for (int j = lo; j <= hi; ++j) b[k](j - 1) = 1.0;
  }
  return group_lindblad_from_cocycle(table, b, std::vector<double>(half, 1.0));
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

GroupLindblad symmetric_group_model(int n) {
  if (n != 3 && n != 4) throw std::invalid_argument("symmetric_group_model: n must be 3 or 4");
  const auto perms = permutations(n);
  const int order = static_cast<int>(perms.size());
  auto index_of = [&perms](const std::vector<int>& p) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), p) - perms.begin());
  };
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      std::vector<int> composed(n);
      for (int i = 0; i < n; ++i) composed[i] = perms[a][perms[b][i]];
      table[a][b] = index_of(composed);
    }
  }
  // (A_s)_{jk} = 1 iff s(k) = j. Off-diagonal coordinates are A_jk, diagonal
  // ones 1 - A_jj (the sign flip of b = A - 1 leaves the generator unchanged
  // and makes every coordinate {0, 1}-valued).
  std::vector<RealVector> b(order, RealVector::Zero(n * n));
  for (int s = 0; s < order; ++s) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double a = perms[s][k] == j ? 1.0 : 0.0;
        b[s](j * n + k) = j == k ? 1.0 - a : a;
      }
    }
  }
  return group_lindblad_from_cocycle(table, b, std::vector<double>(static_cast<std::size_t>(n * n), 0.5));
}

RestrictedModel two_point_model(int k, int n) {
  if (n < 2 || k < 1 || k >= n) throw std::invalid_argument("two_point_model: need 1 <= k < n");
  const TracialAlgebra algebra = TracialAlgebra::full(n);
  LindbladGenerator generator = conditional_expectation_model(algebra, Subalgebra::scalars(algebra));
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < k; ++i) p(i, i) = 1.0;
  Subalgebra restriction = Subalgebra::generated_by(algebra, {p});
  return {std::move(generator), std::move(restriction)};
}

// ---------------------------------------------------------------------------

namespace {

int int_param(const ZooParams& params, const std::string& key, int fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) {
    throw std::invalid_argument("parameter " + key + " must be an integer (got '" + it->second + "')");
  }
  return value;
}

void check_known(const ZooParams& params, std::initializer_list<const char*> allowed, const std::string& family) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw std::invalid_argument("model " + family + " has no parameter '" + key + "'");
  }
}

constexpr const char* kRefConditional = "conditional expectation example: L = I - E satisfies CGE(1/2)";
constexpr const char* kRefProjections = "commuting projections theorem: CGE(1); optimal for a single projection";
constexpr const char* kRefHypercube = "hypercube example (commuting self-adjoint unitaries): CGE(1)";
constexpr const char* kRefCyclic = "Z_n word-length cocycle example: CGE(1)";
constexpr const char* kRefSymmetric = "S_n Hamming cocycle example: CGE(1/2)";
constexpr const char* kRefTwoPoint = "two-point chain (mean dependence of the optimal constant); CGE(1/2) by restriction";

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"depolarizing2", "depolarizing", {{"n", "2"}}, 0.5, kRefConditional},
      {"depolarizing3", "depolarizing", {{"n", "3"}}, 0.5, kRefConditional},
      {"diagonal2", "diagonal", {{"n", "2"}}, 0.5, kRefConditional},
      {"projection2", "projection", {}, 1.0, kRefProjections},
      {"projections4", "projections4", {}, 1.0, kRefProjections},
      {"hypercube2", "hypercube", {{"d", "2"}}, 1.0, kRefHypercube},
      {"cyclic4", "cyclic", {{"n", "4"}}, 1.0, kRefCyclic},
      {"cyclic6", "cyclic", {{"n", "6"}}, 1.0, kRefCyclic},
      {"symmetric3", "symmetric", {{"n", "3"}}, 0.5, kRefSymmetric},
      {"two_point", "two_point", {{"k", "1"}, {"n", "3"}}, 0.5, kRefTwoPoint},
  };
  return entries;
}

ZooModel build_model(const std::string& name, const ZooParams& params) {
  for (const auto& entry : catalog()) {
    if (entry.name == name && entry.family != name) {
      ZooParams merged = entry.params;
      for (const auto& [key, value] : params) merged[key] = value;
      ZooModel model = build_model(entry.family, merged);
      model.name = entry.name;
      return model;
    }
  }
  if (name == "depolarizing" || name == "diagonal") {
    check_known(params, {"n"}, name);
    const int n = int_param(params, "n", 2);
    if (n < 1 || n > 8) throw std::invalid_argument(name + ": n must be in 1..8");
    const TracialAlgebra algebra = TracialAlgebra::full(n);
    std::vector<Matrix> units;
    for (int i = 0; i < n; ++i) {
      Matrix e = Matrix::Zero(n, n);
      e(i, i) = 1.0;
      units.push_back(std::move(e));
    }
    const Subalgebra sub =
        name == "depolarizing" ? Subalgebra::scalars(algebra) : Subalgebra::generated_by(algebra, units);
    return {name + std::to_string(n), conditional_expectation_model(algebra, sub), 0.5, kRefConditional, {}, {}};
  }
  if (name == "projection") {
    check_known(params, {}, name);
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1.0;
    return {"projection2", commuting_projections_model(TracialAlgebra::full(2), {p}), 1.0, kRefProjections, {}, {}};
  }
  if (name == "projections4") {
    check_known(params, {}, name);
    std::vector<Matrix> ps;
    for (int bit = 0; bit < 2; ++bit) {
      RealVector mask(4);
      for (int i = 0; i < 4; ++i) mask(i) = (i >> bit) & 1;
      ps.push_back(mask.cast<Complex>().asDiagonal());
    }
    return {"projections4", commuting_projections_model(TracialAlgebra::full(4), ps), 1.0, kRefProjections, {}, {}};
  }
  if (name == "hypercube") {
    check_known(params, {"d"}, name);
    const int d = int_param(params, "d", 2);
    return {"hypercube" + std::to_string(d), hypercube_model(d), 1.0, kRefHypercube, {}, {}};
  }
  if (name == "cyclic") {
    check_known(params, {"n"}, name);
    const int n = int_param(params, "n", 4);
    auto built = cyclic_group_model(n);
    return {"cyclic" + std::to_string(n), std::move(built.generator), 1.0, kRefCyclic, {}, std::move(built.group)};
  }
  if (name == "symmetric") {
    check_known(params, {"n"}, name);
    const int n = int_param(params, "n", 3);
    auto built = symmetric_group_model(n);
    return {"symmetric" + std::to_string(n), std::move(built.generator), 0.5, kRefSymmetric, {}, std::move(built.group)};
  }
  if (name == "two_point") {
    check_known(params, {"k", "n"}, name);
    const int k = int_param(params, "k", 1);
    const int n = int_param(params, "n", 3);
    auto built = two_point_model(k, n);
    return {"two_point", std::move(built.generator), 0.5, kRefTwoPoint, std::move(built.restriction), {}};
  }
  if (name == "zero") {
    check_known(params, {"n"}, name);
    const int n = int_param(params, "n", 2);
    if (n < 1 || n > 8) throw std::invalid_argument("zero: n must be in 1..8");
    return {"zero" + std::to_string(n), LindbladGenerator(TracialAlgebra::full(n), {}),
            std::numeric_limits<double>::infinity(), "zero generator: GE(K) for every K", {}, {}};
  }
  throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace ncgrad
