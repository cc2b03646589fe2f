#include "quartsolve/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "quartsolve/lewis.hpp"

namespace quartsolve {

namespace {

Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out(i, j) = gauss(rng);
    }
  }
  return out;
}

/// Orthonormal columns via Householder QR of a Gaussian draw.
Matrix gaussian_orthonormal(std::mt19937_64& rng, int rows, int cols) {
  Matrix g = gaussian_matrix(rng, rows, cols);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

std::vector<PsdFactor> rank_one_factors(const Matrix& a) {
  std::vector<PsdFactor> factors;
  factors.reserve(static_cast<size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    factors.emplace_back(a.row(i).transpose());
  }
  return factors;
}

Vector unit_gaussian(std::mt19937_64& rng, int n) {
  Matrix g = gaussian_matrix(rng, n, 1);
  Vector v = g.col(0);
  const double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

/// Deterministic spectrum hitting both endpoints of [sigma_min, 1] exactly.
Vector endpoint_spectrum(int n, double sigma_min) {
  Vector s(n);
  if (n == 1) {
    s(0) = 1.0;
    return s;
  }
  for (int i = 0; i < n; ++i) {
    s(i) = sigma_min + (1.0 - sigma_min) * static_cast<double>(i) / (n - 1);
  }
  return s;
}

}  // namespace

SyntheticInstance gen_synthetic(int m, int n, double sigma_min, std::uint64_t seed) {
  if (m < n || n < 1) {
    std::ostringstream os;
    os << "gen_synthetic: need m >= n >= 1, got m=" << m << ", n=" << n;
    throw BadShape(os.str());
  }
  if (!(sigma_min > 0.0 && sigma_min <= 1.0)) {
    std::ostringstream os;
    os << "gen_synthetic: sigma_min must lie in (0,1], got " << sigma_min;
    throw BadShape(os.str());
  }
  std::mt19937_64 rng(seed);
  Matrix u = gaussian_orthonormal(rng, m, n);
  Matrix v = gaussian_orthonormal(rng, n, n);
  std::uniform_real_distribution<double> sigma(sigma_min, 1.0);
  Vector s(n);
  for (int i = 0; i < n; ++i) {
    s(i) = sigma(rng);
  }
  Matrix a = u * s.asDiagonal() * v.transpose();
  SyntheticInstance inst{QuarticForm::sum_of_squares(rank_one_factors(a)),
                         unit_gaussian(rng, n), 0.0};
  return inst;
}

SyntheticInstance gen_coherent(int m, int n, CoherenceTarget target, double sigma_ratio,
                               std::uint64_t seed) {
  if (m <= n || n < 2) {
    std::ostringstream os;
    os << "gen_coherent: need m > n >= 2, got m=" << m << ", n=" << n;
    throw BadShape(os.str());
  }
  if (!(sigma_ratio >= 1.0)) {
    throw BadShape("gen_coherent: sigma_ratio must be >= 1");
  }
  std::mt19937_64 rng(seed);
  const double sigma_min = 1.0 / sigma_ratio;
  Matrix a;
  if (target == CoherenceTarget::Low) {
    Matrix u = gaussian_orthonormal(rng, m, n);
    Matrix v = gaussian_orthonormal(rng, n, n);
    a = u * endpoint_spectrum(n, sigma_min).asDiagonal() * v.transpose();
  } else {
    // One row owns the first coordinate outright; the rest of the matrix
    // lives on the remaining coordinates, so that row's leverage is exactly
    // one whatever the weights of the others.
    Matrix u = gaussian_orthonormal(rng, m - 1, n - 1);
    Matrix v = gaussian_orthonormal(rng, n - 1, n - 1);
    Matrix rest = u * endpoint_spectrum(n - 1, sigma_min).asDiagonal() * v.transpose();
    a = Matrix::Zero(m, n);
    a(0, 0) = std::sqrt(sigma_min);  // strictly inside [sigma_min, 1]
    a.block(1, 1, m - 1, n - 1) = rest;
  }
  SyntheticInstance inst{QuarticForm::sum_of_squares(rank_one_factors(a)),
                         unit_gaussian(rng, n), 0.0};
  inst.gamma = coherence(inst.form.factors());
  return inst;
}

PhaseRetrievalInstance gen_phase_retrieval(int n_signal, int m, std::uint64_t seed) {
  if (n_signal < 1 || m < 2 * n_signal) {
    std::ostringstream os;
    os << "gen_phase_retrieval: need m >= 2N >= 2, got N=" << n_signal << ", m=" << m;
    throw BadShape(os.str());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int dim = 2 * n_signal;

  // Interleaved real embedding of the planted signal.
  Vector x_star(dim);
  for (int j = 0; j < dim; ++j) {
    x_star(j) = gauss(rng);
  }

  std::vector<PsdFactor> factors;
  factors.reserve(static_cast<size_t>(m));
  Vector d(m);
  for (int i = 0; i < m; ++i) {
    // One measurement vector q; its modulus-square form embeds as two
    // orthogonal columns (real part pairing and imaginary part pairing).
    Matrix uw = Matrix::Zero(dim, 2);
    for (int j = 0; j < n_signal; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      uw(2 * j, 0) = re;
      uw(2 * j + 1, 0) = im;
      uw(2 * j, 1) = -im;
      uw(2 * j + 1, 1) = re;
    }
    PsdFactor factor(std::move(uw));
    d(i) = factor.quad(x_star);
    factors.push_back(std::move(factor));
  }
  return PhaseRetrievalInstance{QipInstance(std::move(factors), std::move(d), Cone{}),
                                x_star};
}

DmcInstance gen_dmc(int n_points, int r, double edge_density, std::uint64_t seed) {
  if (n_points < 2 || r < 1) {
    throw BadShape("gen_dmc: need at least two points and rank >= 1");
  }
  if (!(edge_density > 0.0 && edge_density <= 1.0)) {
    throw BadShape("gen_dmc: edge_density must lie in (0,1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<std::pair<int, int>> edges;
  for (int attempt = 0; attempt < 100; ++attempt) {
    edges.clear();
    for (int i = 0; i < n_points; ++i) {
      for (int j = i + 1; j < n_points; ++j) {
        if (coin(rng) < edge_density) {
          edges.emplace_back(i, j);
        }
      }
    }
    // Connectivity by label propagation over the sampled edges.
    std::vector<int> comp(n_points);
    for (int i = 0; i < n_points; ++i) {
      comp[i] = i;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [i, j] : edges) {
        const int lo = std::min(comp[i], comp[j]);
        if (comp[i] != lo || comp[j] != lo) {
          comp[i] = comp[j] = lo;
          changed = true;
        }
      }
    }
    if (std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; })) {
      break;
    }
    if (attempt == 99) {
      std::ostringstream os;
      os << "gen_dmc: no connected graph on " << n_points << " vertices at density "
         << edge_density << " after 100 draws";
      throw DisconnectedGraph(os.str());
    }
  }

  Matrix points = gaussian_matrix(rng, n_points, r);
  points.rowwise() -= points.colwise().mean();

  const int dim = n_points * r;
  std::vector<PsdFactor> factors;
  factors.reserve(edges.size() + 1);
  Vector d(static_cast<Eigen::Index>(edges.size()) + 1);
  Matrix laplacian = Matrix::Zero(n_points, n_points);
  for (size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    // Column-stacked layout: coordinate k of every point occupies block k.
    Matrix u = Matrix::Zero(dim, r);
    for (int k = 0; k < r; ++k) {
      u(k * n_points + i, k) = 1.0;
      u(k * n_points + j, k) = -1.0;
    }
    PsdFactor factor(std::move(u));
    d(static_cast<Eigen::Index>(e)) =
        (points.row(i) - points.row(j)).squaredNorm();
    factors.push_back(std::move(factor));
    laplacian(i, i) += 1.0;
    laplacian(j, j) += 1.0;
    laplacian(i, j) -= 1.0;
    laplacian(j, i) -= 1.0;
  }
  // Centering factor pins the translation null mode of the edge sum.
  {
    Matrix u = Matrix::Zero(dim, r);
    const double w = 1.0 / std::sqrt(static_cast<double>(n_points));
    for (int k = 0; k < r; ++k) {
      for (int i = 0; i < n_points; ++i) {
        u(k * n_points + i, k) = w;
      }
    }
    factors.emplace_back(std::move(u));
    d(d.size() - 1) = 0.0;  // planted points are centered
  }

  DmcInstance inst{QipInstance(std::move(factors), std::move(d), Cone{}),
                   std::move(points),
                   std::move(edges),
                   0.0,
                   0,
                   0.0};

  Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian, Eigen::EigenvaluesOnly);
  inst.laplacian_lambda1 = es.eigenvalues()(1);
  for (int i = 0; i < n_points; ++i) {
    inst.max_degree = std::max(inst.max_degree, static_cast<int>(laplacian(i, i)));
  }
  // Effective resistances: the centering term makes L + 11ᵀ/N invertible and
  // agrees with the pseudoinverse on edge differences.
  Matrix grounded =
      laplacian + Matrix::Constant(n_points, n_points, 1.0 / n_points);
  SpdOperator grounded_op(grounded);
  for (const auto& [i, j] : inst.edges) {
    Vector delta = Vector::Zero(n_points);
    delta(i) = 1.0;
    delta(j) = -1.0;
    inst.gamma_graph =
        std::max(inst.gamma_graph, delta.dot(grounded_op.apply_inverse(delta)));
  }
  return inst;
}

Vector dmc_mds_start(const DmcInstance& inst) {
  const int n_points = static_cast<int>(inst.points.rows());
  const int r = static_cast<int>(inst.points.cols());
  const double inf = std::numeric_limits<double>::infinity();

  // Graph metric: measured edge lengths, completed by Floyd-Warshall.
  Matrix dist = Matrix::Constant(n_points, n_points, inf);
  for (int i = 0; i < n_points; ++i) {
    dist(i, i) = 0.0;
  }
  for (size_t e = 0; e < inst.edges.size(); ++e) {
    const auto [i, j] = inst.edges[e];
    const double w = std::sqrt(std::max(inst.qip.d(static_cast<Eigen::Index>(e)), 0.0));
    dist(i, j) = std::min(dist(i, j), w);
    dist(j, i) = dist(i, j);
  }
  for (int k = 0; k < n_points; ++k) {
    for (int i = 0; i < n_points; ++i) {
      for (int j = 0; j < n_points; ++j) {
        dist(i, j) = std::min(dist(i, j), dist(i, k) + dist(k, j));
      }
    }
  }
  if (!dist.allFinite()) {
    throw DisconnectedGraph("dmc_mds_start: metric completion left infinite entries");
  }

  // Double centering of the squared metric, then the best rank-r factors.
  Matrix squared = dist.array().square();
  Vector row_mean = squared.rowwise().mean();
  const double grand = row_mean.mean();
  Matrix gram = -0.5 * (squared.colwise() - row_mean);
  gram.rowwise() -= (-0.5 * (row_mean.array() - grand)).matrix().transpose();
  gram = 0.5 * (gram + gram.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  Vector x0 = Vector::Zero(static_cast<Eigen::Index>(n_points) * r);
  for (int k = 0; k < r; ++k) {
    const int which = n_points - 1 - k;
    const double scale = std::sqrt(std::max(es.eigenvalues()(which), 0.0));
    x0.segment(static_cast<Eigen::Index>(k) * n_points, n_points) =
        scale * es.eigenvectors().col(which);
  }
  // Eigenvectors of nonzero modes are mean free, so the configuration is
  // centered; enforce it exactly against rounding.
  for (int k = 0; k < r; ++k) {
    auto block = x0.segment(static_cast<Eigen::Index>(k) * n_points, n_points);
    block.array() -= block.mean();
  }
  return x0;
}

SymnmfInstance gen_symnmf(int n, int r, std::uint64_t seed) {
  if (n < r || r < 1) {
    std::ostringstream os;
    os << "gen_symnmf: need n >= r >= 1, got n=" << n << ", r=" << r;
    throw BadShape(os.str());
  }
  std::mt19937_64 rng(seed);
  Matrix x_star = gaussian_matrix(rng, n, r).cwiseAbs();
  SymnmfInstance inst{QuarticForm::gram(n, r), x_star * x_star.transpose(), x_star,
                      Cone{ConeKind::NonnegativeOrthant}};
  return inst;
}

double SymnmfInstance::eval_F(const Matrix& x) const {
  return (x * x.transpose() - target).squaredNorm();
}

DcProblem SymnmfInstance::to_dc_problem() const {
  const int n = static_cast<int>(target.rows());
  const int r = form.r_cols();
  auto m_held = std::make_shared<Matrix>(target);
  DcProblem problem{form, cone, {}, {}};
  problem.eval_objective = [m_held, n, r](const Vector& x) {
    Eigen::Map<const Matrix> mat(x.data(), n, r);
    return (mat * mat.transpose() - *m_held).squaredNorm();
  };
  problem.grad_concave = [m_held, n, r](const Vector& x) {
    Eigen::Map<const Matrix> mat(x.data(), n, r);
    Matrix g = 4.0 * (*m_held) * mat;
    return Vector(Eigen::Map<Vector>(g.data(), n * r));
  };
  return problem;
}

void check_factor_assumptions(const std::vector<PsdFactor>& factors, bool require_m_ge_n) {
  if (factors.empty()) {
    throw BadShape("check_factor_assumptions: empty factor tuple");
  }
  const int n = factors.front().dim();
  for (const auto& f : factors) {
    if (f.dim() != n) {
      throw BadShape("check_factor_assumptions: mixed dimensions");
    }
  }
  if (require_m_ge_n && static_cast<int>(factors.size()) < n) {
    std::ostringstream os;
    os << "check_factor_assumptions: m=" << factors.size() << " < n=" << n;
    throw BadShape(os.str());
  }
  // Full-rank sum: the Cholesky inside SpdOperator is the certificate.
  try {
    sum_weighted(factors, Vector::Ones(static_cast<Eigen::Index>(factors.size())));
  } catch (const NotPositiveDefinite&) {
    throw SingularBbar("check_factor_assumptions: factor sum is rank deficient");
  }
}

}  // namespace quartsolve
