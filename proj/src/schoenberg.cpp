#include "orthopos/schoenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "orthopos/parallel.hpp"

namespace orthopos {

void SchoenbergProblem::validate() const {
  if (d < 2) throw std::invalid_argument("SchoenbergProblem: d must be >= 2");
  if (nmax < 0) throw std::invalid_argument("SchoenbergProblem: nmax < 0");
  if (cf.size() != static_cast<std::size_t>(nmax) + 1)
    throw std::invalid_argument("SchoenbergProblem: cf must have nmax+1 entries");
  for (double c : cf)
    if (c < 0)
      throw std::invalid_argument("SchoenbergProblem: cf entries must be >= 0");
  for (int h : hits)
    if (h < 0 || h > nmax)
      throw std::invalid_argument("SchoenbergProblem: hit index outside 0..nmax");
  if (!(a0 > 0) || a0 > 1)
    throw std::invalid_argument("SchoenbergProblem: a0 must lie in (0,1]");
  if (!(tol > 0)) throw std::invalid_argument("SchoenbergProblem: tol must be > 0");
  if (tol_eig < 0)
    throw std::invalid_argument("SchoenbergProblem: tol_eig must be >= 0");
}

int SchoenbergProblem::l_min() const {
  if (hits.empty()) return -1;
  return *std::min_element(hits.begin(), hits.end());
}

std::vector<double> SchoenbergProblem::effective_coeffs(double alpha) const {
  std::vector<double> eff = cf;
  for (int h : hits) eff[static_cast<std::size_t>(h)] -= (alpha / a0) * cf[h];
  return eff;
}

Eigen::MatrixXd sample_unit_vectors(int n, int ambient_dim, Philox4x32& rng) {
  if (n < 1 || ambient_dim < 2)
    throw std::invalid_argument("sample_unit_vectors: need n >= 1, dim >= 2");
  Eigen::MatrixXd v(ambient_dim, n);
  for (int col = 0; col < n; ++col) {
    double norm2;
    do {
      norm2 = 0.0;
      for (int row = 0; row < ambient_dim; ++row) {
        v(row, col) = rng.gaussian();
        norm2 += v(row, col) * v(row, col);
      }
    } while (norm2 < std::numeric_limits<double>::min());
    v.col(col) /= std::sqrt(norm2);
  }
  return v;
}

Eigen::MatrixXd sample_unit_vectors(int n, int ambient_dim, std::uint64_t seed,
                                    std::uint64_t stream) {
  Philox4x32 rng(seed, stream);
  return sample_unit_vectors(n, ambient_dim, rng);
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& vectors) {
  Eigen::MatrixXd z = vectors.transpose() * vectors;
  z = z.cwiseMax(-1.0).cwiseMin(1.0);
  z.diagonal().setOnes();
  return z;
}

Eigen::MatrixXd kernel_from_coefficients(const std::vector<double>& coeffs,
                                         int d, const Eigen::MatrixXd& gram) {
  if (coeffs.empty())
    throw std::invalid_argument("kernel_from_coefficients: empty coefficients");
  if (d < 2) throw std::invalid_argument("kernel_from_coefficients: d < 2");
  const Eigen::Index n = gram.rows();
  const Eigen::ArrayXXd z = gram.array();

  Eigen::ArrayXXd prev = Eigen::ArrayXXd::Constant(n, n, 1.0);  // B_0
  Eigen::ArrayXXd f = coeffs[0] * prev;
  if (coeffs.size() > 1) {
    Eigen::ArrayXXd cur = (d - 1) * z;  // B_1 = 2 lambda z
    f += coeffs[1] * cur;
    for (std::size_t k = 1; k + 1 < coeffs.size(); ++k) {
      const double kk = static_cast<double>(k);
      Eigen::ArrayXXd next =
          ((2 * kk + d - 1) * z * cur - (kk + d - 2) * prev) / (kk + 1);
      prev.swap(cur);
      cur.swap(next);
      f += coeffs[k + 1] * cur;
    }
  }
  Eigen::MatrixXd fm = f.matrix();
  return 0.5 * (fm + fm.transpose());
}

Eigen::MatrixXd kernel_matrix(const SchoenbergProblem& problem, double alpha,
                              const Eigen::MatrixXd& gram) {
  return kernel_from_coefficients(problem.effective_coeffs(alpha), problem.d,
                                  gram);
}

namespace {

// Restarted Lanczos with full reorthogonalization for the smallest algebraic
// eigenvalue. Returns nullopt on non-convergence.
std::optional<double> lanczos_smallest(const Eigen::MatrixXd& F,
                                       const MinEigOptions& opts) {
  const Eigen::Index n = F.rows();
  const int m = static_cast<int>(std::min<Eigen::Index>(opts.subspace, n));
  if (m < 2) return std::nullopt;

  const double scale = std::max(F.norm(), 1e-300);

  Philox4x32 rng(0x0707d5ee, static_cast<std::uint64_t>(n));
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian();
  v.normalize();

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    Eigen::MatrixXd basis(n, m);
    Eigen::VectorXd diag(m), off(m);
    basis.col(0) = v;
    int built = m;
    bool invariant = false;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = F * basis.col(j);
      diag(j) = basis.col(j).dot(w);
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
      const double norm = w.norm();
      off(j) = norm;
      if (j + 1 < m) {
        if (norm <= 1e-14 * scale) {
          built = j + 1;
          invariant = true;
          break;
        }
        basis.col(j + 1) = w / norm;
      }
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
    for (int j = 0; j < built; ++j) {
      tri(j, j) = diag(j);
      if (j + 1 < built) tri(j, j + 1) = tri(j + 1, j) = off(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
    const double theta = small.eigenvalues()(0);
    const Eigen::VectorXd ritz = small.eigenvectors().col(0);
    const double residual =
        invariant ? 0.0 : std::abs(off(built - 1) * ritz(built - 1));

    v = basis.leftCols(built) * ritz;
    v.normalize();
    if (residual <= opts.tol * scale) return theta;
  }
  return std::nullopt;
}

}  // namespace

double min_eigenvalue(const Eigen::MatrixXd& F, const MinEigOptions& opts,
                      bool* dense_fallback) {
  if (F.rows() != F.cols())
    throw std::invalid_argument("min_eigenvalue: matrix must be square");
  if (dense_fallback) *dense_fallback = false;
  if (F.rows() < opts.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(F,
                                                          Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
  }
  if (const auto lanczos = lanczos_smallest(F, opts)) return *lanczos;
  if (dense_fallback) *dense_fallback = true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(F,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool psd_test(const SchoenbergProblem& problem, double alpha,
              const Eigen::MatrixXd& vectors, const MinEigOptions& opts) {
  const Eigen::MatrixXd gram = gram_matrix(vectors);
  return min_eigenvalue(kernel_matrix(problem, alpha, gram), opts) >=
         -problem.tol_eig;
}

namespace {

double bisect_on_kernel(const KernelBuilder& builder, double tol,
                        double tol_eig, const Eigen::MatrixXd& gram,
                        const MinEigOptions& opts, bool negative_above) {
  double lo = 0.0, hi = 1.0, alpha = 0.5 * (lo + hi);
  while (hi - lo > tol) {
    alpha = 0.5 * (lo + hi);
    const bool negative =
        min_eigenvalue(builder(alpha, gram), opts) < -tol_eig;
    if (negative == negative_above)
      hi = alpha;
    else
      lo = alpha;
  }
  return alpha;
}

SampleStats run_samples(const KernelBuilder& builder, int ambient_dim,
                        double tol, double tol_eig, int n, int samples,
                        std::uint64_t seed, const MinEigOptions& opts,
                        unsigned threads, bool negative_above) {
  if (samples < 1)
    throw std::invalid_argument("estimate_alpha0: samples must be >= 1");
  std::vector<double> estimates(static_cast<std::size_t>(samples));
  parallel_for(
      static_cast<std::size_t>(samples),
      [&](std::size_t rep) {
        Philox4x32 rng(seed, rep);
        const Eigen::MatrixXd v = sample_unit_vectors(n, ambient_dim, rng);
        estimates[rep] = bisect_on_kernel(builder, tol, tol_eig,
                                          gram_matrix(v), opts, negative_above);
      },
      threads);

  double sum = 0.0;
  for (double a : estimates) sum += a;
  const double mean = sum / samples;
  double var = 0.0;
  for (double a : estimates) var += (a - mean) * (a - mean);
  const double dev = samples > 1 ? std::sqrt(var / (samples - 1)) : 0.0;
  return SampleStats{n, mean, dev, samples};
}

}  // namespace

double bisect_alpha_on_gram(const SchoenbergProblem& problem,
                            const Eigen::MatrixXd& gram,
                            const MinEigOptions& opts) {
  return bisect_on_kernel(
      [&](double alpha, const Eigen::MatrixXd& z) {
        return kernel_matrix(problem, alpha, z);
      },
      problem.tol, problem.tol_eig, gram, opts, /*negative_above=*/true);
}

SampleStats estimate_alpha0(const SchoenbergProblem& problem, int n,
                            int samples, std::uint64_t seed,
                            const MinEigOptions& opts, unsigned threads) {
  problem.validate();
  return run_samples(
      [&](double alpha, const Eigen::MatrixXd& z) {
        return kernel_matrix(problem, alpha, z);
      },
      problem.d + 1, problem.tol, problem.tol_eig, n, samples, seed, opts,
      threads, /*negative_above=*/true);
}

SampleStats estimate_alpha0_for(const KernelBuilder& builder, int d, double tol,
                                double tol_eig, int n, int samples,
                                std::uint64_t seed, const MinEigOptions& opts,
                                unsigned threads, bool negative_above) {
  if (d < 2) throw std::invalid_argument("estimate_alpha0_for: d < 2");
  if (!(tol > 0)) throw std::invalid_argument("estimate_alpha0_for: tol <= 0");
  return run_samples(builder, d + 1, tol, tol_eig, n, samples, seed, opts,
                     threads, negative_above);
}

}  // namespace orthopos
