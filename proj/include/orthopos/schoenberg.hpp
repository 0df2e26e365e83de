#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "orthopos/rng.hpp"

namespace orthopos {

/// Planted positivity problem on S^d: the target function is
///   f_alpha(z) = sum_k (cf[k] - (alpha/a0) cf[k] [k in hits]) B_k(z),
/// so the hit coefficients cross zero exactly at alpha = a0. Coefficients are
/// indexed from degree 0 and the series is truncated at nmax inclusive.
struct SchoenbergProblem {
  int d = 2;
  int nmax = 0;
  std::vector<double> cf;    // length nmax+1, entries >= 0
  std::vector<int> hits;     // parameter-dependent degrees
  double a0 = 0.5;
  double tol = 1e-6;         // alpha bisection tolerance
  double tol_eig = 0.0;      // PSD fails iff min eigenvalue < -tol_eig

  void validate() const;
  int l_min() const;  // first (potentially) negative level; -1 if no hits
  std::vector<double> effective_coeffs(double alpha) const;
};

struct MinEigOptions {
  int dense_threshold = 500;  // dense solver below, Lanczos at or above
  int subspace = 40;
  int max_restarts = 300;
  double tol = 1e-10;  // Lanczos residual, relative to ||F||_F
};

/// Smallest (algebraic) eigenvalue of a symmetric matrix. Dense below the
/// threshold; restarted Lanczos with full reorthogonalization above, falling
/// back to dense on non-convergence (reported via dense_fallback).
double min_eigenvalue(const Eigen::MatrixXd& F, const MinEigOptions& opts = {},
                      bool* dense_fallback = nullptr);

/// n unit vectors uniform on S^{ambient_dim-1}, one per column (Gaussian
/// normalization). Fixed stream -> bit-identical output.
Eigen::MatrixXd sample_unit_vectors(int n, int ambient_dim, Philox4x32& rng);
Eigen::MatrixXd sample_unit_vectors(int n, int ambient_dim, std::uint64_t seed,
                                    std::uint64_t stream = 0);

/// Pairwise inner products, diagonal pinned to 1, entries clamped to [-1,1].
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& vectors);

/// F_ij = sum_k coeffs[k] B_k(z_ij) by entrywise recurrence, explicitly
/// symmetrized.
Eigen::MatrixXd kernel_from_coefficients(const std::vector<double>& coeffs,
                                         int d, const Eigen::MatrixXd& gram);

Eigen::MatrixXd kernel_matrix(const SchoenbergProblem& problem, double alpha,
                              const Eigen::MatrixXd& gram);

/// Schoenberg test at one alpha: true iff the kernel matrix over the given
/// unit vectors is PSD up to tol_eig.
bool psd_test(const SchoenbergProblem& problem, double alpha,
              const Eigen::MatrixXd& vectors, const MinEigOptions& opts = {});

/// Bisection of [0,1] on one fixed vector sample: a negative eigenvalue at
/// alpha moves the upper end down. Returns the last midpoint.
double bisect_alpha_on_gram(const SchoenbergProblem& problem,
                            const Eigen::MatrixXd& gram,
                            const MinEigOptions& opts = {});

struct SampleStats {
  int n = 0;
  double mean_alpha = 0.0;
  double std_alpha = 0.0;
  int samples = 0;
};

/// Monte-Carlo estimate of a0 at tuple size n: independent samples (one
/// Philox stream each), per-sample bisection, mean/std over samples.
SampleStats estimate_alpha0(const SchoenbergProblem& problem, int n,
                            int samples, std::uint64_t seed,
                            const MinEigOptions& opts = {},
                            unsigned threads = 0);

/// As above for an arbitrary kernel family: builder(alpha, gram) must return
/// the symmetric kernel matrix of the function under test. `negative_above`
/// states on which side of the threshold PSD failures occur: true for
/// planted-style families (coefficients shrink with alpha), false for
/// amplitude-style ones (positivity holds above the critical slope).
using KernelBuilder =
    std::function<Eigen::MatrixXd(double, const Eigen::MatrixXd&)>;
SampleStats estimate_alpha0_for(const KernelBuilder& builder, int d, double tol,
                                double tol_eig, int n, int samples,
                                std::uint64_t seed,
                                const MinEigOptions& opts = {},
                                unsigned threads = 0,
                                bool negative_above = true);

/// Number of linearly independent spherical harmonics of degree l on S^d.
std::int64_t harmonic_count_at_degree(int l, int d);

/// Cumulative count H(l, d) of harmonics of degree <= l.
std::int64_t harmonic_count(int l, int d);

/// Increasing tuple sizes from 1 up to 2*H(l_min, d), at most max_points of
/// them (endpoints always included). Detection of a negative level at l_min
/// needs tuples about twice the harmonic count.
std::vector<int> n_schedule(int l_min, int d, int max_points = 10);

}  // namespace orthopos
