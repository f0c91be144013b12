#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace grreg {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cd I_unit{0.0, 1.0};

// Spectral norm (largest singular value).
double opnorm(const Mat& a);
double min_singular_value(const Mat& a);

// Positive square root / power of a Hermitian PSD matrix; eigenvalues in
// (-clamp, 0) are treated as zero, anything more negative is kept negative
// and shows up in later residuals.
Mat psd_sqrt(const Mat& a, double clamp = 1e-12);
Mat psd_pow(const Mat& a, double p, double clamp = 1e-12);
Mat hermitian_part(const Mat& a);

// Orthonormal basis of the column span (rank at relative singular value
// threshold tol) and of the nullspace.
Mat orth(const Mat& a, double tol = 1e-10);
Mat null_space(const Mat& a, double tol = 1e-10);
Eigen::Index numerical_rank(const Mat& a, double tol = 1e-10);

// Orthonormal bases Q1, Q2; returns the principal angles in ascending order.
RVec principal_angles(const Mat& q1, const Mat& q2);
// Subspace equality / containment for orthonormal bases.
bool same_subspace(const Mat& q1, const Mat& q2, double tol = 1e-10);
bool contains_subspace(const Mat& outer, const Mat& inner, double tol = 1e-10);
Mat intersect_subspaces(const Mat& q1, const Mat& q2, double tol = 1e-10);

// Seeded generators; every random instance in the library goes through these.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  cd cnormal() { return cd(normal(), normal()) / std::sqrt(2.0); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Mat gaussian(Eigen::Index rows, Eigen::Index cols);
  Mat unitary(Eigen::Index n);
  std::mt19937_64& engine() { return gen_; }

private:
  std::mt19937_64 gen_;
};

}  // namespace grreg
