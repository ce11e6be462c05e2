#pragma once

// Exact projection-DPP sampling on a quadrature grid, Haar unitaries, orbital
// averages and empirical statistics of samples.

#include "besselforge/operators.hpp"
#include "besselforge/pickrell.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace besselforge::sampling {

struct Configuration {
  std::vector<double> points; // ascending
};

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream); stream k is reproducible on its own.
Rng substream(std::uint64_t seed, std::uint64_t stream);

/// Grid indices of one draw of the projection DPP whose kernel is F F^T,
/// F = basis.functions (orthonormal columns, weighted coordinates).
std::vector<Eigen::Index> sample_dpp_atoms(const operators::SubspaceBasis& basis, Rng& rng);
Configuration sample_dpp(const operators::SubspaceBasis& basis, Rng& rng);
/// `count` samples, sample k drawn from substream(seed, k).
std::vector<Configuration> sample_dpp_many(const operators::SubspaceBasis& basis, std::size_t count,
                                           std::uint64_t seed, unsigned threads = 1);

Eigen::MatrixXcd sample_haar_unitary(int n, Rng& rng);

struct ComplexEstimate {
  std::complex<double> mean;
  double stderr_ = 0.0; // of the complex mean, sqrt(E|X - mean|^2 / trials)
};

/// Monte Carlo of int int exp(i Re tr(zeta^* (u1 z u2^{-1})_{m x m})) du1 du2;
/// trial k uses substream(seed, k).
ComplexEstimate orbital_average(const Eigen::MatrixXcd& zeta, const Eigen::MatrixXcd& z,
                                std::size_t trials, std::uint64_t seed, unsigned threads = 1);

/// (tr z^*z / n^2, eigenvalues of z^*z / n^2 in nonincreasing order).
pickrell::PickrellPoint radial_point(const Eigen::MatrixXcd& z);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  double mean_count = 0.0;
  double stderr_ = 0.0;
};

/// Per-bin mean counts over samples; edges must be increasing.
std::vector<HistogramBin> empirical_intensity(const std::vector<Configuration>& samples,
                                              const std::vector<double>& edges);

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Mean of prod_i g(x_i); throws UsageError if g leaves (0, 1] at a sample point.
Estimate laplace_functional(const std::vector<Configuration>& samples,
                            const std::function<double(double)>& g);

} // namespace besselforge::sampling
