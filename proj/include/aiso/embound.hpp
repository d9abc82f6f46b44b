#pragma once

// Sampled finite-dimensional normed spaces, their emboundments, the tabulated
// Banach-Mazur generator predicates, and linear-map correlations.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "aiso/corrsearch.hpp"
#include "aiso/distsys.hpp"
#include "aiso/mstruct.hpp"

namespace aiso {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;
using Mat = std::vector<std::vector<cplx>>;  // row-major

enum class Field { Real, Complex };
enum class NormKind { L1, L2, Linf };

struct SampledBanach {
  std::size_t dim = 2;
  Field field = Field::Real;
  NormKind norm = NormKind::L2;
  std::vector<double> weights;  // optional positive coordinate weights
  std::vector<Vec> samples;
  double radius_cap = 10.0;

  double norm_of(const Vec& v) const;
};

std::string norm_name(NormKind k, bool weighted);
NormKind parse_norm(const std::string& s);

// Empty iff the zero vector is present, samples fit the cap and dimension,
// and the norm axioms hold on sample combinations.
std::vector<std::string> validate_banach(const SampledBanach& b);

struct BmParams {
  std::vector<double> r_values{1, 2, 3, 4};
  std::vector<cplx> s_values{1.0, -1.0, 2.0};
};

double bm_phi(double r, double max_norm, double combo_norm);

// The emboundment: points are the samples (labels v0, v1, ...) plus "inf";
// constants "zero" and "inf"; predicates P, S_<scalar>, and the tabulated
// phi_r / psi_{r,s} predicates together with their zero-substituted variants.
MetricStructure embound(const SampledBanach& b, const std::vector<cplx>& scalars,
                        const BmParams& bm = {});

// The generator list over the tabulated predicates of an embounded structure.
DistortionSystem bm_generators(const Signature& embounded_signature, const BmParams& bm = {});

// Unit vectors in `directions` evenly spaced directions (first two
// coordinates), scaled by e^{j/2} for |j| <= j_max, plus the zero vector.
SampledBanach radial_grid(std::size_t dim, Field field, NormKind norm, std::size_t directions,
                          int j_max, double radius_cap = 0.0);

SampledBanach apply_map(const SampledBanach& b, const Mat& a, NormKind target_norm,
                        std::vector<double> target_weights = {});

struct LinearCorrelation {
  Correlation correlation;
  double residual = 0.0;  // largest snapping distance in the embounded metric
};

// Pairs each sample x of b1 with the b2 sample nearest to A x, and each b2
// sample with the b1 sample whose image is nearest; infinity with infinity.
// Throws InputError when A is singular.
LinearCorrelation linear_map_correlation(const SampledBanach& b1, StructurePtr m1,
                                         const SampledBanach& b2, StructurePtr m2, const Mat& a);

double operator_norm(const Mat& a, const SampledBanach& from, const SampledBanach& to);
Mat inverse(const Mat& a);

struct Rebalanced {
  Mat map;
  double factor = 1.0;     // sqrt(|A^-1| / |A|)
  double norm = 0.0;       // |factor * A|
  double inv_norm = 0.0;   // |(factor * A)^-1|
};

Rebalanced rebalance(const Mat& a, const SampledBanach& from, const SampledBanach& to);

// Largest Lipschitz sum over the generators, from the declared predicate bounds.
double generator_modulus(const DistortionSystem& sys);

struct ForwardCheck {
  bool ok = true;
  std::size_t bad_cells = 0;
  std::size_t searches = 0;
  std::string message;
};

// Every correlation with BM distortion <= eps pairs zero with zero, infinity
// with infinity, and related nonzero samples satisfy 2|log(|a|/|b|)| <= eps + slack.
ForwardCheck check_bm_forward(const SampledBanach& b1, StructurePtr m1, const SampledBanach& b2,
                              StructurePtr m2, const DistortionSystem& sys, double eps,
                              double slack);

// Norm predicates kad<j>(x_0..x_{len-1}) = |sum lambda_i x_i| on the plain
// normed metric of the samples.
MetricStructure kadets_structure(const SampledBanach& b, const std::vector<std::vector<double>>& coeffs);

// Coefficient vectors of length <= max_len with dyadic entries of
// denominator <= 2^k, absolute sum 1, first entry positive.
std::vector<std::vector<double>> kadets_coefficients(std::size_t k = 3, std::size_t max_len = 2);

}  // namespace aiso
