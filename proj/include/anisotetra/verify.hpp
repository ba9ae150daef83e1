#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "anisotetra/field.hpp"
#include "anisotetra/geom.hpp"
#include "anisotetra/quad.hpp"

namespace anisotetra {

// ---------------------------------------------------------------------------
// Random tetrahedra

enum class Family {
  UniformBall,        // four points uniform in the unit ball
  Needle,             // one long edge, the other three vertices within eps
  Sliver,             // flattened regular tetrahedron, a dihedral angle pi - eps
  SqueezedReference,  // diag(alpha) applied to T-hat or T-tilde
  MacConstrained,     // rejection sampling: mac_check(t, gamma_max)
  QualityBounded,     // rejection sampling: R_T / h_T <= r_bound
  Mixed,              // cycles uniform, needle, sliver by sample index
};

const char* to_string(Family f);
Family parse_family(const std::string& name);

struct TetraGenSpec {
  Family family = Family::UniformBall;
  std::uint64_t seed = 0;
  /// Needle / sliver parameter. When eps_min > 0 each sample draws eps
  /// log-uniformly from [eps_min, eps].
  double eps = 1e-3;
  double eps_min = 0;
  std::array<double, 3> alpha{1, 1, 1};
  TetraType type = TetraType::Type1;
  double gamma_max = 1.5707963267948966;
  double r_bound = 0;
  /// Apply a random rotation, translation and scale to each sample.
  bool random_motion = true;
  int max_retries = 10000;
};

/// Counter-based generator for sample `index`: independent of evaluation
/// order, so parallel and serial runs see identical streams.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

/// Sample `index` of the family. Throws GenerationFailure when rejection
/// sampling exhausts max_retries, with the acceptance statistics.
Tetrahedron generate_one(const TetraGenSpec& gen, std::uint64_t index);
std::vector<Tetrahedron> generate(const TetraGenSpec& gen, std::size_t n);

Tetrahedron needle(double eps);
Tetrahedron sliver(double eps);
Tetrahedron squeezed_reference(const std::array<double, 3>& alpha, TetraType type);

/// Default worker count for parallel_for; 0 means hardware concurrency.
void set_worker_threads(unsigned n);
unsigned worker_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Each index is visited once; callers store results by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

// ---------------------------------------------------------------------------
// Field corpus

/// Fixed 20-field library for degree k on element t: smooth closed forms,
/// rational functions without poles near the unit cube, random polynomials of
/// degree k + 2, x^{k+1}, and a bubble vanishing on Sigma^k(t).
std::vector<ScalarField> field_corpus(int k, const Tetrahedron& t, std::uint64_t seed = 20240607);

/// Random polynomial with coefficients uniform in [-1, 1].
Polynomial3 random_polynomial(int degree, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Interpolation error against the anisotropic bound

struct ErrorRatioResult {
  int k = 1, m = 0;
  double p = 2;
  double error = 0;         // |v - I v|_{m,p,T}
  double seminorm_hi = 0;   // |v|_{k+1,p,T}
  double bound_factor = 0;  // (R_T / h_T)^m h_T^{k+1-m}
  double ratio = 0;         // error / (bound_factor * seminorm_hi)
  bool indeterminate = false;
  bool refinement_warning = false;
  bool approximate = false;
  GeometryReport geometry;
};

struct ErrorOptions {
  int quad_degree = 0;
  int sup_lattice = 40;
  bool weighted = true;
};

/// Throws InadmissiblePC, DegenerateTetrahedron, DerivativeUnavailable.
ErrorRatioResult error_ratio(const ScalarField& v, const Tetrahedron& t, int k, int m, double p,
                             const ErrorOptions& opts = {});

struct MatrixBoundChain {
  double norm_A = 0, norm_A_inv = 0;
  double t1t2_bound = 0;   // 2 / (t1 t2)
  double R_bound = 0;      // 2 R_T / (3 h_T)
  double matrix_factor = 0;  // ||A||^{k+1} ||A^-1||^m h_T^{k+1-m}
  double rt_factor = 0;      // 2^{k+1} (2/3)^m (R_T / h_T)^m h_T^{k+1-m}
  bool holds = false;
};

/// ||A|| <= 2, ||A^-1|| <= 2/(t1 t2) = H_T/(3 h_T) <= 2 R_T/(3 h_T), and the
/// resulting factor comparison, each with relative slack 1e-10.
MatrixBoundChain matrix_bound_chain(const Tetrahedron& t, int k, int m);

// ---------------------------------------------------------------------------
// Squeeze sweep

struct SweepRow {
  int level = 0;
  std::array<double, 3> alpha{};
  double R_T = 0, h_T = 0;
  double max_ratio = 0;     // max over corpus of error / (bound_factor |v|_{k+1,p})
  double max_squeeze = 0;   // max over corpus of (|u|_m / |u|_{k+1}) / (max alpha)^{k+1-m}
  std::string argmax_field;
  int indeterminate = 0;
  bool refinement_warning = false;
};

struct SweepResult {
  int k = 1, m = 0;
  double p = 2;
  TetraType type = TetraType::Type1;
  std::vector<SweepRow> rows;
  double max_ratio = 0;
  double min_ratio = 0;
  double variation = 0;  // max / min of max_ratio across rows
  double slope = 0;      // least-squares slope of log2(max_ratio) against level
};

/// alpha for level l is pattern with "eps" entries replaced by 2^-l.
struct AlphaPattern {
  std::array<bool, 3> is_eps{false, true, true};
  std::array<double, 3> fixed{1, 1, 1};
  std::array<double, 3> at(int level) const;
};

AlphaPattern parse_alpha_pattern(const std::string& text);

SweepResult squeeze_sweep(int k, int m, double p, const AlphaPattern& pattern, int levels,
                          TetraType type = TetraType::Type1, std::uint64_t seed = 20240607,
                          const ErrorOptions& opts = {});

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// R_T / H_T equivalence sampling

struct EquivalenceReport {
  std::size_t n = 0;
  std::size_t violations = 0;
  double min_ratio = 0;  // min R_T / H_T
  double max_ratio = 0;
  double worst_margin = 0;  // most negative slack, relative to H_T
  Tetrahedron extremal;
};

EquivalenceReport equivalence_sample(std::size_t n, const TetraGenSpec& gen);

// ---------------------------------------------------------------------------
// Maximum angle condition

struct MacDirection {
  std::size_t requested = 0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_value = 0;  // forward: max H_T / h_T; reverse: max angle
  bool generation_failed = false;
  std::string failure;
  std::vector<Tetrahedron> counterexamples;  // first few, verbatim
};

struct MacReport {
  MacConstants constants;
  double forward_bound_H = 0;  // 6 / (C0 C1^2)
  double forward_bound_R = 0;  // twice the above
  double reverse_bound_R = 0;  // R_T / h_T threshold for the reverse check
  double converse_gamma = 0;   // angle guaranteed under reverse_bound_R
  double max_R_forward = 0;
  MacDirection forward;
  MacDirection reverse;

  bool passed() const {
    return !forward.generation_failed && !reverse.generation_failed && forward.violations == 0 &&
           reverse.violations == 0;
  }
};

/// Forward: samples satisfying the MAC obey H_T / h_T <= D and R_T / h_T <= 2D.
/// Reverse: samples with R_T / h_T <= D satisfy the MAC with the converse angle.
MacReport mac_experiment(std::size_t n, double gamma_max, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Convergence

struct ConvergenceLevel {
  int level = 0;
  double h_T = 0;
  double error = 0;
  double seminorm_hi = 0;
  double normalized = 0;  // error / |v|_{k+1,p,T}
  double order = 0;       // log2 of the normalized ratio to the previous level
};

struct ConvergenceResult {
  int k = 1, m = 0;
  double p = 2;
  double expected_order = 0;
  std::vector<ConvergenceLevel> levels;
  bool exact = false;  // all errors below 1e-12 (v in P_k)
  double final_order = 0;
};

/// Shrinks t0 by 2^-l about its first vertex for l = 0..levels-1.
ConvergenceResult convergence_study(const ScalarField& v, const Tetrahedron& t0, int k, int m,
                                    double p, int levels, const ErrorOptions& opts = {});

}  // namespace anisotetra
