#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "anisotetra/expression.hpp"
#include "anisotetra/verify.hpp"

namespace anisotetra {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

Point3 in_ball(std::mt19937_64& rng) {
  for (;;) {
    Point3 p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    if (p.squaredNorm() <= 1.0) return p;
  }
}

Tetrahedron random_motion(const Tetrahedron& t, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
  q.normalize();
  const Matrix3 R = q.toRotationMatrix();
  const Point3 shift(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
  const double scale = log_uniform(rng, 0.5, 2.0);
  Tetrahedron out;
  for (std::size_t i = 0; i < 4; ++i) out.v[i] = scale * (R * t.v[i]) + shift;
  return out;
}

bool nondegenerate(const Tetrahedron& t) {
  try {
    require_nondegenerate(t);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Tetrahedron uniform_ball(std::mt19937_64& rng) {
  for (;;) {
    Tetrahedron t{{in_ball(rng), in_ball(rng), in_ball(rng), in_ball(rng)}};
    if (nondegenerate(t)) return t;
  }
}

Tetrahedron random_needle(double eps, std::mt19937_64& rng) {
  const double a1 = uniform(rng, 0, 0.5), a2 = uniform(rng, 0, 0.5), b2 = uniform(rng, 0, 0.5);
  return {{Point3(0, 0, 0), Point3(1, 0, 0), Point3(eps * a1, eps, 0),
           Point3(eps * a2, eps * b2, eps)}};
}

// Proposal for rejection sampling: a perturbed regular tetrahedron or four
// points in the ball, alternating by attempt.
Tetrahedron proposal(std::mt19937_64& rng, int attempt) {
  if (attempt % 2 == 1) return uniform_ball(rng);
  const double rho = uniform(rng, 0.0, 0.6);
  Tetrahedron t = Tetrahedron::regular();
  for (auto& v : t.v) v += rho * in_ball(rng);
  return t;
}

double eps_for(const TetraGenSpec& gen, std::mt19937_64& rng, double lo_default, double hi) {
  if (gen.eps_min > 0) return log_uniform(rng, gen.eps_min, gen.eps);
  if (lo_default > 0) return log_uniform(rng, lo_default, hi);
  return gen.eps;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::UniformBall: return "uniform";
    case Family::Needle: return "needle";
    case Family::Sliver: return "sliver";
    case Family::SqueezedReference: return "squeezed";
    case Family::MacConstrained: return "mac";
    case Family::QualityBounded: return "quality";
    case Family::Mixed: return "mixed";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::UniformBall, Family::Needle, Family::Sliver, Family::SqueezedReference,
                   Family::MacConstrained, Family::QualityBounded, Family::Mixed})
    if (name == to_string(f)) return f;
  throw Error(ErrorKind::ParseError, "unknown tetrahedron family '" + name + "'");
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t s = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(seq);
}

Tetrahedron needle(double eps) {
  return {{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, eps, 0), Point3(0, 0, eps)}};
}

Tetrahedron sliver(double eps) {
  const double h = std::tan(eps / 2) / 2;
  return {{Point3(1, 0, h), Point3(-1, 0, h), Point3(0, 1, -h), Point3(0, -1, -h)}};
}

Tetrahedron squeezed_reference(const std::array<double, 3>& alpha, TetraType type) {
  Tetrahedron t = reference_for(type);
  for (auto& v : t.v) v = Point3(alpha[0] * v[0], alpha[1] * v[1], alpha[2] * v[2]);
  return t;
}

Tetrahedron generate_one(const TetraGenSpec& gen, std::uint64_t index) {
  std::mt19937_64 rng = sample_rng(gen.seed, index);
  Tetrahedron t;
  switch (gen.family) {
    case Family::UniformBall:
      return uniform_ball(rng);
    case Family::Needle:
      t = random_needle(eps_for(gen, rng, 0, 0), rng);
      break;
    case Family::Sliver:
      t = sliver(eps_for(gen, rng, 0, 0));
      break;
    case Family::SqueezedReference:
      t = squeezed_reference(gen.alpha, gen.type);
      break;
    case Family::Mixed:
      switch (index % 3) {
        case 0: return uniform_ball(rng);
        case 1: t = random_needle(eps_for(gen, rng, 1e-6, 1.0), rng); break;
        default: t = sliver(eps_for(gen, rng, 1e-6, 1.0)); break;
      }
      break;
    case Family::MacConstrained:
    case Family::QualityBounded: {
      const bool mac = gen.family == Family::MacConstrained;
      if (mac) validate_gamma_max(gen.gamma_max);
      int attempt = 0;
      for (; attempt < gen.max_retries; ++attempt) {
        const Tetrahedron c = proposal(rng, attempt);
        if (!nondegenerate(c)) continue;
        const bool ok = mac ? mac_check(c, gen.gamma_max)
                            : quality(c).R_T / c.diameter() <= gen.r_bound;
        if (ok) {
          t = c;
          break;
        }
      }
      if (attempt == gen.max_retries) {
        std::ostringstream os;
        os.precision(17);
        os << to_string(gen.family) << " generation accepted 0 of " << gen.max_retries
           << " proposals for sample " << index << " (";
        if (mac)
          os << "gamma_max = " << gen.gamma_max;
        else
          os << "R_T/h_T <= " << gen.r_bound;
        os << ")";
        throw Error(ErrorKind::GenerationFailure, os.str());
      }
      break;
    }
  }
  if (gen.random_motion) t = random_motion(t, rng);
  if (!nondegenerate(t)) {
    std::ostringstream os;
    os << to_string(gen.family) << " sample " << index << " is degenerate (eps = " << gen.eps << ")";
    throw Error(ErrorKind::GenerationFailure, os.str());
  }
  return t;
}

std::vector<Tetrahedron> generate(const TetraGenSpec& gen, std::size_t n) {
  std::vector<Tetrahedron> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = generate_one(gen, i); });
  return out;
}

namespace {
std::atomic<unsigned> g_workers{0};
}  // namespace

void set_worker_threads(unsigned n) { g_workers = n; }

unsigned worker_threads() {
  const unsigned n = g_workers;
  return n ? n : std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
  if (threads == 0) threads = worker_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::size_t> error_index(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          if (i < error_index[w]) {
            error_index[w] = i;
            errors[w] = std::current_exception();
          }
        }
      }
    });
  for (auto& th : pool) th.join();
  // Report the failure with the lowest index, as a serial run would.
  std::size_t best = n;
  std::exception_ptr first;
  for (unsigned w = 0; w < threads; ++w)
    if (errors[w] && error_index[w] < best) {
      best = error_index[w];
      first = errors[w];
    }
  if (first) std::rethrow_exception(first);
}

Polynomial3 random_polynomial(int degree, std::mt19937_64& rng) {
  Polynomial3 p(degree);
  for (auto& c : p.coeffs()) c = uniform(rng, -1, 1);
  return p;
}

std::vector<ScalarField> field_corpus(int k, const Tetrahedron& t, std::uint64_t seed) {
  static const char* const closed_forms[] = {
      "sin(x + 2*y + 3*z)",
      "cos(2*x - y + z)",
      "exp(x + y/2 - z)",
      "exp(-(x^2 + y^2 + z^2))",
      "1/(3 + x + y + z)",
      "1/(1 + x^2 + 2*y^2 + z^2)",
      "sin(pi*x)*cos(pi*y)*exp(z)",
      "log(2 + x + y + z)",
      "sqrt(1 + x^2 + y^2 + z^2)",
      "x*exp(y)*sin(z + 1)",
      "sin(3*x)*sin(3*y)*sin(3*z)",
      "exp(x)*cos(y - z)",
  };
  std::vector<ScalarField> out;
  for (const char* text : closed_forms) out.push_back(expression_field(Expression::parse(text), text));
  for (int i = 0; i < 6; ++i) {
    std::mt19937_64 rng = sample_rng(seed, static_cast<std::uint64_t>(i));
    out.push_back(ScalarField::from_polynomial(random_polynomial(k + 2, rng),
                                               "random P" + std::to_string(k + 2) + " #" + std::to_string(i)));
  }
  out.push_back(ScalarField::from_polynomial(Polynomial3::monomial({{k + 1, 0, 0}}),
                                             "x^" + std::to_string(k + 1)));
  // sin(k pi xi_1) sin(k pi xi_2) sin(k pi xi_3) in reference coordinates
  // vanishes on every node of Sigma^k(t).
  std::ostringstream bubble;
  bubble << "sin(" << k << "*pi*x)*sin(" << k << "*pi*y)*sin(" << k << "*pi*z)";
  out.push_back(expression_field(Expression::parse(bubble.str()), "nodal bubble")
                    .pulled_through(t.v[0], t.jacobian()));
  return out;
}

}  // namespace anisotetra
