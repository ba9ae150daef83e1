#include "anisotetra/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anisotetra/interp.hpp"

namespace anisotetra {

ErrorRatioResult error_ratio(const ScalarField& v, const Tetrahedron& t, int k, int m, double p,
                             const ErrorOptions& opts) {
  const Admissibility a = validate_p(k, m, p);
  if (!a.admissible) throw Error(ErrorKind::InadmissiblePC, a.reason);
  require_nondegenerate(t);

  ErrorRatioResult r;
  r.k = k;
  r.m = m;
  r.p = p;
  r.geometry = angles(t);

  SeminormSpec spec;
  spec.p = p;
  spec.weighted = opts.weighted;
  spec.quad_degree = opts.quad_degree;
  spec.sup_lattice = opts.sup_lattice;

  spec.m = m;
  const SeminormResult err = seminorm(residual(v, t, k), t, spec);
  spec.m = k + 1;
  const SeminormResult hi = seminorm(v, t, spec);

  const double hT = r.geometry.h_T();
  r.error = err.value;
  r.seminorm_hi = hi.value;
  r.bound_factor = std::pow(r.geometry.R_T / hT, m) * std::pow(hT, k + 1 - m);
  r.refinement_warning = err.refinement_warning || hi.refinement_warning;
  r.approximate = err.approximate || hi.approximate;
  r.indeterminate = r.seminorm_hi < 1e-14 * std::max(1.0, r.seminorm_hi);
  r.ratio = r.indeterminate ? 0.0 : r.error / (r.bound_factor * r.seminorm_hi);
  return r;
}

MatrixBoundChain matrix_bound_chain(const Tetrahedron& t, int k, int m) {
  const StandardPosition sp = standard_position(t);
  const TransformMatrices mats = matrices(sp);
  const Quality q = quality(t);
  const double hT = t.diameter();
  constexpr double slack = 1 + 1e-10;

  MatrixBoundChain c;
  c.norm_A = mats.norm_A;
  c.norm_A_inv = mats.norm_A_inv;
  c.t1t2_bound = 2.0 / (sp.t1 * sp.t2);
  c.R_bound = 2.0 * q.R_T / (3.0 * hT);
  c.matrix_factor = std::pow(c.norm_A, k + 1) * std::pow(c.norm_A_inv, m) * std::pow(hT, k + 1 - m);
  c.rt_factor = std::pow(2.0, k + 1) * std::pow(2.0 / 3.0, m) * std::pow(q.R_T / hT, m) *
                std::pow(hT, k + 1 - m);
  c.holds = c.norm_A <= 2.0 * slack && c.norm_A_inv <= c.t1t2_bound * slack &&
            c.t1t2_bound <= q.H_T / (3.0 * hT) * slack && q.H_T / (3.0 * hT) <= c.R_bound * slack &&
            c.matrix_factor <= c.rt_factor * slack;
  return c;
}

std::array<double, 3> AlphaPattern::at(int level) const {
  std::array<double, 3> a{};
  for (std::size_t i = 0; i < 3; ++i) a[i] = is_eps[i] ? std::ldexp(1.0, -level) : fixed[i];
  return a;
}

AlphaPattern parse_alpha_pattern(const std::string& text) {
  AlphaPattern pat;
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (i >= 3) throw Error(ErrorKind::ParseError, "alphas: expected three entries, got '" + text + "'");
    if (item == "eps") {
      pat.is_eps[i] = true;
    } else {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size() || !(v > 0.0) || v > 1.0)
        throw Error(ErrorKind::ParseError,
                    "alphas: entry '" + item + "' must be 'eps' or a number in (0, 1]");
      pat.is_eps[i] = false;
      pat.fixed[i] = v;
    }
    ++i;
  }
  if (i != 3) throw Error(ErrorKind::ParseError, "alphas: expected three entries, got '" + text + "'");
  return pat;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

SweepResult squeeze_sweep(int k, int m, double p, const AlphaPattern& pattern, int levels,
                          TetraType type, std::uint64_t seed, const ErrorOptions& opts) {
  const Admissibility a = validate_p(k, m, p);
  if (!a.admissible) throw Error(ErrorKind::InadmissiblePC, a.reason);
  if (levels < 1) throw Error(ErrorKind::ParseError, "sweep needs at least one level");

  SweepResult res;
  res.k = k;
  res.m = m;
  res.p = p;
  res.type = type;

  std::vector<Tetrahedron> elements;
  std::vector<std::vector<ScalarField>> corpora;
  for (int l = 0; l < levels; ++l) {
    elements.push_back(squeezed_reference(pattern.at(l), type));
    corpora.push_back(field_corpus(k, elements.back(), seed));
  }
  const std::size_t nf = corpora.front().size();
  std::vector<ErrorRatioResult> cells(static_cast<std::size_t>(levels) * nf);
  parallel_for(cells.size(), [&](std::size_t i) {
    const std::size_t l = i / nf, f = i % nf;
    cells[i] = error_ratio(corpora[l][f], elements[l], k, m, p, opts);
  });

  std::vector<double> xs, ys;
  for (int l = 0; l < levels; ++l) {
    SweepRow row;
    row.level = l;
    row.alpha = pattern.at(l);
    const double amax = *std::max_element(row.alpha.begin(), row.alpha.end());
    for (std::size_t f = 0; f < nf; ++f) {
      const ErrorRatioResult& c = cells[static_cast<std::size_t>(l) * nf + f];
      row.R_T = c.geometry.R_T;
      row.h_T = c.geometry.h_T();
      row.refinement_warning = row.refinement_warning || c.refinement_warning;
      if (c.indeterminate) {
        ++row.indeterminate;
        continue;
      }
      if (c.ratio > row.max_ratio) {
        row.max_ratio = c.ratio;
        row.argmax_field = corpora[static_cast<std::size_t>(l)][f].name();
      }
      row.max_squeeze = std::max(row.max_squeeze, c.error / c.seminorm_hi / std::pow(amax, k + 1 - m));
    }
    xs.push_back(l);
    ys.push_back(std::log2(row.max_ratio));
    res.rows.push_back(row);
  }
  res.max_ratio = 0;
  res.min_ratio = res.rows.front().max_ratio;
  for (const auto& row : res.rows) {
    res.max_ratio = std::max(res.max_ratio, row.max_ratio);
    res.min_ratio = std::min(res.min_ratio, row.max_ratio);
  }
  res.variation = res.min_ratio > 0 ? res.max_ratio / res.min_ratio : kInfinity;
  res.slope = fit_slope(xs, ys);
  return res;
}

EquivalenceReport equivalence_sample(std::size_t n, const TetraGenSpec& gen) {
  if (n < 1) throw Error(ErrorKind::GenerationFailure, "equivalence sample needs n >= 1");
  struct Cell {
    double ratio;
    double margin;
    Tetrahedron t;
  };
  std::vector<Cell> cells(n);
  parallel_for(n, [&](std::size_t i) {
    const Tetrahedron t = generate_one(gen, i);
    const Quality q = quality(t);
    const double lo = (q.R_T - 0.5 * q.H_T) / q.H_T;
    const double hi = (2.0 * q.H_T - q.R_T) / q.H_T;
    cells[i] = {q.R_T / q.H_T, std::min(lo, hi), t};
  });
  EquivalenceReport r;
  r.n = n;
  r.min_ratio = r.max_ratio = cells.front().ratio;
  r.worst_margin = cells.front().margin;
  r.extremal = cells.front().t;
  for (const auto& c : cells) {
    r.min_ratio = std::min(r.min_ratio, c.ratio);
    r.max_ratio = std::max(r.max_ratio, c.ratio);
    if (c.margin < -1e-9) ++r.violations;
    if (c.margin < r.worst_margin) {
      r.worst_margin = c.margin;
      r.extremal = c.t;
    }
  }
  return r;
}

namespace {

// Generates and checks n samples; sample 0 is drawn first so an infeasible
// family fails after one retry budget instead of n of them.
void run_direction(MacDirection& dir, std::size_t n, const TetraGenSpec& gen,
                   const std::function<bool(const Tetrahedron&, double&, double&)>& check,
                   double* max_aux = nullptr) {
  dir.requested = n;
  try {
    (void)generate_one(gen, 0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::GenerationFailure) throw;
    dir.generation_failed = true;
    dir.failure = e.what();
    return;
  }
  struct Cell {
    bool ok = true;
    double value = 0;
    double aux = 0;
    Tetrahedron t;
  };
  std::vector<Cell> cells(n);
  try {
    parallel_for(n, [&](std::size_t i) {
      Cell& c = cells[i];
      c.t = generate_one(gen, i);
      c.ok = check(c.t, c.value, c.aux);
    });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::GenerationFailure) throw;
    dir.generation_failed = true;
    dir.failure = e.what();
    return;
  }
  for (const auto& c : cells) {
    ++dir.checked;
    dir.max_value = std::max(dir.max_value, c.value);
    if (max_aux) *max_aux = std::max(*max_aux, c.aux);
    if (!c.ok) {
      ++dir.violations;
      if (dir.counterexamples.size() < 5) dir.counterexamples.push_back(c.t);
    }
  }
}

}  // namespace

MacReport mac_experiment(std::size_t n, double gamma_max, std::uint64_t seed) {
  validate_gamma_max(gamma_max);
  MacReport rep;
  rep.constants = mac_bound_constants(gamma_max);
  rep.forward_bound_H = rep.constants.D;
  rep.forward_bound_R = 2.0 * rep.constants.D;
  rep.reverse_bound_R = rep.constants.D;
  rep.converse_gamma = converse_gamma_max(rep.reverse_bound_R);

  TetraGenSpec fwd;
  fwd.family = Family::MacConstrained;
  fwd.gamma_max = gamma_max;
  fwd.seed = seed;
  run_direction(
      rep.forward, n, fwd,
      [&rep](const Tetrahedron& t, double& value, double& r_ratio) {
        const Quality q = quality(t);
        const double hT = t.diameter();
        value = q.H_T / hT;
        r_ratio = q.R_T / hT;
        return value <= rep.forward_bound_H * (1 + 1e-9) &&
               r_ratio <= rep.forward_bound_R * (1 + 1e-9);
      },
      &rep.max_R_forward);

  TetraGenSpec rev;
  rev.family = Family::QualityBounded;
  rev.r_bound = rep.reverse_bound_R;
  rev.seed = seed ^ 0x5bd1e995ULL;
  const double bound = rep.reverse_bound_R;
  run_direction(rep.reverse, n, rev, [bound](const Tetrahedron& t, double& value, double&) {
    const GeometryReport g = angles(t);
    value = g.max_angle;
    const double gamma = converse_gamma_max(bound, classify(t).kind);
    return mac_check(g, gamma);
  });
  return rep;
}

ConvergenceResult convergence_study(const ScalarField& v, const Tetrahedron& t0, int k, int m,
                                    double p, int levels, const ErrorOptions& opts) {
  if (levels < 3) throw Error(ErrorKind::ParseError, "convergence study needs levels >= 3");
  const Admissibility a = validate_p(k, m, p);
  if (!a.admissible) throw Error(ErrorKind::InadmissiblePC, a.reason);
  ConvergenceResult res;
  res.k = k;
  res.m = m;
  res.p = p;
  res.expected_order = k + 1 - m;
  std::vector<ErrorRatioResult> cells(static_cast<std::size_t>(levels));
  parallel_for(cells.size(), [&](std::size_t l) {
    const double s = std::ldexp(1.0, -static_cast<int>(l));
    Tetrahedron t = t0;
    for (std::size_t i = 1; i < 4; ++i) t.v[i] = t0.v[0] + s * (t0.v[i] - t0.v[0]);
    cells[l] = error_ratio(v, t, k, m, p, opts);
  });
  res.exact = true;
  for (int l = 0; l < levels; ++l) {
    const ErrorRatioResult& c = cells[static_cast<std::size_t>(l)];
    ConvergenceLevel lv;
    lv.level = l;
    lv.h_T = c.geometry.h_T();
    lv.error = c.error;
    lv.seminorm_hi = c.seminorm_hi;
    lv.normalized = c.indeterminate ? 0.0 : c.error / c.seminorm_hi;
    if (l > 0 && lv.normalized > 0 && res.levels.back().normalized > 0)
      lv.order = std::log2(res.levels.back().normalized / lv.normalized);
    res.exact = res.exact && c.error < 1e-12;
    res.levels.push_back(lv);
  }
  res.final_order = res.exact ? 0.0 : res.levels.back().order;
  return res;
}

}  // namespace anisotetra
