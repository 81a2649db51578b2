#include "rearr/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "ineq_detail.hpp"
#include "rearr/error.hpp"
#include "rearr/quadrature.hpp"

namespace rearr {

namespace detail {

Rearranged rearrange_with_gradient(const GridFunction& f) {
  Rearranged r;
  r.f_star = decreasing_rearrangement(f);
  r.grad = gradient_modulus(f);
  r.grad_star = decreasing_rearrangement(r.grad.as_function());
  return r;
}

std::vector<std::size_t> cell_piece_index(const GridFunction& f, const StepFunction& f_star) {
  const auto v = f_star.values();
  std::vector<std::size_t> out(f.size(), 0);
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double a = std::fabs(f.values[c]);
    const auto it = std::lower_bound(v.begin(), v.end(), a, [](double x, double y) { return x > y; });
    require(it != v.end() && *it == a, "cell_piece_index: rearrangement does not match function");
    out[c] = static_cast<std::size_t>(it - v.begin());
  }
  return out;
}

std::vector<double> level_perimeters(const GridFunction& f, const StepFunction& f_star) {
  const MeasureSpace& space = *f.space;
  const std::size_t m = f_star.pieces();
  const auto piece = cell_piece_index(f, f_star);
  std::vector<std::vector<std::size_t>> members(m);
  for (std::size_t c = 0; c < f.size(); ++c) members[piece[c]].push_back(c);
  std::vector<double> out(m, 0.0);
  double per = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c : members[i]) {
      for (int d = 0; d < space.dimension(); ++d) {
        for (int dir : {-1, 1}) {
          const std::size_t nb = space.neighbor(c, d, dir);
          if (nb == MeasureSpace::npos) continue;
          const double fw = dir > 0 ? space.face_weight(c, d) : space.face_weight(nb, d);
          per += piece[nb] < i ? -fw : (piece[nb] == i ? 0.0 : fw);
        }
      }
    }
    out[i] = per;
  }
  return out;
}

double geometric_gl(const std::function<double(double)>& f, double a, double b) {
  require(a > 0.0 && b >= a, "geometric_gl: need 0 < a <= b");
  if (b == a) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::log2(b / a))));
  if (panels == 1) {
    const double k[2] = {a, b};
    return quad::gauss_panels(f, k);
  }
  auto knots = quad::log_space(a, b, panels + 1);
  knots.front() = a;
  knots.back() = b;
  return quad::gauss_panels(f, knots);
}

double explicit_slack(const MeasureSpace& space, const VerifyOptions& opt, double lo, double hi) {
  return opt.slack + partition_defect(space, lo, hi);
}

void require_profile_covers(const MeasureSpace& space, const Profile& profile, const char* who) {
  require(profile.mass() >= space.total_mass() * (1.0 - 1e-12),
          std::string(who) + ": profile mass is smaller than the space mass");
}

VerificationReport make_report(const char* id, const VerifyOptions& opt, const std::string& profile_label) {
  VerificationReport r;
  r.id = id;
  r.function_label = opt.label;
  r.profile_label = profile_label;
  r.metadata["nodes"] = opt.grid.nodes;
  r.metadata["t_min_fraction"] = opt.grid.t_min_fraction;
  r.metadata["resolution_cells"] = opt.resolution_cells;
  return r;
}

}  // namespace detail

using detail::make_report;

std::vector<double> verification_grid(const MeasureSpace& space, const VerifyOptions& opt, double upper) {
  const double M = space.total_mass();
  const auto w = space.weights();
  const double wmax = *std::max_element(w.begin(), w.end());
  const double lo = std::max(M * opt.grid.t_min_fraction, opt.resolution_cells * wmax);
  const double hi = std::min(upper, M - lo);
  require(lo < hi, "verification_grid: empty range after the resolution floor");
  return t_grid_range(lo, hi, opt.grid.nodes);
}

double partition_defect(const MeasureSpace& space, double lo, double hi) {
  if (space.dimension() != 1) return 0.0;
  const auto b = space.boundaries();
  const double M = space.total_mass();
  const std::size_t m = space.size();
  double worst = 0.0;
  double s = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    s += space.weight(j - 1);
    const bool in_range = (s >= lo && s <= hi) || (M - s >= lo && M - s <= hi);
    if (!in_range) continue;
    const double c0 = 0.5 * (b[j - 1] + b[j]);
    const double c1 = 0.5 * (b[j] + b[j + 1]);
    const double rho = space.mass_between(c0, c1) / (c1 - c0);
    worst = std::max(worst, space.face_weight(j - 1, 0) / rho - 1.0);
  }
  return worst;
}

Phi Phi::from_profile(const Profile& profile) {
  auto p = std::make_shared<const Profile>(profile);
  return {"t/" + profile.label(), [p](double t) { return t / (*p)(t); }};
}

Phi Phi::power(double exponent, double coefficient) {
  return {std::to_string(coefficient) + " t^" + std::to_string(exponent),
          [exponent, coefficient](double t) { return coefficient * std::pow(t, exponent); }};
}

VerificationReport verify_oscillation(const GridFunction& f, const Profile& profile, const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  detail::require_profile_covers(space, profile, "verify_oscillation");
  const auto ts = verification_grid(space, opt);
  const auto R = detail::rearrange_with_gradient(f);
  const PiecewiseAverage ga(R.grad_star);
  auto r = make_report("metricas", opt, profile.label());
  r.t = ts;
  for (double t : ts) {
    const double phi = t / profile(t);
    r.lhs.push_back(R.f_star.oscillation(t));
    r.rhs.push_back(phi * ga(t));
  }
  finalize_inequality(r, 1.0, detail::explicit_slack(space, opt, ts.front(), ts.back()));
  return r;
}

VerificationReport verify_mazya_talenti(const GridFunction& f, const Profile& profile, const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  detail::require_profile_covers(space, profile, "verify_mazya_talenti");
  const auto ts = verification_grid(space, opt);
  const StepFunction fs = decreasing_rearrangement(f);
  const auto per = detail::level_perimeters(f, fs);
  const auto b = fs.breaks();
  const auto v = fs.values();
  // W(t) = ∫_{|f| > f*(t)} |∇f| in discrete coarea form: Σ_{i < j} Per(pieces <= i) (v_i - v_{i+1}).
  std::vector<double> W(v.size() + 1, 0.0);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) W[i + 1] = W[i] + per[i] * (v[i] - v[i + 1]);
  auto W_at = [&](double t) { return W[fs.piece_at(t)]; };
  auto r = make_report("maztal", opt, profile.label());
  std::size_t j = 1;
  while (j < v.size() && b[j] <= ts.front()) ++j;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double a = ts[i];
    const double c = ts[i + 1];
    const double dt = c - a;
    double jumps = 0.0;
    for (; j < v.size() && b[j] <= c; ++j)
      if (b[j] > a) jumps += profile(b[j]) * (v[j - 1] - v[j]);
    r.t.push_back(0.5 * (a + c));
    r.lhs.push_back(jumps / dt);
    r.rhs.push_back((W_at(c) - W_at(a)) / dt);
  }
  finalize_inequality(r, 1.0, detail::explicit_slack(space, opt, ts.front(), ts.back()));
  return r;
}

VerificationReport verify_polya_szego(const GridFunction& f, const Profile& profile, const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  detail::require_profile_covers(space, profile, "verify_polya_szego");
  const auto ts = verification_grid(space, opt);
  const auto R = detail::rearrange_with_gradient(f);
  const auto b = R.f_star.breaks();
  const auto v = R.f_star.values();
  std::vector<std::pair<double, double>> segments;  // (height, length)
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (b[j] < ts.front() || b[j] > ts.back()) continue;
    const double m0 = 0.5 * (b[j - 1] + b[j]);
    const double m1 = 0.5 * (b[j] + b[j + 1]);
    segments.emplace_back(profile(b[j]) * (v[j - 1] - v[j]) / (m1 - m0), m1 - m0);
  }
  std::stable_sort(segments.begin(), segments.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<double> lengths;
  std::vector<double> heights;
  for (const auto& [h, len] : segments) {
    heights.push_back(h);
    lengths.push_back(len);
  }
  const StepFunction product = StepFunction::from_lengths(lengths, heights);
  auto r = make_report("polzgGG", opt, profile.label());
  r.t = ts;
  for (double t : ts) {
    r.lhs.push_back(product.integral(t));
    r.rhs.push_back(R.grad_star.integral(t));
  }
  r.metadata["mesh"] = "piece_midpoints";
  finalize_inequality(r, 1.0, detail::explicit_slack(space, opt, ts.front(), ts.back()));
  return r;
}

VerificationReport verify_bobkov_houdre(const GridFunction& f, const Profile& profile, const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  detail::require_profile_covers(space, profile, "verify_bobkov_houdre");
  const StepFunction fs = decreasing_rearrangement(f);
  const auto b = fs.breaks();
  const auto v = fs.values();
  double lhs = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double next = j + 1 < v.size() ? v[j + 1] : 0.0;
    const double t = std::min(b[j + 1], profile.mass());
    lhs += (v[j] - next) * profile(t);
  }
  auto r = make_report("gagliardoNBH", opt, profile.label());
  r.t = {space.total_mass()};
  r.lhs = {lhs};
  r.rhs = {gradient_modulus(f).lp_norm(1.0)};
  const auto ts = verification_grid(space, opt);
  finalize_inequality(r, 1.0, detail::explicit_slack(space, opt, ts.front(), ts.back()));
  return r;
}

VerificationReport verify_coulhon(const GridFunction& f, const Phi& phi, double p, const VerifyOptions& opt) {
  require(p >= 1.0 && std::isfinite(p), "verify_coulhon: p in [1, inf)");
  const double supp = support_measure(f);
  const auto w = f.space->weights();
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) s += w[c] * std::pow(std::fabs(f.values[c]), p);
  auto r = make_report("coulhon", opt, phi.label);
  r.t = {supp};
  r.lhs = {std::pow(s, 1.0 / p)};
  r.rhs = {supp > 0.0 ? phi.eval(supp) * gradient_modulus(f).lp_norm(p) : 0.0};
  r.metadata["p"] = p;
  finalize_inequality(r, std::nullopt);
  return r;
}

double coulhon_pointwise_constant(double p) {
  require(p >= 1.0 && std::isfinite(p), "coulhon_pointwise_constant: p in [1, inf)");
  const double k = std::ceil(p) - 1.0;
  return std::pow(2.0, (k + 1.0) / p - 1.0);
}

VerificationReport verify_coulhon_pointwise(const GridFunction& f, const Phi& phi, double p, const VerifyOptions& opt) {
  const double c = coulhon_pointwise_constant(p);
  const MeasureSpace& space = *f.space;
  const auto ts = verification_grid(space, opt);
  const auto R = detail::rearrange_with_gradient(f);
  auto r = make_report("norma", opt, phi.label);
  r.t = ts;
  if (p == 1.0) {
    const PiecewiseAverage ga(R.grad_star);
    for (double t : ts) {
      r.lhs.push_back(R.f_star.oscillation(t));
      r.rhs.push_back(c * phi.eval(t) * ga(t));
    }
  } else {
    const StepFunction fp = R.f_star.powered(p);
    const PiecewiseAverage gp(R.grad_star.powered(p));
    for (double t : ts) {
      const double fs = R.f_star(t);
      const double osc = fp.oscillation(t);
      const double lhs = fs > 0.0 ? fs * std::expm1(std::log1p(osc / std::pow(fs, p)) / p) : std::pow(osc, 1.0 / p);
      r.lhs.push_back(lhs);
      r.rhs.push_back(c * phi.eval(t) * std::pow(gp(t), 1.0 / p));
    }
  }
  r.metadata["p"] = p;
  finalize_inequality(r, c, detail::explicit_slack(space, opt, ts.front(), ts.back()));
  return r;
}

VerificationReport truncation_identity_check(const GridFunction& f, std::span<const double> breakpoints,
                                             const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  const double M = space.total_mass();
  const StepFunction fs = decreasing_rearrangement(f);
  const auto b = fs.breaks();
  const auto v = fs.values();
  const std::size_t m = v.size();

  const auto per_after = detail::level_perimeters(f, fs);

  auto r = make_report("espada", opt, "");
  std::vector<double> support;
  std::vector<double> tv_lhs;
  std::vector<double> tv_rhs;
  bool support_ok = true;
  double scale = std::max(1.0, fs.total_integral());
  for (double t : breakpoints) {
    const auto it = std::min_element(b.begin() + 1, b.end(), [t](double x, double y) {
      return std::fabs(x - t) < std::fabs(y - t);
    });
    require(std::fabs(*it - t) <= 1e-12 * M, "truncation_identity_check: t must be a breakpoint of f*");
    const auto j = static_cast<std::size_t>(it - b.begin());
    const double level = j < m ? v[j] : 0.0;
    const GridFunction g = truncation(f, level, TruncationCeiling::unbounded());

    const double supp = support_measure(g);
    support.push_back(supp);
    support_ok = support_ok && supp <= t * (1.0 + 1e-12) + 1e-15;

    double tv = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c)
      for (int d = 0; d < space.dimension(); ++d) {
        const std::size_t nb = space.neighbor(c, d, 1);
        if (nb != MeasureSpace::npos) tv += space.face_weight(c, d) * std::fabs(g.values[c] - g.values[nb]);
      }
    double coarea = 0.0;
    for (std::size_t i = 0; i < j; ++i) coarea += per_after[i] * (v[i] - (i + 1 < m ? v[i + 1] : 0.0));
    tv_lhs.push_back(tv);
    tv_rhs.push_back(coarea);
    scale = std::max(scale, tv);

    r.t.push_back(t);
    r.lhs.push_back(g.sum_weighted());
    r.rhs.push_back(fs.excess(j));
  }
  double tv_err = 0.0;
  for (std::size_t i = 0; i < tv_lhs.size(); ++i) tv_err = std::max(tv_err, std::fabs(tv_lhs[i] - tv_rhs[i]));
  r.metadata["support"] = numbers_json(support);
  r.metadata["edge_variation"] = numbers_json(tv_lhs);
  r.metadata["coarea"] = numbers_json(tv_rhs);
  r.metadata["edge_variation_error"] = tv_err;
  const double eps = 1e-10 * scale;
  finalize_identity(r, eps);
  if (r.passed() && (!support_ok || tv_err > eps)) {
    r.verdict = {VerdictKind::Violated, tv_err, 0.0, 0.0,
                 support_ok ? "edge variation differs from coarea sum" : "support exceeds t"};
  }
  return r;
}

HypothesisResult self_improvement_hypothesis(const Profile& profile) {
  const double U = std::min(1.0, profile.mass());
  // s = e^u: ∫ I(s)/s^2 ds = ∫ I(e^u) e^{-u} du, which stays finite down to 1e-300.
  auto integrand = [&profile](double u) { return profile(std::exp(u)) * std::exp(-u); };
  auto c_of = [&](double tau) {
    const double a = std::log(tau);
    const double b = std::log(U);
    const int panels = std::max(16, static_cast<int>(std::ceil(2.0 * (b - a))));
    std::vector<double> knots(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) knots[static_cast<std::size_t>(i)] = a + (b - a) * i / panels;
    knots.back() = b;
    return (tau / profile(tau)) * quad::gauss_panels(integrand, knots);
  };
  HypothesisResult h;
  for (double tau : detail::kDeepCutoffs) {
    h.cutoffs.push_back(tau * U);
    h.values.push_back(c_of(tau * U));
  }
  h.satisfied = !quad::nested_growth_diverges(h.values[0], h.values[1], h.values[2]);
  h.constant = *std::max_element(h.values.begin(), h.values.end());
  if (h.satisfied)
    for (double t : t_grid_range(1e-12 * U, 0.5 * U, 64)) h.constant = std::max(h.constant, c_of(t));
  return h;
}

VerificationReport verify_self_improvement(const GridFunction& f, const Profile& profile, const VerifyOptions& opt) {
  const MeasureSpace& space = *f.space;
  detail::require_profile_covers(space, profile, "verify_self_improvement");
  const HypothesisResult hyp = self_improvement_hypothesis(profile);
  const auto ts = verification_grid(space, opt, std::min(1.0, profile.mass()));
  const auto R = detail::rearrange_with_gradient(f);
  const StepFunction& fs = R.f_star;
  const auto b = fs.breaks();
  auto weight = [&profile](double s) { return profile(s) / (s * s); };
  // Cumulative conclusion integral at the breakpoints; E_0 = 0 so piece 0 contributes nothing.
  std::vector<double> cum(fs.pieces() + 1, 0.0);
  for (std::size_t j = 0; j < fs.pieces(); ++j) {
    const double e = fs.excess(j);
    cum[j + 1] = cum[j] + (e > 0.0 ? e * detail::geometric_gl(weight, b[j], b[j + 1]) : 0.0);
  }
  const bool euclid = profile.params().value("kind", "") == "euclidean";
  const double n = euclid ? profile.params().at("n").get<double>() : 0.0;
  std::vector<double> spec;
  auto r = make_report("l1", opt, profile.label());
  r.t = ts;
  for (double t : ts) {
    const std::size_t j = fs.piece_at(t);
    const double e = fs.excess(j);
    const double part = (e > 0.0 && t > b[j]) ? e * detail::geometric_gl(weight, b[j], t) : 0.0;
    r.lhs.push_back(cum[j] + part);
    r.rhs.push_back(R.grad_star.integral(t));
    if (euclid) {
      double acc = 0.0;
      for (std::size_t i = 1; i <= j; ++i) {
        const double hi = i == j ? t : b[i + 1];
        acc += fs.excess(i) * n * (std::pow(b[i], -1.0 / n) - std::pow(hi, -1.0 / n));
      }
      spec.push_back(acc);
    }
  }
  r.metadata["hypothesis_constant"] = number_json(hyp.constant);
  r.metadata["hypothesis_cutoffs"] = numbers_json(hyp.cutoffs);
  r.metadata["hypothesis_values"] = numbers_json(hyp.values);
  if (euclid) r.metadata["euclidean_specialization_constant"] = number_json(empirical_constant(spec, r.rhs));
  finalize_inequality(r, std::nullopt);
  if (!hyp.satisfied) mark_skipped(r, "hypothesis not satisfied");
  return r;
}

}  // namespace rearr
