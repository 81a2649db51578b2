#include "rearr/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

#include "rearr/corpus.hpp"
#include "rearr/error.hpp"
#include "rearr/inequalities.hpp"
#include "rearr/norms.hpp"
#include "rearr/output.hpp"

namespace rearr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ostream& log_of(const CommandOptions& opt) { return opt.log ? *opt.log : std::cerr; }

std::string tag(const char* prefix, double x) {
  std::string s = format_number(x);
  for (char& c : s)
    if (c == '.') c = '_';
  return prefix + s;
}

bool unit_mass(double m) { return std::fabs(m - 1.0) <= 1e-12; }

std::vector<SpacePtr> spaces_of(const RunConfig& c) {
  std::vector<SpacePtr> out;
  for (const auto& d : c.spaces.empty() ? default_spaces() : c.spaces) out.push_back(share(MeasureSpace::from_descriptor(d)));
  return out;
}

std::vector<Profile> profiles_for(const RunConfig& c, const MeasureSpace& space) {
  std::vector<Profile> out;
  for (const auto& p : c.profiles) out.push_back(p.is_string() ? default_profile(space) : profile_from_json(p));
  return out;
}

struct Member {
  std::string label;
  GridFunction f;
  bool resolved = true;
};

std::vector<Member> members_for(const RunConfig& c, const SpacePtr& space) {
  std::vector<Member> out;
  const auto& fams = c.corpus.families;
  const bool all = std::find(fams.begin(), fams.end(), "all") != fams.end();
  int kept = 0;
  for (const auto& spec : corpus_specs(*space, c.corpus.seed)) {
    if (!all && std::find(fams.begin(), fams.end(), spec.family) == fams.end()) continue;
    if (c.corpus.count > 0 && kept >= c.corpus.count) break;
    ++kept;
    GridFunction f = sample_expression(space, Expression::parse(spec.expression));
    const bool ok = resolved_on_grid(f);
    out.push_back({spec.label, std::move(f), ok});
  }
  for (const auto& fn : c.corpus.functions) {
    GridFunction f = sample_expression(space, Expression::parse(fn.expression));
    const bool ok = resolved_on_grid(f);
    out.push_back({fn.label, std::move(f), ok});
  }
  return out;
}

bool selected(const RunConfig& c, const std::string& id) {
  const auto& s = c.inequalities;
  return std::find(s.begin(), s.end(), "all") != s.end() || std::find(s.begin(), s.end(), id) != s.end();
}

VerificationReport skipped_report(const std::string& id, const std::string& fn, const std::string& profile,
                                  const std::string& status) {
  VerificationReport r;
  r.id = id;
  r.function_label = fn;
  r.profile_label = profile;
  mark_skipped(r, status);
  return r;
}

std::vector<double> espada_breakpoints(const GridFunction& f) {
  const StepFunction fs = decreasing_rearrangement(f);
  const auto br = fs.breaks();
  std::vector<double> interior(br.begin() + 1, br.end() - 1);
  if (interior.size() <= 20) return interior;
  std::vector<double> out;
  for (int i = 0; i < 20; ++i) out.push_back(interior[(interior.size() - 1) * static_cast<std::size_t>(i) / 19]);
  return out;
}

struct Task {
  ReportRecord record;
  std::function<VerificationReport()> run;
  /// Set when the verdict is known without running.
  std::optional<std::string> skip;
};

// Raises the identity tolerance to the configured floor.
void apply_identity_floor(VerificationReport& r, double floor) {
  if (!r.metadata.contains("tolerance") || r.skipped()) return;
  const double eps = r.metadata["tolerance"].get<double>();
  if (floor > eps) finalize_identity(r, floor);
}

}  // namespace

Profile default_profile(const MeasureSpace& space) {
  switch (space.kind()) {
    case SpaceKind::GaussianLine: return gaussian_profile();
    case SpaceKind::UnitCube: return space.dimension() == 1 ? interval_profile() : cube_lower_bound_profile();
    case SpaceKind::EuclideanBox: return euclidean_profile(space.dimension());
    case SpaceKind::WeightedInterval: break;
  }
  throw PreconditionError("no default profile for " + to_string(space.kind()) + "; list one under \"profiles\"");
}

std::vector<ReportRecord> run_verifications(const RunConfig& c) {
  std::vector<Task> tasks;
  std::vector<std::shared_ptr<const Profile>> keep_profiles;
  std::vector<std::shared_ptr<const Member>> keep_members;

  for (const SpacePtr& space : spaces_of(c)) {
    const std::string sname = space->short_name();
    const bool prob = space->is_probability() && unit_mass(space->total_mass());
    const bool cube = space->kind() == SpaceKind::UnitCube;
    std::vector<std::shared_ptr<const Profile>> profiles;
    for (auto& p : profiles_for(c, *space)) profiles.push_back(std::make_shared<const Profile>(std::move(p)));
    keep_profiles.insert(keep_profiles.end(), profiles.begin(), profiles.end());

    for (auto& m : members_for(c, space)) {
      auto member = std::make_shared<const Member>(std::move(m));
      keep_members.push_back(member);
      VerifyOptions vo;
      vo.grid.t_min_fraction = c.t_min;
      vo.grid.nodes = c.nodes;
      vo.slack = c.tolerances.slack;
      vo.label = member->label;
      vo.seed = c.corpus.seed;
      const GridFunction* f = &member->f;
      const std::string fname = sanitize_filename(member->label);

      auto add = [&](const std::string& dir, const std::string& id, const std::string& variant,
                     const std::string& plabel, std::function<VerificationReport()> run,
                     std::optional<std::string> skip) {
        if (!selected(c, id)) return;
        Task t;
        t.record.space = sname;
        t.record.variant = variant;
        t.record.stem = "reports/" + sname + "/" + dir + id + (variant.empty() ? "" : "-" + variant) + "__" + fname;
        t.record.report = skipped_report(id, member->label, plabel, "");
        if (!member->resolved) skip = "gradient blow-up on the grid; function not resolved";
        t.skip = std::move(skip);
        t.run = std::move(run);
        tasks.push_back(std::move(t));
      };
      auto none = std::optional<std::string>{};
      const auto cube_only = cube ? none : std::optional<std::string>("not applicable: unit cube only");
      const double pm = c.parameters.modulus_p;
      const double pmor = c.parameters.morrey_p;

      add("", "espada", "", "", [f, vo] {
        const auto br = espada_breakpoints(*f);
        return truncation_identity_check(*f, br, vo);
      }, none);
      add("", "tres", tag("p", pm), "", [f, vo, pm] { return verify_oscillation_modulus(*f, pm, vo); }, cube_only);
      add("", "degarsia", tag("p", pm), "", [f, vo, pm] { return verify_garsia(*f, pm, vo); }, cube_only);
      add("", "morrey", tag("p", pmor), "", [f, vo, pmor] { return morrey_holder_check(*f, pmor, vo); }, cube_only);

      for (const auto& prof : profiles) {
        const Profile* P = prof.get();
        const std::string dir = sanitize_filename(P->label()) + "/";
        const bool covers = P->mass() >= space->total_mass() * (1.0 - 1e-12);
        const auto uncovered = covers ? none : std::optional<std::string>("profile does not cover the space mass");
        auto need_unit = uncovered;
        if (!need_unit && !(prob && unit_mass(P->mass())))
          need_unit = "not applicable: needs a probability space and a unit-mass profile";

        add(dir, "metricas", "", P->label(), [f, P, vo] { return verify_oscillation(*f, *P, vo); }, uncovered);
        add(dir, "maztal", "", P->label(), [f, P, vo] { return verify_mazya_talenti(*f, *P, vo); }, uncovered);
        add(dir, "polzgGG", "", P->label(), [f, P, vo] { return verify_polya_szego(*f, *P, vo); }, uncovered);
        add(dir, "gagliardoNBH", "", P->label(), [f, P, vo] { return verify_bobkov_houdre(*f, *P, vo); }, uncovered);
        for (double p : c.parameters.coulhon_p) {
          add(dir, "coulhon", tag("p", p), P->label(),
              [f, P, vo, p] { return verify_coulhon(*f, Phi::from_profile(*P), p, vo); }, uncovered);
          add(dir, "norma", tag("p", p), P->label(),
              [f, P, vo, p] { return verify_coulhon_pointwise(*f, Phi::from_profile(*P), p, vo); }, uncovered);
        }
        add(dir, "l1", "", P->label(), [f, P, vo] { return verify_self_improvement(*f, *P, vo); }, uncovered);
        add(dir, "robusta", "", P->label(),
            [f, P, vo] { return poincare_identity_check(*f, *P, PoincareMesh::Midpoints, vo); }, need_unit);
        for (const auto& ntext : c.norms) {
          const NormDescriptor nd = NormDescriptor::parse(ntext);
          auto skip = need_unit;
          if (!skip && nd.kind != NormKind::Lp) skip = "not applicable: only L^p norms";
          add(dir, "poincare_chain", sanitize_filename(nd.to_string()), P->label(),
              [f, P, vo, nd] { return poincare_chain_check(*f, nd, *P, vo); }, skip);
        }
        auto need_uniform = need_unit;
        if (!need_uniform && !space->uniform_spacing()) need_uniform = "not applicable: needs a uniform grid";
        for (int k : c.parameters.higher_order_k)
          add(dir, "higher_order", "k" + std::to_string(k), P->label(),
              [f, P, vo, k] { return verify_higher_order(*f, k, *P, vo); }, need_uniform);
        add(dir, "larusa", tag("p", pm), P->label(), [f, P, vo, pm] { return verify_transference(*f, *P, pm, vo); },
            need_unit);
      }
    }
  }

  std::vector<std::exception_ptr> errors(tasks.size());
  const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    Task& t = tasks[static_cast<std::size_t>(i)];
    if (t.skip) {
      mark_skipped(t.record.report, *t.skip);
      continue;
    }
    try {
      t.record.report = t.run();
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<ReportRecord> out;
  out.reserve(tasks.size());
  for (auto& t : tasks) {
    apply_identity_floor(t.record.report, c.tolerances.identity);
    out.push_back(std::move(t.record));
  }
  return out;
}

int cmd_verify(const RunConfig& c, const CommandOptions& opt) {
  const auto records = run_verifications(c);
  const fs::path out = c.output;
  std::vector<std::vector<std::string>> rows{{"space", "profile", "function", "id", "variant", "verdict",
                                              "empirical_constant", "explicit_constant", "t", "ratio", "status",
                                              "report"}};
  int code = kExitOk;
  for (const auto& rec : records) {
    const auto& r = rec.report;
    write_json(out / (rec.stem + ".json"), r.to_json());
    if (!opt.json_only && !r.skipped()) write_report_svg(out / (rec.stem + ".svg"), r);
    rows.push_back({rec.space, r.profile_label, r.function_label, r.id, rec.variant, to_string(r.verdict.kind),
                    csv_number(r.empirical_constant), r.explicit_constant ? csv_number(*r.explicit_constant) : "",
                    csv_number(r.verdict.t), csv_number(r.verdict.ratio), r.verdict.status, rec.stem + ".json"});
    if (r.verdict.kind == VerdictKind::Violated) {
      code = kExitViolation;
      log_of(opt) << "violated: " << rec.space << ' ' << r.id << (rec.variant.empty() ? "" : "-" + rec.variant) << ' '
                  << r.function_label << (r.profile_label.empty() ? "" : " [" + r.profile_label + "]")
                  << " t=" << csv_number(r.verdict.t) << " ratio=" << csv_number(r.verdict.ratio) << '\n';
    }
  }
  if (!opt.json_only) write_csv(out / "summary.csv", rows);
  write_json(out / "config.json", c.to_json());
  std::size_t skipped = 0;
  for (const auto& rec : records) skipped += rec.report.skipped();
  log_of(opt) << "verify: " << records.size() << " reports, " << skipped << " skipped, exit " << code << '\n';
  return code;
}

int cmd_rearrange(const RunConfig& c, const CommandOptions& opt) {
  if (!c.function) throw ConfigError("function", "the rearrange command needs a \"function\" entry");
  const SpacePtr space = spaces_of(c).front();
  const GridFunction f = sample_expression(space, Expression::parse(c.function->expression));
  const fs::path dir = fs::path(c.output) / "rearrange" / space->short_name() / sanitize_filename(c.function->label);

  const StepFunction fs_ = decreasing_rearrangement(f);
  const StepFunction sg = signed_rearrangement(f);
  auto midpoints = [](const StepFunction& g, std::vector<double>& t, std::vector<double>& v) {
    for (std::size_t j = 0; j < g.pieces(); ++j) {
      t.push_back(0.5 * (g.breaks()[j] + g.breaks()[j + 1]));
      v.push_back(g.values()[j]);
    }
  };
  std::vector<double> mt, mv, st, sv, bt, bv;
  midpoints(fs_, mt, mv);
  midpoints(sg, st, sv);
  for (std::size_t j = 0; j < fs_.pieces(); ++j) {
    bt.push_back(fs_.breaks()[j]);
    bv.push_back(fs_.values()[j]);
  }
  const auto ts = t_grid(space->total_mass(), GridOptions{c.t_min, c.nodes});
  const PiecewiseAverage avg(fs_);
  std::vector<double> ss, osc, star;
  for (double t : ts) {
    ss.push_back(avg(t));
    osc.push_back(fs_.oscillation(t));
    star.push_back(fs_(t));
  }
  write_series_csv(dir / "f_star.csv", mt, mv);
  write_series_csv(dir / "f_star_steps.csv", bt, bv);
  write_series_csv(dir / "f_star_star.csv", ts, ss);
  write_series_csv(dir / "oscillation.csv", ts, osc);
  write_series_csv(dir / "f_signed.csv", st, sv);
  if (!opt.json_only) {
    PlotOptions po;
    po.title = "rearrangements of " + c.function->label;
    po.log_x = true;
    write_svg(dir / "rearrangement.svg",
              {{"f*", ts, star, true}, {"f**", ts, ss, false}, {"f** - f*", ts, osc, false}}, po);
  }
  log_of(opt) << "rearrange: " << fs_.pieces() << " pieces written to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_transfer(const RunConfig& c, const CommandOptions& opt) {
  std::vector<std::vector<std::string>> rows{
      {"profile", "n", "integral", "closed_form", "rel_error", "bound", "divergent"}};
  for (int n = c.transfer.n_min; n <= c.transfer.n_max; ++n) {
    const double q = gamma_transference_constant(n);
    const double closed = std::exp(std::lgamma(1.0 + 0.5 * n) / n) / std::sqrt(static_cast<double>(n));
    const double bound = std::sqrt(0.5) * std::pow(0.5 * n, 1.0 / n);
    rows.push_back({"euclidean_" + std::to_string(n), std::to_string(n), csv_number(q), csv_number(closed),
                    csv_number(std::fabs(q - closed) / closed), csv_number(bound), "false"});
  }
  for (const auto& pj : c.profiles) {
    if (pj.is_string()) continue;
    const Profile p = profile_from_json(pj);
    const TransferenceIntegral ti = transference_integral(p);
    rows.push_back({p.label(), "", ti.divergent ? "inf" : csv_number(ti.value), "", "", "",
                    ti.divergent ? "true" : "false"});
  }
  write_csv(fs::path(c.output) / "transfer.csv", rows);
  log_of(opt) << "transfer: " << rows.size() - 1 << " rows\n";
  return kExitOk;
}

int cmd_profile(const RunConfig& c, const CommandOptions& opt) {
  std::size_t written = 0;
  for (const SpacePtr& space : spaces_of(c)) {
    for (const Profile& p : profiles_for(c, *space)) {
      const fs::path base = fs::path(c.output) / "profiles" / space->short_name() / sanitize_filename(p.label());
      const auto grid = p.check_grid();
      std::vector<double> vals;
      for (double t : grid) vals.push_back(p(t));
      json j;
      j["profile"] = p.to_json();
      j["space"] = space->descriptor();
      j["covers_space"] = p.mass() >= space->total_mass() * (1.0 - 1e-12);
      j["checks"] = {{"concave", p.check_concave()}, {"symmetric", p.check_symmetric()},
                     {"positive", p.check_positive()},
                     {"phi_non_decreasing", phi_of(p).non_decreasing_certificate}};
      const HypothesisResult h = self_improvement_hypothesis(p);
      j["self_improvement_hypothesis"] = {{"satisfied", h.satisfied}, {"constant", number_json(h.constant)},
                                          {"cutoffs", numbers_json(h.cutoffs)}, {"values", numbers_json(h.values)}};
      if (p.mass() >= 1.0 - 1e-12) {
        const TransferenceIntegral ti = transference_integral(p);
        j["transference_integral"] = {{"divergent", ti.divergent}, {"value", number_json(ti.value)},
                                      {"cutoffs", numbers_json(ti.cutoffs)}, {"partial", numbers_json(ti.partial)}};
      }
      if (unit_mass(p.mass())) {
        const auto eq = gaussian_equivalence_constants(p, 1e-6, 0.4);
        j["gaussian_equivalence"] = {{"t_lo", 1e-6}, {"t_hi", 0.4}, {"c_min", number_json(eq.c_min)},
                                     {"c_max", number_json(eq.c_max)}};
        const HardyNormEstimate hn = hardy_norm_estimate(p, 2.0);
        j["hardy_norm_p2"] = {{"value", number_json(hn.value)}, {"argmax", hn.argmax}};
      }
      write_json(base.string() + ".json", j);
      if (!opt.json_only) {
        write_series_csv(base.string() + ".csv", grid, vals);
        PlotOptions po;
        po.title = "profile " + p.label();
        write_svg(base.string() + ".svg", {{p.label(), grid, vals, false}}, po);
      }
      ++written;
    }
  }
  log_of(opt) << "profile: " << written << " profiles\n";
  return kExitOk;
}

int cmd_suite(const RunConfig& c, const CommandOptions& opt) {
  const int v = cmd_verify(c, opt);
  cmd_transfer(c, opt);
  cmd_profile(c, opt);
  if (c.function) cmd_rearrange(c, opt);
  return v;
}

int run_command(const std::string& name, const RunConfig& c, const CommandOptions& opt) {
  try {
    if (name == "verify") return cmd_verify(c, opt);
    if (name == "rearrange") return cmd_rearrange(c, opt);
    if (name == "transfer") return cmd_transfer(c, opt);
    if (name == "profile") return cmd_profile(c, opt);
    if (name == "suite") return cmd_suite(c, opt);
    log_of(opt) << "error: unknown command '" << name << "'\n";
    return kExitPrecondition;
  } catch (const ConfigError& e) {
    log_of(opt) << "config error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    log_of(opt) << "precondition error: " << e.what() << '\n';
  }
  return kExitPrecondition;
}

}  // namespace rearr
