#include "tlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace tlab {

namespace {

struct Context {
  TorusGrid grid;
  BoxFamily boxes;
  TimeMesh poisson_mesh;
  TimeMesh heat_mesh;
  std::vector<double> besov_times;
  NormOptions opts;
};

Context make_context(const TorusGrid& grid, const VerifyConfig& cfg) {
  Context c;
  c.grid = grid;
  c.boxes = verify_family(grid, cfg);
  c.poisson_mesh = time_mesh_for(c.boxes, ExtensionKind::poisson, cfg.floor_panels, cfg.nodes_per_panel);
  c.heat_mesh = time_mesh_for(c.boxes, ExtensionKind::heat, cfg.floor_panels, cfg.nodes_per_panel);
  c.besov_times = besov_time_grid(grid, cfg.besov_points);
  c.opts.backend = cfg.backend;
  return c;
}

struct Part {
  std::string theorem;
  std::string left;
  std::string right;
  Gate gate = Gate::spread_and_drift;
  double max_allowed = std::numeric_limits<double>::infinity();
};

using Evaluator = std::function<std::vector<std::pair<double, double>>(const Field&, const Context&)>;

void check_alpha(double alpha, const char* who) {
  if (!(alpha > -1.0 && alpha < 1.0)) throw std::domain_error(std::string(who) + ": alpha must lie in (-1, 1)");
}

// (left, right) per part and member; NaN marks a skipped member.
std::vector<std::vector<std::pair<double, double>>> evaluate_corpus(const std::vector<CorpusSpec>& corpus,
                                                                   const Context& ctx, std::size_t parts,
                                                                   const Evaluator& fn) {
  std::vector<std::vector<std::pair<double, double>>> out(corpus.size());
  std::exception_ptr error;
  const auto n = static_cast<std::ptrdiff_t>(corpus.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const Field f = generate(corpus[i], ctx.grid);
      if (f.without_mean().max_abs() == 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out[i].assign(parts, {nan, nan});
      } else {
        out[i] = fn(f, ctx);
      }
    } catch (...) {
#pragma omp critical(tlab_verify_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void fold_band(const std::vector<MemberRatio>& members, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = 0.0;
  for (const auto& m : members) {
    lo = std::min(lo, m.ratio);
    hi = std::max(hi, m.ratio);
  }
  if (members.empty()) lo = hi = 0.0;
}

std::vector<EquivalenceReport> run_parts(const std::vector<CorpusSpec>& corpus, double alpha, const TorusGrid& grid,
                                         const VerifyConfig& cfg, const std::vector<Part>& parts,
                                         const Evaluator& fn) {
  const Context base = make_context(grid, cfg);
  const auto coarse = evaluate_corpus(corpus, base, parts.size(), fn);
  std::vector<std::vector<std::pair<double, double>>> fine;
  if (cfg.refine) {
    const TorusGrid g2(grid.dims, grid.points_per_axis * 2, grid.period);
    fine = evaluate_corpus(corpus, make_context(g2, cfg), parts.size(), fn);
  }

  std::vector<EquivalenceReport> reports;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    EquivalenceReport rep;
    rep.theorem = parts[p].theorem;
    rep.left = parts[p].left;
    rep.right = parts[p].right;
    rep.alpha = alpha;
    rep.points_per_axis = grid.points_per_axis;
    rep.gate = parts[p].gate;
    rep.max_ratio_allowed = parts[p].max_allowed;
    rep.refined = cfg.refine;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto [l, r] = coarse[i][p];
      if (std::isnan(l) || std::isnan(r) || r == 0.0) {
        rep.skipped.push_back(corpus[i].name);
        continue;
      }
      rep.members.push_back({corpus[i].name, l, r, l / r});
      if (cfg.refine) {
        const auto [l2, r2] = fine[i][p];
        if (r2 == 0.0 || std::isnan(r2)) throw std::runtime_error("verify: member vanishes on the refined grid");
        rep.refined_members.push_back({corpus[i].name, l2, r2, l2 / r2});
      }
    }
    fold_band(rep.members, rep.band_min, rep.band_max);
    rep.spread = rep.band_min > 0.0 ? rep.band_max / rep.band_min : std::numeric_limits<double>::infinity();
    if (rep.refined && !rep.members.empty()) {
      fold_band(rep.refined_members, rep.refined_min, rep.refined_max);
      rep.drift = std::max(std::abs(rep.refined_min / rep.band_min - 1.0),
                           std::abs(rep.refined_max / rep.band_max - 1.0));
    }
    bool ok = true;
    for (const auto& m : rep.members) ok = ok && std::isfinite(m.ratio) && m.ratio > 0.0;
    ok = ok && rep.band_max <= rep.max_ratio_allowed;
    if (rep.gate == Gate::spread_and_drift) ok = ok && rep.spread <= cfg.max_spread;
    if (rep.gate != Gate::none && rep.refined) ok = ok && std::isfinite(rep.drift) && rep.drift <= cfg.max_drift;
    if (rep.members.empty()) rep.note = "no nonconstant members";
    rep.pass = rep.gate == Gate::none || ok;
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::string with_alpha(const std::string& name, double a) {
  std::ostringstream os;
  os << name << "(" << a << ")";
  return os.str();
}

}  // namespace

BoxFamily verify_family(const TorusGrid& grid, const VerifyConfig& cfg) {
  const int n = grid.points_per_axis;
  const int j_max = std::min(cfg.j_max, log2_exact(n) - 1);
  if (cfg.centers_per_axis < 1 || !is_power_of_two(cfg.centers_per_axis))
    throw std::invalid_argument("verify: centers_per_axis must be a power of two");
  const int stride = std::max(1, n / cfg.centers_per_axis);
  return BoxFamily::dyadic(grid, cfg.j_min, j_max, stride);
}

EquivalenceReport check_theorem_2_1(const std::vector<CorpusSpec>& corpus, double alpha, const TorusGrid& grid,
                                    const VerifyConfig& cfg) {
  check_alpha(alpha, "check_theorem_2_1");
  const std::vector<Part> parts{{"2.1", "h_alpha2", "campanato"}};
  return run_parts(corpus, alpha, grid, cfg, parts, [alpha](const Field& f, const Context& c) {
    const auto u = build_stack(f, ExtensionKind::poisson, c.poisson_mesh);
    return std::vector<std::pair<double, double>>{
        {h_alpha2_norm(u, alpha, c.boxes, c.opts).value, campanato_norm(f, alpha, c.boxes, c.opts).value}};
  }).front();
}

std::vector<EquivalenceReport> check_theorem_3_1(const std::vector<CorpusSpec>& corpus, double alpha,
                                                 const TorusGrid& grid, const VerifyConfig& cfg) {
  check_alpha(alpha, "check_theorem_3_1");
  const bool bloch = alpha > 0.0;
  std::vector<Part> parts{{"3.1(i)", "scaled_h", "frac_campanato"}, {"3.3", "star", "scaled_h"}};
  if (bloch) parts.push_back({"3.1(ii)", "bloch_hb", "scaled_h"});
  return run_parts(corpus, alpha, grid, cfg, parts, [alpha, bloch](const Field& f, const Context& c) {
    const auto u = build_stack(f, ExtensionKind::poisson, c.poisson_mesh);
    const double sh = scaled_h_norm(u, alpha, c.boxes, c.opts).value;
    std::vector<std::pair<double, double>> out{{sh, frac_campanato_norm(f, alpha, c.boxes, c.opts).value},
                                               {star_norm(u, alpha, c.boxes, c.opts).value, sh}};
    if (bloch) out.push_back({bloch_hb_norm(u), sh});
    return out;
  });
}

std::vector<EquivalenceReport> check_theorem_4_1(const std::vector<CorpusSpec>& corpus, double alpha,
                                                 const TorusGrid& grid, const VerifyConfig& cfg) {
  check_alpha(alpha, "check_theorem_4_1");
  const bool bloch = alpha > 0.0;
  std::vector<Part> parts{{"4.1(i)", "t_alpha2", "campanato"},
                          {"4.1(ii)", "scaled_t", "frac_campanato"},
                          {"4.1 dagger", "dagger_r", "scaled_t", Gate::none},
                          {"4.1 dagger", "dagger_r2", "scaled_t", Gate::none}};
  if (bloch) parts.push_back({"4.1(iii)", "bloch_cb", "scaled_t"});
  return run_parts(corpus, alpha, grid, cfg, parts, [alpha, bloch](const Field& f, const Context& c) {
    const auto u = build_stack(f, ExtensionKind::heat, c.heat_mesh);
    const double st = scaled_t_norm(u, alpha, c.boxes, c.opts).value;
    const auto dag = dagger_norm(u, alpha, c.boxes, c.opts);
    std::vector<std::pair<double, double>> out{
        {t_alpha2_norm(u, alpha, c.boxes, c.opts).value, campanato_norm(f, alpha, c.boxes, c.opts).value},
        {st, frac_campanato_norm(f, alpha, c.boxes, c.opts).value},
        {dag.displayed.value, st},
        {dag.parabolic.value, st}};
    if (bloch) out.push_back({bloch_cb_norm(u), st});
    return out;
  });
}

EquivalenceReport check_theorem_4_2(const std::vector<CorpusSpec>& corpus, double alpha, const TorusGrid& grid,
                                    const VerifyConfig& cfg) {
  check_alpha(alpha, "check_theorem_4_2");
  if (alpha == 0.0) {
    EquivalenceReport rep;
    rep.theorem = "4.2";
    rep.alpha = 0.0;
    rep.points_per_axis = grid.points_per_axis;
    rep.gate = Gate::none;
    rep.note = "alpha = 0: both branches collapse to BMO";
    return rep;
  }
  if (alpha > 0.0) {
    const std::vector<Part> parts{{"4.2(ii)", "inverse_space", "besov"}};
    return run_parts(corpus, alpha, grid, cfg, parts, [alpha](const Field& f, const Context& c) {
      return std::vector<std::pair<double, double>>{
          {inverse_space_norm(f, alpha, kInfiniteTime, c.boxes, c.opts).value, besov_norm(f, c.besov_times)}};
    }).front();
  }
  const std::vector<Part> parts{{"4.2(i)", "frac_campanato", "q_norm"}};
  return run_parts(corpus, alpha, grid, cfg, parts, [alpha](const Field& f, const Context& c) {
    return std::vector<std::pair<double, double>>{
        {frac_campanato_norm(f, alpha, c.boxes, c.opts).value, q_norm(f, -alpha, c.boxes, c.opts).value}};
  }).front();
}

EquivalenceReport check_gradient_constant(const std::vector<CorpusSpec>& corpus, double alpha,
                                          const TorusGrid& grid, const VerifyConfig& cfg) {
  check_alpha(alpha, "check_gradient_constant");
  const std::vector<Part> parts{{"2.2(i)", "grad_sup", "h_alpha2", Gate::drift}};
  return run_parts(corpus, alpha, grid, cfg, parts, [alpha](const Field& f, const Context& c) {
    const auto u = build_stack(f, ExtensionKind::poisson, c.poisson_mesh);
    return std::vector<std::pair<double, double>>{
        {gradient_bound_constant(u, alpha), h_alpha2_norm(u, alpha, c.boxes, c.opts).value}};
  }).front();
}

std::vector<EquivalenceReport> check_inclusions(const std::vector<CorpusSpec>& corpus, double beta,
                                                const TorusGrid& grid, const VerifyConfig& cfg) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("check_inclusions: beta must lie in (0, 1)");
  const double exact = 1.0 + 1e-12;
  const std::vector<Part> parts{
      {"Q in BMO", "campanato(0)", with_alpha("q_norm", beta), Gate::drift},
      {"BMO in frac_campanato", with_alpha("frac_campanato", beta), "campanato(0)", Gate::drift},
      {"H(-b) in HMO", "scaled_h(0)", with_alpha("scaled_h", -beta), Gate::drift, exact},
      {"HMO in H(b)", with_alpha("scaled_h", beta), "scaled_h(0)", Gate::drift, exact},
      {"T(-b) in TMO", "scaled_t(0)", with_alpha("scaled_t", -beta), Gate::drift, exact},
      {"TMO in T(b)", with_alpha("scaled_t", beta), "scaled_t(0)", Gate::drift, exact},
      {"Q^-1 in BMO^-1", "inverse_space(0)", with_alpha("inverse_space", -beta), Gate::drift, exact},
      {"BMO^-1 in B^-1", "besov", "inverse_space(0)", Gate::drift}};
  return run_parts(corpus, beta, grid, cfg, parts, [beta](const Field& f, const Context& c) {
    const auto u = build_stack(f, ExtensionKind::poisson, c.poisson_mesh);
    const auto v = build_stack(f, ExtensionKind::heat, c.heat_mesh);
    const double bmo = campanato_norm(f, 0.0, c.boxes, c.opts).value;
    const double h0 = scaled_h_norm(u, 0.0, c.boxes, c.opts).value;
    const double t0 = scaled_t_norm(v, 0.0, c.boxes, c.opts).value;
    const double i0 = inverse_space_norm(f, 0.0, kInfiniteTime, c.boxes, c.opts).value;
    return std::vector<std::pair<double, double>>{
        {bmo, q_norm(f, beta, c.boxes, c.opts).value},
        {frac_campanato_norm(f, beta, c.boxes, c.opts).value, bmo},
        {h0, scaled_h_norm(u, -beta, c.boxes, c.opts).value},
        {scaled_h_norm(u, beta, c.boxes, c.opts).value, h0},
        {t0, scaled_t_norm(v, -beta, c.boxes, c.opts).value},
        {scaled_t_norm(v, beta, c.boxes, c.opts).value, t0},
        {i0, inverse_space_norm(f, -beta, kInfiniteTime, c.boxes, c.opts).value},
        {besov_norm(f, c.besov_times), i0}};
  });
}

std::string_view to_string(ScalingNorm id) {
  switch (id) {
    case ScalingNorm::campanato: return "campanato";
    case ScalingNorm::frac_campanato: return "frac_campanato";
    case ScalingNorm::scaled_h: return "scaled_h";
    case ScalingNorm::inverse_space: return "inverse_space";
    case ScalingNorm::h_alpha2: return "h_alpha2";
  }
  return "campanato";
}

ScalingNorm scaling_norm_from_string(std::string_view name) {
  for (auto id : {ScalingNorm::campanato, ScalingNorm::frac_campanato, ScalingNorm::scaled_h,
                  ScalingNorm::inverse_space, ScalingNorm::h_alpha2})
    if (to_string(id) == name) return id;
  throw std::invalid_argument("unknown scaling norm: " + std::string(name));
}

namespace {

double scaling_value(const Field& f, ScalingNorm id, double alpha, const BoxFamily& boxes, const VerifyConfig& cfg) {
  NormOptions opts;
  opts.backend = cfg.backend;
  switch (id) {
    case ScalingNorm::campanato: return campanato_norm(f, alpha, boxes, opts).value;
    case ScalingNorm::frac_campanato: return frac_campanato_norm(f, alpha, boxes, opts).value;
    case ScalingNorm::inverse_space: return inverse_space_norm(f, alpha, kInfiniteTime, boxes, opts).value;
    case ScalingNorm::scaled_h:
    case ScalingNorm::h_alpha2: {
      const auto mesh = time_mesh_for(boxes, ExtensionKind::poisson, cfg.floor_panels, cfg.nodes_per_panel);
      const auto u = build_stack(f, ExtensionKind::poisson, mesh);
      return id == ScalingNorm::scaled_h ? scaled_h_norm(u, alpha, boxes, opts).value
                                         : h_alpha2_norm(u, alpha, boxes, opts).value;
    }
  }
  return 0.0;
}

}  // namespace

ScalingReport check_scaling(const Field& f, ScalingNorm id, double alpha, int lambda, const VerifyConfig& cfg) {
  check_alpha(alpha, "check_scaling");
  if (lambda != 1 && lambda != 2) throw std::invalid_argument("check_scaling: lambda must be 1 or 2");
  const auto& grid = f.grid();
  // keep every ball a proper subset of the torus, and room for the halved radii
  VerifyConfig c = cfg;
  c.j_min = std::max(cfg.j_min, 2);
  c.j_max = std::min(cfg.j_max, log2_exact(grid.points_per_axis) - 1) - 1;
  const BoxFamily boxes = verify_family(grid, c);

  ScalingReport rep;
  rep.norm = std::string(to_string(id));
  rep.alpha = alpha;
  rep.lambda = lambda;
  rep.tolerance = cfg.scaling_tolerance;
  switch (id) {
    case ScalingNorm::campanato: rep.expected = alpha; break;
    case ScalingNorm::h_alpha2:
      rep.expected = alpha;
      rep.alternative = 2.0 * (alpha - 1.0);
      rep.gated = false;
      break;
    default: rep.expected = 0.0; break;
  }
  rep.value = scaling_value(f, id, alpha, boxes, cfg);
  if (lambda == 1) {
    rep.value_scaled = rep.value;
  } else {
    Field g(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto idx = grid.unflatten(i);
      for (int d = 0; d < grid.dims; ++d) idx[d] *= 2;
      g[i] = f[grid.wrap(idx)];
    }
    if (id == ScalingNorm::inverse_space) g *= 2.0;
    rep.value_scaled = scaling_value(g, id, alpha, boxes.halved(), cfg);
  }
  if (!(rep.value > 0.0)) throw std::domain_error("check_scaling: norm of the input vanishes");
  rep.measured = lambda == 1 ? 0.0 : std::log(rep.value_scaled / rep.value) / std::log(double(lambda));
  rep.pass = !rep.gated || (std::isfinite(rep.measured) && std::abs(rep.measured - rep.expected) <= rep.tolerance);
  return rep;
}

bool all_passed(const std::vector<EquivalenceReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

bool all_passed(const std::vector<ScalingReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

}  // namespace tlab
