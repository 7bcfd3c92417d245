#include "tlab/ns3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"
#include "tlab/spectral.hpp"

namespace tlab::ns {

namespace {

using Modes = std::vector<Complex>;
using State = std::array<Modes, 3>;

void require_3d(const TorusGrid& g, const char* who) {
  if (g.dims != 3) throw std::invalid_argument(std::string(who) + ": needs a 3D grid");
}

// Per-mode data shared by every operator on one grid.
struct Operators {
  TorusGrid grid;
  std::vector<std::array<double, 3>> kappa;  // 2 pi k / L
  std::vector<double> rate;                  // |kappa|^2
  std::vector<char> keep;                    // 2/3 rule mask
  std::vector<char> shell;                   // top of the retained band
  std::vector<int> k2;                       // integer |k|^2
  double inv_size = 1.0;

  explicit Operators(const TorusGrid& g) : grid(g) {
    require_3d(g, "ns");
    const std::size_t n = g.size();
    kappa.resize(n);
    rate.resize(n);
    keep.resize(n);
    shell.resize(n);
    k2.resize(n);
    inv_size = 1.0 / static_cast<double>(n);
    const int cut = g.points_per_axis / 3;
    const double two_pi_l = 2.0 * std::numbers::pi / g.period;
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = g.unflatten(i);
      int kmax = 0;
      bool nyq = false;
      for (int d = 0; d < 3; ++d) {
        const int k = g.frequency(idx[d]);
        nyq = nyq || g.is_nyquist(idx[d]);
        kmax = std::max(kmax, std::abs(k));
        kappa[i][d] = nyq ? 0.0 : two_pi_l * k;
      }
      // the Nyquist planes carry no odd symbol; keep the even heat symbol exact
      int q = 0;
      for (int d = 0; d < 3; ++d) q += g.frequency(idx[d]) * g.frequency(idx[d]);
      k2[i] = q;
      rate[i] = two_pi_l * two_pi_l * q;
      keep[i] = kmax <= cut && !nyq;
      shell[i] = kmax > 0.8 * cut && kmax <= cut;
    }
  }
};

State to_spectral(const VelocityField& u) {
  State s;
  std::vector<Complex> in(u.grid.size());
  const double scale = 1.0 / static_cast<double>(u.grid.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = u.components[c][i];
    s[c].resize(in.size());
    detail::dft(u.grid, in, s[c], -1);
    for (auto& v : s[c]) v *= scale;
  }
  return s;
}

VelocityField to_physical(const TorusGrid& g, const State& s) {
  VelocityField u(g);
  std::vector<Complex> out(g.size());
  for (int c = 0; c < 3; ++c) {
    detail::dft(g, s[c], out, +1);
    auto samples = u.components[c].samples();
    for (std::size_t i = 0; i < out.size(); ++i) samples[i] = out[i].real();
  }
  return u;
}

void leray(const Operators& ops, State& s) {
  for (std::size_t i = 0; i < ops.rate.size(); ++i) {
    const auto& k = ops.kappa[i];
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) continue;
    const Complex dot = k[0] * s[0][i] + k[1] * s[1][i] + k[2] * s[2][i];
    for (int c = 0; c < 3; ++c) s[c][i] -= k[c] * dot / k2;
  }
}

// -P div(u x u), 3 inverse and 6 forward transforms.
class Nonlinearity {
 public:
  Nonlinearity(const Operators& ops, const SolverOptions& opts)
      : ops_(ops), opts_(opts), work_(ops.grid.size()), phys_{} {
    for (auto& p : phys_) p.resize(ops.grid.size());
  }

  State operator()(const State& u) {
    const std::size_t n = ops_.grid.size();
    State out;
    for (auto& c : out) c.assign(n, Complex(0.0, 0.0));
    last_max_ = 0.0;
    if (!opts_.nonlinear) return out;
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < n; ++i) work_[i] = (!opts_.dealias || ops_.keep[i]) ? u[c][i] : Complex(0.0);
      detail::dft(ops_.grid, work_, phys_[c], +1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::sqrt(std::norm(phys_[0][i].real()) + std::norm(phys_[1][i].real()) +
                                 std::norm(phys_[2][i].real()));
      last_max_ = std::max(last_max_, m);
    }
    std::vector<Complex> prod(n), prod_hat(n);
    for (int j = 0; j < 3; ++j) {
      for (int l = j; l < 3; ++l) {
        for (std::size_t i = 0; i < n; ++i) prod[i] = phys_[j][i].real() * phys_[l][i].real();
        detail::dft(ops_.grid, prod, prod_hat, -1);
        for (std::size_t i = 0; i < n; ++i) {
          const Complex p = prod_hat[i] * ops_.inv_size;
          // d_l (u_j u_l) contributes to component j, d_j (u_j u_l) to component l
          out[j][i] -= Complex(0.0, ops_.kappa[i][l]) * p;
          if (l != j) out[l][i] -= Complex(0.0, ops_.kappa[i][j]) * p;
        }
      }
    }
    leray(ops_, out);
    if (opts_.dealias)
      for (auto& c : out)
        for (std::size_t i = 0; i < n; ++i)
          if (!ops_.keep[i]) c[i] = 0.0;
    return out;
  }

  double last_max_velocity() const { return last_max_; }

 private:
  const Operators& ops_;
  SolverOptions opts_;
  std::vector<Complex> work_;
  std::array<std::vector<Complex>, 3> phys_;
  double last_max_ = 0.0;
};

State heat(const Operators& ops, const State& s, double t) {
  State out = s;
  for (std::size_t i = 0; i < ops.rate.size(); ++i) {
    const double e = std::exp(-ops.rate[i] * t);
    for (int c = 0; c < 3; ++c) out[c][i] *= e;
  }
  return out;
}

// out = x + c y
void axpy(State& x, double c, const State& y) {
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < x[k].size(); ++i) x[k][i] += c * y[k][i];
}

double state_norm(const State& s) {
  double acc = 0.0;
  for (const auto& c : s)
    for (const auto& v : c) acc += std::norm(v);
  return std::sqrt(acc);
}

double state_difference(const State& a, const State& b) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a[c].size(); ++i) acc += std::norm(a[c][i] - b[c][i]);
  return std::sqrt(acc);
}

// M_p = int_0^D tau^p e^{-a tau} dtau for p = 0, 1, 2
std::array<double, 3> exp_moments(double a, double D) {
  const double x = a * D;
  std::array<double, 3> m{0.0, 0.0, 0.0};
  if (x < 1.0) {
    // sum_n (-x)^n / (n! (n + p + 1))
    double term = 1.0;
    for (int n = 0; n < 30; ++n) {
      for (int p = 0; p < 3; ++p) m[p] += term / (n + p + 1);
      term *= -x / (n + 1);
    }
    m[0] *= D;
    m[1] *= D * D;
    m[2] *= D * D * D;
    return m;
  }
  const double e = std::exp(-x);
  m[0] = (1.0 - e) / a;
  m[1] = (1.0 - e * (1.0 + x)) / (a * a);
  m[2] = (2.0 - e * (2.0 + 2.0 * x + x * x)) / (a * a * a);
  return m;
}

// Weights of N at tau = 0, D, D + E (tau = t_i - s) for
// int_0^D e^{-a tau} N(t_i - tau) dtau with N quadratic through the three nodes.
std::array<double, 3> duhamel_weights(double a, double D, double E) {
  const auto m = exp_moments(a, D);
  const double w0 = (m[2] - (2.0 * D + E) * m[1] + D * (D + E) * m[0]) / (D * (D + E));
  const double w1 = -(m[2] - (D + E) * m[1]) / (D * E);
  const double w2 = (m[2] - D * m[1]) / ((D + E) * E);
  return {w0, w1, w2};
}

// Same, with the third node ahead: tau = 0, D and -F (s = t_i + F).
std::array<double, 3> duhamel_weights_forward(double a, double D, double F) {
  const auto m = exp_moments(a, D);
  // basis polynomials in tau through 0, D, -F
  const double w0 = (m[2] - (D - F) * m[1] - D * F * m[0]) / (-D * F);
  const double w1 = (m[2] + F * m[1]) / (D * (D + F));
  const double w2 = (m[2] - D * m[1]) / (F * (D + F));
  return {w0, w1, w2};
}

void check_finite(const VelocityField& a, const char* who) {
  for (const auto& c : a.components)
    for (double v : c.samples())
      if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite data");
}

}  // namespace

VelocityField::VelocityField(const TorusGrid& g) : grid(g), components{Field(g), Field(g), Field(g)} {
  require_3d(g, "VelocityField");
}

VelocityField::VelocityField(const TorusGrid& g, std::array<Field, 3> c) : grid(g), components(std::move(c)) {
  require_3d(g, "VelocityField");
  for (const auto& f : components)
    if (!(f.grid() == g)) throw std::invalid_argument("VelocityField: components on different grids");
}

double VelocityField::max_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = components[0][i] * components[0][i] + components[1][i] * components[1][i] +
                     components[2][i] * components[2][i];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

double divergence_defect(const VelocityField& u) {
  const auto s = to_spectral(u);
  const double two_pi_l = 2.0 * std::numbers::pi / u.grid.period;
  double top = 0.0, div = 0.0;
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    const auto idx = u.grid.unflatten(i);
    Complex d = 0.0;
    double mag = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double k = u.grid.is_nyquist(idx[c]) ? 0.0 : two_pi_l * u.grid.frequency(idx[c]);
      d += k * s[c][i];
      mag += std::norm(s[c][i]);
    }
    top = std::max(top, std::sqrt(mag));
    div = std::max(div, std::abs(d) / two_pi_l);
  }
  return top == 0.0 ? 0.0 : div / top;
}

double kinetic_energy(const VelocityField& u) {
  double acc = 0.0;
  for (const auto& c : u.components)
    for (double v : c.samples()) acc += v * v;
  return 0.5 * acc * u.grid.cell_volume();
}

double l2_norm(const VelocityField& u) { return std::sqrt(2.0 * kinetic_energy(u)); }

double relative_l2_difference(const VelocityField& a, const VelocityField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("relative_l2_difference: grids differ");
  double num = 0.0, den = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
      const double d = a.components[c][i] - b.components[c][i];
      num += d * d;
      den += b.components[c][i] * b.components[c][i];
    }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

VelocityField make_divergence_free(const std::array<Field, 3>& v) {
  const TorusGrid g = v[0].grid();
  require_3d(g, "make_divergence_free");
  const VelocityField in(g, v);
  const Operators ops(g);
  auto s = to_spectral(in);
  leray(ops, s);
  // the odd symbol drops the Nyquist planes; drop them from the field too
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    if (g.is_nyquist(idx[0]) || g.is_nyquist(idx[1]) || g.is_nyquist(idx[2]))
      for (auto& c : s) c[i] = 0.0;
  }
  return to_physical(g, s);
}

VelocityField dilate(const VelocityField& u) {
  VelocityField out(u.grid);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < u.grid.size(); ++i) {
      auto idx = u.grid.unflatten(i);
      for (int d = 0; d < 3; ++d) idx[d] *= 2;
      out.components[c][i] = 2.0 * u.components[c][u.grid.wrap(idx)];
    }
  return out;
}

double dealias_shell_fraction(const VelocityField& u) {
  const Operators ops(u.grid);
  const auto s = to_spectral(u);
  double total = 0.0, shell = 0.0;
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    double e = 0.0;
    for (const auto& c : s) e += std::norm(c[i]);
    total += e;
    if (ops.shell[i]) shell += e;
  }
  return total == 0.0 ? 0.0 : shell / total;
}

std::vector<double> graded_times(double T, int m) {
  if (!(T > 0.0) || m < 1) throw std::invalid_argument("graded_times: need T > 0 and m >= 1");
  std::vector<double> t(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    const double s = double(i) / m;
    t[i - 1] = T * s * s;
  }
  t.back() = T;
  return t;
}

NSTrace mild_solve_picard(const VelocityField& a, double T, int m, int max_iter, double tol,
                          const SolverOptions& opts) {
  require_3d(a.grid, "mild_solve_picard");
  check_finite(a, "mild_solve_picard");
  if (max_iter < 1 || !(tol > 0.0)) throw std::invalid_argument("mild_solve_picard: bad iteration controls");
  const Operators ops(a.grid);
  Nonlinearity nonlinear(ops, opts);
  const auto times = graded_times(T, m);
  const std::size_t n = a.grid.size();

  const State a_hat = to_spectral(a);
  std::vector<State> u(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) u[i] = heat(ops, a_hat, times[i]);

  NSTrace trace;
  trace.method = "picard";
  trace.T = T;
  trace.initial = a;
  trace.times = times;
  trace.options = opts;
  trace.converged = false;

  const bool linear = !opts.nonlinear || state_norm(a_hat) == 0.0;
  if (linear) {
    trace.converged = true;
    trace.residual_history.push_back(0.0);
  }
  const double blowup = 1e8 * std::max(state_norm(a_hat), 1e-300);
  std::vector<State> nl(times.size() + 1);  // nonlinear term at t_0 = 0, t_1, ..., t_m
  if (!linear) nl[0] = nonlinear(a_hat);
  const int max_k2 = *std::max_element(ops.k2.begin(), ops.k2.end());
  std::vector<double> t{0.0};
  t.insert(t.end(), times.begin(), times.end());
  for (int it = 0; it < max_iter && !linear; ++it) {
    for (std::size_t i = 0; i < times.size(); ++i) nl[i + 1] = nonlinear(u[i]);
    State duhamel;
    for (auto& c : duhamel) c.assign(n, Complex(0.0));
    double residual = 0.0;
    bool blew_up = false;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double D = t[i] - t[i - 1];
      const bool back = i >= 2;
      if (!back && t.size() < 3) throw std::invalid_argument("mild_solve_picard: need at least two nodes");
      const std::size_t third = back ? i - 2 : i + 1;
      // weights depend on the mode only through |k|^2
      const double unit = 4.0 * std::numbers::pi * std::numbers::pi / (a.grid.period * a.grid.period);
      std::vector<std::array<double, 4>> table(static_cast<std::size_t>(max_k2) + 1);
      for (int q = 0; q <= max_k2; ++q) {
        const double rate = unit * q;
        const auto w = back ? duhamel_weights(rate, D, t[i - 1] - t[i - 2])
                            : duhamel_weights_forward(rate, D, t[i + 1] - t[i]);
        table[q] = {std::exp(-rate * D), w[0], w[1], w[2]};
      }
      for (std::size_t k = 0; k < n; ++k) {
        const auto& w = table[ops.k2[k]];
        for (int c = 0; c < 3; ++c)
          duhamel[c][k] = w[0] * duhamel[c][k] + w[1] * nl[i][c][k] + w[2] * nl[i - 1][c][k] + w[3] * nl[third][c][k];
      }
      State next = heat(ops, a_hat, t[i]);
      axpy(next, 1.0, duhamel);
      const double size = state_norm(next);
      if (!std::isfinite(size) || size > blowup) blew_up = true;
      residual = std::max(residual, state_difference(next, u[i - 1]) / std::max(size, 1e-300));
      u[i - 1] = std::move(next);
    }
    trace.iterations = it + 1;
    trace.residual_history.push_back(residual);
    if (blew_up || !std::isfinite(residual) || residual > 1e6) {
      trace.warnings.push_back("picard iteration diverged");
      break;
    }
    if (residual <= tol) {
      trace.converged = true;
      break;
    }
  }
  if (!trace.converged && trace.warnings.empty()) {
    std::ostringstream os;
    os << "picard iteration did not contract within " << max_iter << " iterations, residual "
       << trace.residual_history.back();
    trace.warnings.push_back(os.str());
  }
  for (const auto& s : u) trace.states.push_back(to_physical(a.grid, s));
  return trace;
}

NSTrace step_ifrk4(const VelocityField& a, double T, int steps, const SolverOptions& opts) {
  require_3d(a.grid, "step_ifrk4");
  check_finite(a, "step_ifrk4");
  if (!(T > 0.0) || steps < 1) throw std::invalid_argument("step_ifrk4: need T > 0 and steps >= 1");
  const Operators ops(a.grid);
  Nonlinearity nonlinear(ops, opts);
  const double h = T / steps;
  const double dx = a.grid.spacing();

  NSTrace trace;
  trace.method = "ifrk4";
  trace.T = T;
  trace.initial = a;
  trace.options = opts;
  trace.iterations = steps;

  State u = to_spectral(a);
  bool warned = false;
  for (int s = 0; s < steps; ++s) {
    const State ka = nonlinear(u);
    if (!warned && opts.nonlinear && nonlinear.last_max_velocity() * h / dx > 0.5) {
      std::ostringstream os;
      os << "CFL number " << nonlinear.last_max_velocity() * h / dx << " exceeds 0.5 at step " << s;
      trace.warnings.push_back(os.str());
      warned = true;
    }
    State stage = u;
    axpy(stage, h / 2.0, ka);
    const State kb = nonlinear(heat(ops, stage, h / 2.0));
    const State eu = heat(ops, u, h / 2.0);
    stage = eu;
    axpy(stage, h / 2.0, kb);
    const State kc = nonlinear(stage);
    stage = heat(ops, u, h);
    axpy(stage, h, heat(ops, kc, h / 2.0));
    const State kd = nonlinear(stage);

    State next = heat(ops, u, h);
    axpy(next, h / 6.0, heat(ops, ka, h));
    State mid = kb;
    axpy(mid, 1.0, kc);
    axpy(next, h / 3.0, heat(ops, mid, h / 2.0));
    axpy(next, h / 6.0, kd);
    u = std::move(next);
    if (!std::isfinite(state_norm(u))) {
      trace.converged = false;
      trace.warnings.push_back("ifrk4 produced non-finite values");
      break;
    }
    trace.times.push_back(s + 1 == steps ? T : h * (s + 1));
    trace.states.push_back(to_physical(a.grid, u));
  }
  return trace;
}

double initial_data_norm(const VelocityField& a, double alpha, double T, const BoxFamily& boxes,
                         const NormOptions& opts) {
  double sum = 0.0;
  for (const auto& c : a.components) sum += inverse_space_norm(c, alpha, T, boxes, opts).value;
  return sum;
}

SolutionNorm solution_x_norm(const NSTrace& trace, double alpha, double T, const BoxFamily& boxes,
                             const NormOptions& opts) {
  if (trace.states.empty()) throw std::invalid_argument("solution_x_norm: empty trace");
  SolutionNorm out;
  for (int c = 0; c < 3; ++c) {
    ScalarTrace s;
    s.times = trace.times;
    for (const auto& st : trace.states) s.fields.push_back(st.components[c]);
    s.initial = &trace.initial.components[c];
    const auto r = x_space_norm(s, alpha, T, boxes, opts);
    out.sup_part += r.sup_part;
    out.carleson_part += r.carleson_part;
  }
  out.total = out.sup_part + out.carleson_part;
  return out;
}

VelocityField random_velocity(const TorusGrid& grid, std::uint64_t seed, int max_freq) {
  require_3d(grid, "random_velocity");
  if (max_freq < 1 || max_freq >= grid.points_per_axis / 3)
    throw std::invalid_argument("random_velocity: max_freq must lie in [1, N/3)");
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::array<SpectralField, 3> s{SpectralField(grid), SpectralField(grid), SpectralField(grid)};
  for (int kx = -max_freq; kx <= max_freq; ++kx)
    for (int ky = -max_freq; ky <= max_freq; ++ky)
      for (int kz = -max_freq; kz <= max_freq; ++kz) {
        const bool upper = kx > 0 || (kx == 0 && (ky > 0 || (ky == 0 && kz > 0)));
        if (!upper) continue;
        const double k = std::sqrt(double(kx * kx + ky * ky + kz * kz));
        for (auto& comp : s) {
          const Complex c(n01(eng) / k, n01(eng) / k);
          comp.coefficients[grid.wrap({kx, ky, kz})] += c;
          comp.coefficients[grid.wrap({-kx, -ky, -kz})] += std::conj(c);
        }
      }
  VelocityField u = make_divergence_free({inverse_transform(s[0]), inverse_transform(s[1]), inverse_transform(s[2])});
  const double m = u.max_abs();
  for (auto& c : u.components) c *= 1.0 / m;
  return u;
}

namespace {

BoxFamily probe_family(const TorusGrid& grid, int stride) {
  return BoxFamily::dyadic(grid, 1, log2_exact(grid.points_per_axis) - 1, stride);
}

VelocityField scaled(const VelocityField& u, double c) {
  VelocityField out = u;
  for (auto& f : out.components) f *= c;
  return out;
}

double sup_sqrt_t(const NSTrace& trace) {
  double best = 0.0;
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    best = std::max(best, std::sqrt(trace.times[i]) * trace.states[i].max_abs());
  return best;
}

}  // namespace

SmallDataReport smalldata_probe(const SmallDataConfig& cfg) {
  const TorusGrid grid(3, cfg.points_per_axis);
  const BoxFamily boxes = probe_family(grid, cfg.box_stride);
  SmallDataReport rep;
  rep.config = cfg;
  const VelocityField shape = random_velocity(grid, cfg.seed, cfg.max_freq);
  const double unit = initial_data_norm(shape, cfg.alpha, cfg.T, boxes);
  if (!(unit > 0.0)) throw std::domain_error("smalldata_probe: the data shape has zero norm");
  const VelocityField a0 = scaled(shape, 1.0 / unit);

  SolverOptions linear;
  linear.nonlinear = false;
  rep.linear_ratio =
      solution_x_norm(mild_solve_picard(a0, cfg.T, cfg.nodes, 1, cfg.tol, linear), cfg.alpha, cfg.T, boxes).total;

  bool still_contracting = true;
  for (double delta : cfg.deltas) {
    if (delta < 0.0) throw std::invalid_argument("smalldata_probe: negative amplitude");
    SmallDataRow row;
    row.delta = delta;
    const VelocityField a = scaled(a0, delta);
    const auto trace = mild_solve_picard(a, cfg.T, cfg.nodes, cfg.max_iter, cfg.tol);
    row.converged = trace.converged;
    row.iterations = trace.iterations;
    row.residual = trace.residual_history.empty() ? 0.0 : trace.residual_history.back();
    row.initial_norm = initial_data_norm(a, cfg.alpha, cfg.T, boxes);
    if (trace.converged) {
      const auto x = solution_x_norm(trace, cfg.alpha, cfg.T, boxes);
      row.solution_norm = x.total;
      row.sup_part = x.sup_part;
      row.carleson_part = x.carleson_part;
      row.ratio = delta > 0.0 ? x.total / delta : 0.0;
    } else {
      row.solution_norm = row.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    const bool ok = row.converged && (delta == 0.0 || row.ratio <= cfg.max_ratio);
    if (ok && still_contracting) {
      rep.threshold = std::max(rep.threshold, delta);
      if (delta > 0.0) rep.contraction_regime = true;
    } else {
      still_contracting = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

VelocityField shear_modes(const TorusGrid& grid, int modes, int base_freq, std::uint64_t seed) {
  require_3d(grid, "shear_modes");
  if (modes < 1 || base_freq < 1) throw std::invalid_argument("shear_modes: need K >= 1 and F >= 1");
  if (std::max(base_freq, modes - 1) >= grid.points_per_axis / 3)
    throw std::invalid_argument("shear_modes: modes exceed the dealiased band");
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::array<std::vector<double>, 3> v;
  for (auto& c : v) c.assign(grid.size(), 0.0);
  for (int j = 0; j < modes; ++j) {
    const std::array<double, 3> k{double(base_freq), double(j), 0.0};
    std::array<double, 3> e{0.0, 0.0, 1.0};
    if (j % 2 == 1) {
      const double norm = std::hypot(k[0], k[1]);
      e = {k[1] / norm, -k[0] / norm, 0.0};
    }
    const double ph = phase(eng);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.coordinates(i);
      const double w = std::cos(2.0 * std::numbers::pi * (k[0] * x[0] + k[1] * x[1]) / grid.period + ph);
      for (int c = 0; c < 3; ++c) v[c][i] += e[c] * w;
    }
  }
  return VelocityField(grid, {Field(grid, v[0]), Field(grid, v[1]), Field(grid, v[2])});
}

InflationReport inflation_probe(const InflationConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::domain_error("inflation_probe: alpha must lie in (0, 1)");
  if (!(cfg.epsilon >= 0.0)) throw std::invalid_argument("inflation_probe: epsilon must be nonnegative");
  const TorusGrid grid(3, cfg.points_per_axis);
  const BoxFamily boxes = probe_family(grid, cfg.box_stride);
  InflationReport rep;
  rep.config = cfg;
  const VelocityField shape = shear_modes(grid, cfg.modes, cfg.base_freq, cfg.seed);
  const double unit = initial_data_norm(shape, cfg.alpha, cfg.T, boxes);
  if (!(unit > 0.0)) throw std::domain_error("inflation_probe: no box fits below T, the data norm vanishes");
  const VelocityField a = scaled(shape, cfg.epsilon / unit);
  rep.initial_norm = initial_data_norm(a, cfg.alpha, cfg.T, boxes);

  SolverOptions full;
  full.nonlinear = cfg.nonlinear;
  SolverOptions off;
  off.nonlinear = false;
  const auto run = step_ifrk4(a, cfg.T, cfg.steps, full);
  const auto lin = step_ifrk4(a, cfg.T, cfg.steps, off);
  rep.sup_nonlinear = sup_sqrt_t(run);
  rep.sup_linear = sup_sqrt_t(lin);
  rep.growth_ratio = rep.sup_linear > 0.0 ? rep.sup_nonlinear / rep.sup_linear : 1.0;
  rep.warnings = run.warnings;
  for (const auto& s : run.states) rep.shell_fraction = std::max(rep.shell_fraction, dealias_shell_fraction(s));
  if (rep.shell_fraction > 1e-3) {
    std::ostringstream os;
    os << "under-resolved: energy fraction " << rep.shell_fraction << " reached the dealiasing shell";
    rep.warnings.push_back(os.str());
  }
  return rep;
}

}  // namespace tlab::ns
