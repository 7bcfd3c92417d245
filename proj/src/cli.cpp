#include "tlab/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tlab/extensions.hpp"
#include "tlab/field_io.hpp"

namespace tlab::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw UsageError("not a number: " + tok);
    out.push_back(v);
  }
  return out;
}

TorusGrid grid_of(const RunConfig& c) { return TorusGrid(c.dims, c.points_per_axis, c.period); }

BoxFamily boxes_of(const RunConfig& c, const TorusGrid& grid) {
  if (c.boxes.empty()) return BoxFamily::standard(grid);
  const auto parts = split(c.boxes, ':');
  if (parts.size() != 3) throw UsageError("--boxes expects jmin:jmax:stride");
  return BoxFamily::dyadic(grid, std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]));
}

void apply_boxes(RunConfig& c) {
  if (c.boxes.empty()) return;
  const auto parts = split(c.boxes, ':');
  if (parts.size() != 3) throw UsageError("--boxes expects jmin:jmax:stride");
  c.verify.j_min = std::stoi(parts[0]);
  c.verify.j_max = std::stoi(parts[1]);
  const int stride = std::stoi(parts[2]);
  if (stride < 1 || c.points_per_axis % stride != 0) throw UsageError("--boxes stride must divide the grid size");
  c.verify.centers_per_axis = c.points_per_axis / stride;
}

std::vector<CorpusSpec> corpus_of(const RunConfig& c) {
  if (c.corpus.empty()) return default_corpus(c.seed);
  return io::corpus_from_manifest(io::read_json(c.corpus));
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_run_files(const RunConfig& c, const std::vector<std::string>& outputs) {
  if (c.out.empty()) return;
  io::write_text(fs::path(c.out) / "run_config.json", to_json(c).dump(2) + "\n");
  io::Json m{{"timestamp", timestamp()}, {"command", c.command}, {"outputs", outputs}};
  io::write_text(fs::path(c.out) / "manifest.json", m.dump(2) + "\n");
}

// ---- corpus ---------------------------------------------------------------

int cmd_corpus(const RunConfig& c, bool fields, std::ostream& out) {
  const auto grid = grid_of(c);
  const auto corpus = corpus_of(c);
  const auto manifest = io::corpus_manifest(corpus, grid);
  if (c.out.empty()) {
    out << manifest.dump(2) << "\n";
    return 0;
  }
  std::vector<std::string> outputs{"corpus.json"};
  io::write_text(fs::path(c.out) / "corpus.json", manifest.dump(2) + "\n");
  if (fields) {
    fs::create_directories(c.out);
    for (const auto& s : corpus) {
      save_field(fs::path(c.out) / (s.name + ".bin"), generate(s, grid));
      outputs.push_back(s.name + ".bin");
    }
  }
  write_run_files(c, outputs);
  out << "wrote " << corpus.size() << " corpus members to " << c.out << "\n";
  return 0;
}

// ---- norm -----------------------------------------------------------------

Field input_field(const RunConfig& c) {
  if (!c.input.empty()) {
    if (!fs::exists(c.input)) throw std::runtime_error("input file not found: " + c.input);
    return load_field(c.input);
  }
  if (c.member.empty()) throw UsageError("norm needs --input FILE or --member NAME");
  for (const auto& s : corpus_of(c))
    if (s.name == c.member) return generate(s, grid_of(c));
  throw UsageError("no corpus member named " + c.member);
}

io::Json scalar_json(double v, const TorusGrid& g) { return {{"value", v}, {"grid", io::to_json(g)}}; }

int cmd_norm(const RunConfig& c, std::ostream& out) {
  const Field f = input_field(c);
  const auto& grid = f.grid();
  const BoxFamily boxes = boxes_of(c, grid);
  NormOptions opts;
  opts.backend = c.verify.backend;
  opts.keep_table = c.table;
  const double alpha = c.alphas.empty() ? 0.0 : c.alphas.front();
  const std::string& n = c.norm;

  auto stack = [&](ExtensionKind kind) { return build_stack(f, kind, time_mesh_for(boxes, kind)); };
  io::Json j;
  if (n == "campanato") j = io::to_json(campanato_norm(f, alpha, boxes, opts), boxes);
  else if (n == "campanato_pair") j = io::to_json(campanato_pair_norm(f, alpha, boxes, opts), boxes);
  else if (n == "q") j = io::to_json(q_norm(f, alpha, boxes, opts), boxes);
  else if (n == "frac_campanato") j = io::to_json(frac_campanato_norm(f, alpha, boxes, opts), boxes);
  else if (n == "inverse_space") j = io::to_json(inverse_space_norm(f, alpha, c.T, boxes, opts), boxes);
  else if (n == "h_alpha2") j = io::to_json(h_alpha2_norm(stack(ExtensionKind::poisson), alpha, boxes, opts), boxes);
  else if (n == "scaled_h") j = io::to_json(scaled_h_norm(stack(ExtensionKind::poisson), alpha, boxes, opts), boxes);
  else if (n == "star") j = io::to_json(star_norm(stack(ExtensionKind::poisson), alpha, boxes, opts), boxes);
  else if (n == "t_alpha2") j = io::to_json(t_alpha2_norm(stack(ExtensionKind::heat), alpha, boxes, opts), boxes);
  else if (n == "scaled_t") j = io::to_json(scaled_t_norm(stack(ExtensionKind::heat), alpha, boxes, opts), boxes);
  else if (n == "dagger") {
    const auto d = dagger_norm(stack(ExtensionKind::heat), alpha, boxes, opts);
    j = {{"value", d.displayed.value},
         {"displayed", io::to_json(d.displayed, boxes)},
         {"parabolic", io::to_json(d.parabolic, boxes)}};
  } else if (n == "bloch_hb") j = scalar_json(bloch_hb_norm(stack(ExtensionKind::poisson)), grid);
  else if (n == "bloch_cb") j = scalar_json(bloch_cb_norm(stack(ExtensionKind::heat)), grid);
  else if (n == "besov") j = scalar_json(besov_norm(f, besov_time_grid(grid, c.verify.besov_points)), grid);
  else throw UsageError("unknown norm: " + n);
  j["norm"] = n;
  j["alpha"] = alpha;

  if (c.out.empty()) {
    out << j.dump(2) << "\n";
  } else {
    io::write_text(c.out, j.dump(2) + "\n");
    out << n << " = " << io::format_double(j.at("value").get<double>()) << "\n";
  }
  return 0;
}

// ---- verify ---------------------------------------------------------------

const std::vector<double> kDefaultAlphas{-0.5, -0.25, 0.0, 0.25, 0.5};
const std::vector<double> kDefaultBetas{0.25, 0.5, 0.75};
const std::vector<double> kDefault42{-0.75, -0.5, -0.25, 0.25, 0.5, 0.75};

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
  for (double v : b)
    if (std::find(a.begin(), a.end(), v) == a.end()) a.push_back(v);
  return a;
}

void print_report(std::ostream& out, const EquivalenceReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(12) << r.theorem << std::setw(34) << (r.left + " / " + r.right) << " alpha "
     << std::setw(6) << r.alpha << std::setprecision(4) << " band [" << r.band_min << ", " << r.band_max
     << "] spread " << r.spread;
  if (r.refined) os << " drift " << r.drift;
  if (!r.skipped.empty()) os << " skipped " << r.skipped.size();
  os << (r.gate == Gate::none ? "  (reported)" : r.pass ? "  PASS" : "  FAIL");
  if (!r.note.empty()) os << "  " << r.note;
  out << os.str() << "\n";
}

int cmd_verify(RunConfig& c, std::ostream& out) {
  apply_boxes(c);
  const auto grid = grid_of(c);
  const auto corpus = corpus_of(c);
  std::vector<std::string> theorems = c.theorems;
  if (theorems.empty() || std::find(theorems.begin(), theorems.end(), "all") != theorems.end())
    theorems = {"2.1", "3.1", "4.1", "4.2", "2.2", "scaling", "inclusions"};

  const auto alphas = c.alphas.empty() ? kDefaultAlphas : c.alphas;
  const auto betas = c.betas.empty() ? kDefaultBetas : c.betas;
  std::vector<EquivalenceReport> reports;
  std::vector<ScalingReport> scalings;
  std::vector<std::string> outputs;
  bool ok = true;

  for (const auto& th : theorems) {
    std::vector<EquivalenceReport> part;
    if (th == "2.1") {
      for (double a : alphas) part.push_back(check_theorem_2_1(corpus, a, grid, c.verify));
    } else if (th == "3.1") {
      for (double a : merged(alphas, betas))
        for (auto& r : check_theorem_3_1(corpus, a, grid, c.verify)) part.push_back(std::move(r));
    } else if (th == "4.1") {
      for (double a : merged(alphas, betas))
        for (auto& r : check_theorem_4_1(corpus, a, grid, c.verify)) part.push_back(std::move(r));
    } else if (th == "4.2") {
      for (double a : c.alphas.empty() ? kDefault42 : c.alphas)
        part.push_back(check_theorem_4_2(corpus, a, grid, c.verify));
    } else if (th == "2.2") {
      for (double a : alphas) part.push_back(check_gradient_constant(corpus, a, grid, c.verify));
    } else if (th == "inclusions") {
      for (double b : betas)
        for (auto& r : check_inclusions(corpus, b, grid, c.verify)) part.push_back(std::move(r));
    } else if (th == "scaling") {
      std::vector<ScalingReport> sc;
      for (const auto& s : corpus) {
        const int band = s.kind == CorpusKind::single_mode ? s.mode : s.max_freq;
        if (4 * band >= c.points_per_axis) continue;
        const Field f = generate(s, grid);
        for (double a : c.alphas.empty() ? std::vector<double>{-0.5, 0.0, 0.5} : c.alphas)
          for (auto id : {ScalingNorm::campanato, ScalingNorm::frac_campanato, ScalingNorm::scaled_h,
                          ScalingNorm::inverse_space, ScalingNorm::h_alpha2}) {
            auto r = check_scaling(f, id, a, 2, c.verify);
            r.input = s.name;
            out << std::left << std::setw(16) << r.norm << std::setw(16) << r.input << " alpha " << std::setw(6)
                << a << " exponent " << std::setprecision(4) << r.measured << " expected " << r.expected
                << (r.gated ? (r.pass ? "  PASS" : "  FAIL") : "  (reported)") << "\n";
            sc.push_back(r);
          }
      }
      ok = ok && all_passed(sc);
      if (!c.out.empty()) {
        io::Json arr = io::Json::array();
        for (const auto& r : sc) arr.push_back(io::to_json(r));
        io::write_text(fs::path(c.out) / "verify_scaling.json", arr.dump(2) + "\n");
        std::ostringstream csv;
        io::write_scaling_csv(csv, sc);
        io::write_text(fs::path(c.out) / "scaling.csv", csv.str());
        outputs.push_back("verify_scaling.json");
        outputs.push_back("scaling.csv");
      }
      scalings.insert(scalings.end(), sc.begin(), sc.end());
      continue;
    } else {
      throw UsageError("unknown theorem: " + th);
    }
    for (const auto& r : part) print_report(out, r);
    ok = ok && all_passed(part);
    if (!c.out.empty()) {
      io::Json arr = io::Json::array();
      for (const auto& r : part) arr.push_back(io::to_json(r));
      const std::string name = "verify_" + th + ".json";
      io::write_text(fs::path(c.out) / name, arr.dump(2) + "\n");
      outputs.push_back(name);
    }
    reports.insert(reports.end(), part.begin(), part.end());
  }
  if (!c.out.empty()) {
    std::ostringstream csv;
    io::write_equivalence_csv(csv, reports);
    io::write_text(fs::path(c.out) / "summary.csv", csv.str());
    outputs.push_back("summary.csv");
    write_run_files(c, outputs);
  }
  out << (ok ? "all thresholds met" : "threshold exceeded") << "\n";
  return ok ? 0 : 1;
}

// ---- ns -------------------------------------------------------------------

int cmd_ns(RunConfig& c, std::ostream& out) {
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& text) {
    if (c.out.empty()) return;
    io::write_text(fs::path(c.out) / name, text);
    outputs.push_back(name);
  };
  int code = 0;
  if (c.probe == "smalldata") {
    if (!c.alphas.empty()) c.smalldata.alpha = c.alphas.front();
    const auto rep = ns::smalldata_probe(c.smalldata);
    std::ostringstream csv;
    io::write_smalldata_csv(csv, rep);
    emit("smalldata.csv", csv.str());
    emit("smalldata.json", io::to_json(rep).dump(2) + "\n");
    out << csv.str() << "linear ratio " << rep.linear_ratio << ", threshold " << rep.threshold << "\n";
    code = rep.contraction_regime ? 0 : 1;
  } else if (c.probe == "inflation") {
    if (!c.alphas.empty()) c.inflation.alpha = c.alphas.front();
    if (c.linear_only) c.inflation.nonlinear = false;
    const auto rep = ns::inflation_probe(c.inflation);
    std::ostringstream csv;
    io::write_inflation_csv(csv, rep);
    emit("inflation.csv", csv.str());
    emit("inflation.json", io::to_json(rep).dump(2) + "\n");
    out << csv.str();
    for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
  } else if (c.probe == "solve") {
    const TorusGrid grid(3, c.points_per_axis, c.period);
    auto a = ns::random_velocity(grid, c.seed, std::min(3, c.points_per_axis / 3 - 1));
    for (auto& comp : a.components) comp *= c.amplitude;
    ns::SolverOptions opts;
    opts.nonlinear = !c.linear_only;
    const double T = std::isfinite(c.T) ? c.T : 0.1;
    const auto trace = c.method == "ifrk4" ? ns::step_ifrk4(a, T, 200, opts)
                                           : ns::mild_solve_picard(a, T, c.smalldata.nodes, c.smalldata.max_iter,
                                                                   c.smalldata.tol, opts);
    io::Json nodes = io::Json::array();
    std::ostringstream csv;
    csv << "t,energy,divergence,max_abs\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
      const auto& s = trace.states[i];
      io::Json node{{"t", trace.times[i]}, {"energy", ns::kinetic_energy(s)}, {"divergence", ns::divergence_defect(s)}};
      if (!c.out.empty()) {
        io::Json files = io::Json::array();
        fs::create_directories(fs::path(c.out) / "trace");
        for (int k = 0; k < 3; ++k) {
          std::ostringstream name;
          name << "trace/node_" << std::setw(4) << std::setfill('0') << i << "_u" << k << ".bin";
          save_field(fs::path(c.out) / name.str(), s.components[k]);
          files.push_back(name.str());
        }
        node["files"] = files;
      }
      nodes.push_back(node);
      csv << io::format_double(trace.times[i]) << ',' << io::format_double(ns::kinetic_energy(s)) << ','
          << io::format_double(ns::divergence_defect(s)) << ',' << io::format_double(s.max_abs()) << '\n';
    }
    io::Json j{{"method", trace.method},   {"T", trace.T},
               {"nonlinear", opts.nonlinear}, {"converged", trace.converged},
               {"iterations", trace.iterations}, {"residual_history", trace.residual_history},
               {"warnings", trace.warnings}, {"initial_energy", ns::kinetic_energy(a)},
               {"grid", io::to_json(grid)},  {"nodes", nodes}};
    emit("trace.json", j.dump(2) + "\n");
    emit("trace.csv", csv.str());
    out << csv.str();
    code = trace.converged ? 0 : 1;
  } else {
    throw UsageError("--probe must be smalldata, inflation or solve");
  }
  write_run_files(c, outputs);
  return code;
}

}  // namespace

io::Json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"dims", c.dims},
          {"points_per_axis", c.points_per_axis},
          {"period", c.period},
          {"alphas", c.alphas},
          {"betas", c.betas},
          {"boxes", c.boxes},
          {"corpus", c.corpus},
          {"seed", c.seed},
          {"threads", c.threads},
          {"norm", c.norm},
          {"input", c.input},
          {"member", c.member},
          {"T", std::isfinite(c.T) ? io::Json(c.T) : io::Json("inf")},
          {"theorems", c.theorems},
          {"verify", io::to_json(c.verify)},
          {"probe", c.probe},
          {"linear_only", c.linear_only},
          {"amplitude", c.amplitude},
          {"method", c.method},
          {"smalldata", io::to_json(ns::SmallDataReport{c.smalldata, 0.0, {}, 0.0, false}).at("config")},
          {"inflation", io::to_json(ns::InflationReport{c.inflation, 0.0, 0.0, 0.0, 0.0, 0.0, {}}).at("config")}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tlab: Carleson-box norms, semigroup extensions and mild Navier-Stokes on the torus"};
  app.name("tlab");
  app.require_subcommand(1);
  RunConfig c;
  std::string alphas, betas, theorems, config_path, deltas, T;
  bool fields = false, no_refine = false;

  auto common = [&](CLI::App* s) {
    s->add_option("--grid", c.points_per_axis, "points per axis N (power of two)");
    s->add_option("--dims", c.dims, "dimension n (1, 2 or 3)");
    s->add_option("--period", c.period, "torus period L");
    s->add_option("--corpus", c.corpus, "corpus manifest JSON");
    s->add_option("--boxes", c.boxes, "box family jmin:jmax:stride");
    s->add_option("--out", c.out, "output directory (file for norm)");
    s->add_option("--seed", c.seed, "seed");
    s->add_option("--threads", c.threads, "worker cap");
    s->add_option("--config", config_path, "JSON config file");
    s->add_option("--alpha", alphas, "comma separated alpha list");
  };

  auto* corpus = app.add_subcommand("corpus", "write the corpus manifest (and optionally field binaries)");
  common(corpus);
  corpus->add_flag("--fields", fields, "also write one field binary per member");

  auto* norm = app.add_subcommand("norm", "evaluate one norm, write NormResult JSON");
  common(norm);
  norm->add_option("--norm", c.norm, "norm name")->required();
  norm->add_option("--input", c.input, "field binary");
  norm->add_option("--member", c.member, "corpus member name");
  norm->add_option("--T", T, "time horizon for inverse_space (default inf)");
  norm->add_flag("--table", c.table, "include the per-box table");

  auto* verify = app.add_subcommand("verify", "run theorem checks over the corpus");
  common(verify);
  verify->add_option("--theorem", theorems, "2.1,3.1,4.1,4.2,2.2,scaling,inclusions or all");
  verify->add_option("--beta", betas, "comma separated beta list");
  verify->add_option("--max-spread", c.verify.max_spread, "spread threshold");
  verify->add_option("--max-drift", c.verify.max_drift, "refinement drift threshold");
  verify->add_flag("--no-refine", no_refine, "skip the N -> 2N refinement");

  auto* nsc = app.add_subcommand("ns", "Navier-Stokes probes");
  common(nsc);
  nsc->add_option("--probe", c.probe, "smalldata, inflation or solve")->required();
  nsc->add_flag("--linear-only", c.linear_only, "drop the nonlinear term");
  nsc->add_option("--deltas", deltas, "small-data amplitude ladder");
  nsc->add_option("--epsilon", c.inflation.epsilon, "inflation data size");
  nsc->add_option("--modes", c.inflation.modes, "inflation mode count K");
  nsc->add_option("--amplitude", c.amplitude, "solve: data amplitude");
  nsc->add_option("--method", c.method, "solve: picard or ifrk4");
  nsc->add_option("--T", T, "solve: final time");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    // config file first, flags on top
    const auto* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    if (!config_path.empty()) {
      const auto j = io::read_json(config_path);
      const VerifyConfig flags = c.verify;
      if (j.contains("verify")) c.verify = io::verify_config_from_json(j.at("verify"), c.verify);
      if (verify->count("--max-spread")) c.verify.max_spread = flags.max_spread;
      if (verify->count("--max-drift")) c.verify.max_drift = flags.max_drift;
      if (j.contains("smalldata")) c.smalldata = io::smalldata_config_from_json(j.at("smalldata"), c.smalldata);
      if (j.contains("inflation")) {
        const auto eps = c.inflation.epsilon;
        const auto modes = c.inflation.modes;
        c.inflation = io::inflation_config_from_json(j.at("inflation"), c.inflation);
        if (nsc->count("--epsilon")) c.inflation.epsilon = eps;
        if (nsc->count("--modes")) c.inflation.modes = modes;
      }
    }
    if (!alphas.empty()) c.alphas = parse_list(alphas);
    if (!betas.empty()) c.betas = parse_list(betas);
    if (!theorems.empty()) c.theorems = split(theorems);
    if (!deltas.empty()) c.smalldata.deltas = parse_list(deltas);
    if (!T.empty()) c.T = T == "inf" ? kInfiniteTime : parse_list(T).at(0);
    if (no_refine) c.verify.refine = false;
    if (c.command == "ns" && !sub->count("--grid")) c.points_per_axis = 32;
    if (c.command == "ns" && sub->count("--grid")) {
      c.smalldata.points_per_axis = c.points_per_axis;
      c.inflation.points_per_axis = c.points_per_axis;
    }
    if (c.command == "ns" && sub->count("--seed")) c.smalldata.seed = c.inflation.seed = c.seed;
    if (c.threads > 0) omp_set_num_threads(c.threads);

    if (c.command == "corpus") return cmd_corpus(c, fields, out);
    if (c.command == "norm") return cmd_norm(c, out);
    if (c.command == "verify") return cmd_verify(c, out);
    return cmd_ns(c, out);
  } catch (const std::exception& e) {
    err << "tlab: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tlab::cli
