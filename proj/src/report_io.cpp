#include "tlab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tlab::io {

namespace {

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

template <class T>
void take(const Json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

std::string_view gate_name(Gate g) {
  switch (g) {
    case Gate::none: return "none";
    case Gate::drift: return "drift";
    case Gate::spread_and_drift: return "spread_and_drift";
  }
  return "none";
}

Json members_json(const std::vector<MemberRatio>& members) {
  Json a = Json::array();
  for (const auto& m : members) a.push_back({{"name", m.name}, {"left", m.left}, {"right", m.right}, {"ratio", m.ratio}});
  return a;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json to_json(const TorusGrid& grid) {
  return {{"dims", grid.dims}, {"points_per_axis", grid.points_per_axis}, {"period", grid.period}};
}

TorusGrid grid_from_json(const Json& j) {
  return TorusGrid(j.at("dims").get<int>(), j.at("points_per_axis").get<int>(), j.value("period", 1.0));
}

Json to_json(const BoxFamily& boxes) {
  return {{"j_min", boxes.j_min},   {"j_max", boxes.j_max},         {"stride", boxes.stride},
          {"scale", boxes.scale},   {"centers", boxes.centers.size()}, {"radii", boxes.radii}};
}

Json to_json(const NormResult& r, const BoxFamily& boxes) {
  Json j{{"value", r.value},
         {"arg_box",
          {{"center_index", r.arg_center},
           {"center", std::vector<double>(r.arg_point.begin(), r.arg_point.begin() + boxes.grid.dims)},
           {"radius", r.arg_radius}}},
         {"removed_mean", r.removed_mean},
         {"truncation_bound", r.truncation_bound},
         {"grid", to_json(boxes.grid)},
         {"boxes", to_json(boxes)}};
  if (!r.per_box.empty()) {
    Json rows = Json::array();
    for (const auto& b : r.per_box) rows.push_back({b.center, b.radius, b.value_sq});
    j["per_box"] = rows;
  }
  return j;
}

Json to_json(const CorpusSpec& s) {
  return {{"name", s.name},       {"seed", s.seed},           {"kind", std::string(to_string(s.kind))},
          {"max_freq", s.max_freq}, {"decay", s.decay},       {"amplitude", s.amplitude},
          {"mode", s.mode},       {"width", s.width}};
}

CorpusSpec corpus_spec_from_json(const Json& j) {
  CorpusSpec s;
  take(j, "name", s.name);
  take(j, "seed", s.seed);
  s.kind = corpus_kind_from_string(j.at("kind").get<std::string>());
  take(j, "max_freq", s.max_freq);
  take(j, "decay", s.decay);
  take(j, "amplitude", s.amplitude);
  take(j, "mode", s.mode);
  take(j, "width", s.width);
  return s;
}

Json corpus_manifest(const std::vector<CorpusSpec>& corpus, const TorusGrid& grid) {
  Json members = Json::array();
  for (const auto& s : corpus) {
    Json m = to_json(s);
    m["hash"] = hex(content_hash(generate(s, grid)));
    members.push_back(m);
  }
  return {{"grid", to_json(grid)}, {"members", members}};
}

std::vector<CorpusSpec> corpus_from_manifest(const Json& j) {
  std::vector<CorpusSpec> out;
  for (const auto& m : j.at("members")) out.push_back(corpus_spec_from_json(m));
  return out;
}

Json to_json(const VerifyConfig& c) {
  return {{"centers_per_axis", c.centers_per_axis},
          {"j_min", c.j_min},
          {"j_max", c.j_max},
          {"max_spread", c.max_spread},
          {"max_drift", c.max_drift},
          {"scaling_tolerance", c.scaling_tolerance},
          {"refine", c.refine},
          {"floor_panels", c.floor_panels},
          {"nodes_per_panel", c.nodes_per_panel},
          {"besov_points", c.besov_points},
          {"backend", std::string(kernels::to_string(c.backend))}};
}

VerifyConfig verify_config_from_json(const Json& j, VerifyConfig c) {
  take(j, "centers_per_axis", c.centers_per_axis);
  take(j, "j_min", c.j_min);
  take(j, "j_max", c.j_max);
  take(j, "max_spread", c.max_spread);
  take(j, "max_drift", c.max_drift);
  take(j, "scaling_tolerance", c.scaling_tolerance);
  take(j, "refine", c.refine);
  take(j, "floor_panels", c.floor_panels);
  take(j, "nodes_per_panel", c.nodes_per_panel);
  take(j, "besov_points", c.besov_points);
  if (j.contains("backend")) c.backend = kernels::backend_from_string(j.at("backend").get<std::string>());
  return c;
}

Json to_json(const EquivalenceReport& r) {
  Json j{{"theorem", r.theorem},
         {"left", r.left},
         {"right", r.right},
         {"alpha", r.alpha},
         {"points_per_axis", r.points_per_axis},
         {"band", {r.band_min, r.band_max}},
         {"spread", r.spread},
         {"refined", r.refined},
         {"gate", std::string(gate_name(r.gate))},
         {"pass", r.pass},
         {"members", members_json(r.members)},
         {"skipped", r.skipped}};
  if (r.refined) {
    j["refined_band"] = {r.refined_min, r.refined_max};
    j["drift"] = r.drift;
    j["refined_members"] = members_json(r.refined_members);
  }
  if (std::isfinite(r.max_ratio_allowed)) j["max_ratio_allowed"] = r.max_ratio_allowed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const ScalingReport& r) {
  Json j{{"norm", r.norm},         {"input", r.input},       {"alpha", r.alpha},
         {"lambda", r.lambda},     {"value", r.value},       {"value_scaled", r.value_scaled},
         {"measured", r.measured}, {"expected", r.expected}, {"tolerance", r.tolerance},
         {"gated", r.gated},       {"pass", r.pass}};
  if (!std::isnan(r.alternative)) j["alternative"] = r.alternative;
  return j;
}

Json to_json(const ns::SmallDataReport& r) {
  const auto& c = r.config;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"delta", row.delta},
                    {"converged", row.converged},
                    {"iterations", row.iterations},
                    {"residual", row.residual},
                    {"initial_norm", row.initial_norm},
                    {"solution_norm", row.solution_norm},
                    {"sup_part", row.sup_part},
                    {"carleson_part", row.carleson_part},
                    {"ratio", row.ratio}});
  return {{"config",
           {{"deltas", c.deltas},
            {"alpha", c.alpha},
            {"T", c.T},
            {"points_per_axis", c.points_per_axis},
            {"nodes", c.nodes},
            {"max_iter", c.max_iter},
            {"tol", c.tol},
            {"seed", c.seed},
            {"max_freq", c.max_freq},
            {"box_stride", c.box_stride},
            {"max_ratio", c.max_ratio}}},
          {"linear_ratio", r.linear_ratio},
          {"threshold", r.threshold},
          {"contraction_regime", r.contraction_regime},
          {"rows", rows}};
}

Json to_json(const ns::InflationReport& r) {
  const auto& c = r.config;
  return {{"config",
           {{"epsilon", c.epsilon},
            {"alpha", c.alpha},
            {"modes", c.modes},
            {"base_freq", c.base_freq},
            {"T", c.T},
            {"steps", c.steps},
            {"points_per_axis", c.points_per_axis},
            {"seed", c.seed},
            {"box_stride", c.box_stride},
            {"nonlinear", c.nonlinear}}},
          {"data", "heuristic shear-mode superposition"},
          {"initial_norm", r.initial_norm},
          {"sup_nonlinear", r.sup_nonlinear},
          {"sup_linear", r.sup_linear},
          {"growth_ratio", r.growth_ratio},
          {"shell_fraction", r.shell_fraction},
          {"warnings", r.warnings}};
}

ns::SmallDataConfig smalldata_config_from_json(const Json& j, ns::SmallDataConfig c) {
  take(j, "deltas", c.deltas);
  take(j, "alpha", c.alpha);
  take(j, "T", c.T);
  take(j, "points_per_axis", c.points_per_axis);
  take(j, "nodes", c.nodes);
  take(j, "max_iter", c.max_iter);
  take(j, "tol", c.tol);
  take(j, "seed", c.seed);
  take(j, "max_freq", c.max_freq);
  take(j, "box_stride", c.box_stride);
  take(j, "max_ratio", c.max_ratio);
  return c;
}

ns::InflationConfig inflation_config_from_json(const Json& j, ns::InflationConfig c) {
  take(j, "epsilon", c.epsilon);
  take(j, "alpha", c.alpha);
  take(j, "modes", c.modes);
  take(j, "base_freq", c.base_freq);
  take(j, "T", c.T);
  take(j, "steps", c.steps);
  take(j, "points_per_axis", c.points_per_axis);
  take(j, "seed", c.seed);
  take(j, "box_stride", c.box_stride);
  take(j, "nonlinear", c.nonlinear);
  return c;
}

void write_equivalence_csv(std::ostream& out, const std::vector<EquivalenceReport>& reports) {
  out << "theorem,left,right,alpha,N,band_min,band_max,spread,drift,pass\n";
  for (const auto& r : reports)
    out << '"' << r.theorem << "\"," << r.left << ',' << r.right << ',' << format_double(r.alpha) << ','
        << r.points_per_axis << ',' << format_double(r.band_min) << ',' << format_double(r.band_max) << ','
        << format_double(r.spread) << ',' << format_double(r.drift) << ',' << (r.pass ? 1 : 0) << '\n';
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingReport>& reports) {
  out << "norm,input,alpha,lambda,value,value_scaled,measured,expected,alternative,pass\n";
  for (const auto& r : reports)
    out << r.norm << ',' << r.input << ',' << format_double(r.alpha) << ',' << format_double(r.lambda) << ','
        << format_double(r.value) << ',' << format_double(r.value_scaled) << ',' << format_double(r.measured) << ','
        << format_double(r.expected) << ',' << format_double(r.alternative) << ',' << (r.pass ? 1 : 0) << '\n';
}

void write_smalldata_csv(std::ostream& out, const ns::SmallDataReport& r) {
  out << "delta,converged,iterations,residual,initial_norm,solution_norm,sup_part,carleson_part,ratio\n";
  for (const auto& row : r.rows)
    out << format_double(row.delta) << ',' << (row.converged ? 1 : 0) << ',' << row.iterations << ','
        << format_double(row.residual) << ',' << format_double(row.initial_norm) << ','
        << format_double(row.solution_norm) << ',' << format_double(row.sup_part) << ','
        << format_double(row.carleson_part) << ',' << format_double(row.ratio) << '\n';
}

void write_inflation_csv(std::ostream& out, const ns::InflationReport& r) {
  out << "epsilon,alpha,K,initial_norm,sup_nonlinear,sup_linear,growth_ratio,shell_fraction\n";
  out << format_double(r.config.epsilon) << ',' << format_double(r.config.alpha) << ',' << r.config.modes << ','
      << format_double(r.initial_norm) << ',' << format_double(r.sup_nonlinear) << ','
      << format_double(r.sup_linear) << ',' << format_double(r.growth_ratio) << ','
      << format_double(r.shell_fraction) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace tlab::io
