#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlab/corpus.hpp"
#include "tlab/norms.hpp"
#include "tlab/ns3d.hpp"
#include "tlab/verify.hpp"

/// JSON and CSV forms of every report. Numbers are written with full double precision.
namespace tlab::io {

using Json = nlohmann::ordered_json;

Json to_json(const TorusGrid& grid);
TorusGrid grid_from_json(const Json& j);

Json to_json(const BoxFamily& boxes);
Json to_json(const NormResult& r, const BoxFamily& boxes);

Json to_json(const CorpusSpec& spec);
CorpusSpec corpus_spec_from_json(const Json& j);

/// {"grid": ..., "members": [{spec..., "hash": "0x..."}]}; hashes are of the fields on `grid`.
Json corpus_manifest(const std::vector<CorpusSpec>& corpus, const TorusGrid& grid);
std::vector<CorpusSpec> corpus_from_manifest(const Json& j);

Json to_json(const VerifyConfig& cfg);
VerifyConfig verify_config_from_json(const Json& j, VerifyConfig base = {});

Json to_json(const EquivalenceReport& r);
Json to_json(const ScalingReport& r);

Json to_json(const ns::SmallDataReport& r);
Json to_json(const ns::InflationReport& r);
ns::SmallDataConfig smalldata_config_from_json(const Json& j, ns::SmallDataConfig base = {});
ns::InflationConfig inflation_config_from_json(const Json& j, ns::InflationConfig base = {});

/// theorem,left,right,alpha,N,band_min,band_max,spread,drift,pass
void write_equivalence_csv(std::ostream& out, const std::vector<EquivalenceReport>& reports);
/// norm,input,alpha,lambda,value,value_scaled,measured,expected,alternative,pass
void write_scaling_csv(std::ostream& out, const std::vector<ScalingReport>& reports);
/// delta,converged,iterations,residual,initial_norm,solution_norm,sup_part,carleson_part,ratio
void write_smalldata_csv(std::ostream& out, const ns::SmallDataReport& r);
/// epsilon,alpha,K,initial_norm,sup_nonlinear,sup_linear,growth_ratio,shell_fraction
void write_inflation_csv(std::ostream& out, const ns::InflationReport& r);

/// Formats a double so that it reads back bit-identically.
std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);

}  // namespace tlab::io
