#include "lodecomp/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "lodecomp/entanglement.hpp"
#include "lodecomp/errors.hpp"

namespace lodecomp {

using nlohmann::json;

namespace {

json complex_list(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Vector parse_complex_list(const json& j) {
  if (!j.is_array()) throw InvalidArgument("expected a list of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InvalidArgument("amplitude " + std::to_string(i) + " is not an [re, im] pair");
    }
    v(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

json column_list(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_list(m.col(c)));
  return out;
}

Matrix parse_column_list(const json& j, std::size_t rows) {
  if (!j.is_array()) throw InvalidArgument("expected a list of basis columns");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    const Vector col = parse_complex_list(j[c]);
    if (static_cast<std::size_t>(col.size()) != rows) {
      throw InvalidArgument("support column has the wrong length");
    }
    m.col(static_cast<Eigen::Index>(c)) = col;
  }
  return m;
}

std::vector<std::size_t> parse_dims(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("dims must be a nonempty list");
  std::vector<std::size_t> dims;
  for (const json& d : j) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw InvalidArgument("dims entries must be positive integers");
    }
    dims.push_back(d.get<std::size_t>());
  }
  return dims;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json diagnostics_to_json(const Diagnostics& d) {
  return json{
      {"path", std::string(to_string(d.path))},
      {"seed", d.seed},
      {"stable_rounds", d.stable_rounds},
      {"tolerances",
       {{"degeneracy", d.tolerances.degeneracy},
        {"support", d.tolerances.support},
        {"edge", d.tolerances.edge},
        {"min_weight", d.tolerances.min_weight}}},
      {"n_independence_residual", d.n_independence_residual},
      {"min_accepted_edge", finite_or_null(d.min_accepted_edge)},
      {"max_rejected_edge", d.max_rejected_edge},
      {"sbd_rounds", d.sbd_rounds},
      {"refinement_splits", d.refinement_splits},
  };
}

Diagnostics diagnostics_from_json(const json& j, const json& flags) {
  Diagnostics d;
  const auto path = parse_construction_path(j.at("path").get<std::string>());
  if (!path) throw InvalidArgument("unknown construction path in report");
  d.path = *path;
  d.seed = j.at("seed").get<std::uint64_t>();
  d.stable_rounds = j.at("stable_rounds").get<int>();
  const json& t = j.at("tolerances");
  d.tolerances.degeneracy = t.at("degeneracy").get<double>();
  d.tolerances.support = t.at("support").get<double>();
  d.tolerances.edge = t.at("edge").get<double>();
  d.tolerances.min_weight = t.at("min_weight").get<double>();
  d.n_independence_residual = j.at("n_independence_residual").get<double>();
  d.min_accepted_edge = number_or_inf(j.at("min_accepted_edge"));
  d.max_rejected_edge = j.at("max_rejected_edge").get<double>();
  d.sbd_rounds = j.at("sbd_rounds").get<std::vector<std::size_t>>();
  d.refinement_splits = j.at("refinement_splits").get<std::size_t>();
  d.degenerate_spectrum = flags.at("degenerate_spectrum").get<bool>();
  d.non_unique = flags.at("non_unique").get<bool>();
  return d;
}

}  // namespace

json to_json(const StateFile& file) {
  json j{{"dims", file.state.dims()}, {"amps", complex_list(file.state.amps())}};
  if (!file.name.empty()) j["name"] = file.name;
  if (!file.metadata.empty()) j["metadata"] = file.metadata;
  return j;
}

StateFile state_file_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("state file must be a JSON object");
  if (!j.contains("dims") || !j.contains("amps")) {
    throw InvalidArgument("state file needs 'dims' and 'amps'");
  }
  std::vector<std::size_t> dims = parse_dims(j["dims"]);
  Vector amps = parse_complex_list(j["amps"]);
  StateFile f{StateTensor(std::move(dims), std::move(amps)), "", json::object()};
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw InvalidArgument("'name' must be a string");
    f.name = j["name"].get<std::string>();
  }
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object()) throw InvalidArgument("'metadata' must be an object");
    f.metadata = j["metadata"];
  }
  return f;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

StateFile read_state_file(const std::filesystem::path& path) {
  try {
    return state_file_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void write_state_file(const std::filesystem::path& path, const StateFile& file) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << to_json(file).dump(2) << '\n';
}

ReportDocument make_report(const std::string& name, const MaximalResult& result) {
  ReportDocument r;
  r.name = name;
  r.dims = result.decomposition.state().dims();
  r.weights = result.decomposition.weights();
  r.entropy_bits = entropy_report(result).entropy_bits;
  for (const Branch& b : result.decomposition.branches()) {
    r.vectors.push_back(b.vector);
    r.supports.push_back(b.supports);
  }
  r.diagnostics = result.diagnostics;
  return r;
}

json to_json(const ReportDocument& r) {
  json branches = json::array();
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    json supports = json::array();
    for (const Matrix& s : r.supports[i]) supports.push_back(column_list(s));
    branches.push_back({{"vector", complex_list(r.vectors[i])}, {"supports", supports}});
  }
  return json{
      {"schema_version", r.schema_version},
      {"state", {{"name", r.name}, {"dims", r.dims}}},
      {"branch_count", r.weights.size()},
      {"weights", r.weights},
      {"entropy_bits", r.entropy_bits},
      {"flags",
       {{"degenerate_spectrum", r.diagnostics.degenerate_spectrum},
        {"non_unique", r.diagnostics.non_unique}}},
      {"branches", branches},
      {"diagnostics", diagnostics_to_json(r.diagnostics)},
  };
}

ReportDocument report_from_json(const json& j) {
  try {
    ReportDocument r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw InvalidArgument("unsupported report schema_version " +
                            std::to_string(r.schema_version));
    }
    r.name = j.at("state").at("name").get<std::string>();
    r.dims = parse_dims(j.at("state").at("dims"));
    r.weights = j.at("weights").get<std::vector<double>>();
    r.entropy_bits = j.at("entropy_bits").get<double>();
    const json& branches = j.at("branches");
    if (!branches.is_array() || branches.size() != r.weights.size() ||
        j.at("branch_count").get<std::size_t>() != r.weights.size()) {
      throw InvalidArgument("report branch count is inconsistent");
    }
    for (const json& b : branches) {
      r.vectors.push_back(parse_complex_list(b.at("vector")));
      const json& sup = b.at("supports");
      if (!sup.is_array() || sup.size() != r.dims.size()) {
        throw InvalidArgument("report branch needs one support per subsystem");
      }
      std::vector<Matrix> supports;
      for (std::size_t n = 0; n < r.dims.size(); ++n) {
        supports.push_back(parse_column_list(sup[n], r.dims[n]));
      }
      r.supports.push_back(std::move(supports));
    }
    r.diagnostics = diagnostics_from_json(j.at("diagnostics"), j.at("flags"));
    return r;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed report: ") + e.what());
  }
}

BranchDecomposition decomposition_from_report(const StateTensor& state,
                                              const ReportDocument& r) {
  if (r.dims != state.dims()) throw InvalidArgument("report dims do not match the state");
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    branches.push_back(Branch{r.weights[i], r.vectors[i], r.supports[i]});
  }
  return BranchDecomposition(state, std::move(branches));
}

}  // namespace lodecomp
