#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lodecomp/catalog.hpp"
#include "lodecomp/entanglement.hpp"
#include "lodecomp/errors.hpp"
#include "lodecomp/maximal.hpp"
#include "lodecomp/oracle.hpp"
#include "lodecomp/serialization.hpp"

namespace lodecomp::cli {

namespace {

struct DecomposeFlags {
  double tol_deg = Tolerances{}.degeneracy;
  double tol_edge = Tolerances{}.edge;
  double tol_supp = Tolerances{}.support;
  std::uint64_t seed = 0;
  bool force_refinement = false;

  MaximalOptions options() const {
    MaximalOptions o;
    o.tolerances.degeneracy = tol_deg;
    o.tolerances.edge = tol_edge;
    o.tolerances.support = tol_supp;
    o.seed = seed;
    o.force_block_refinement = force_refinement;
    return o;
  }
};

void add_decompose_flags(CLI::App* cmd, DecomposeFlags& f) {
  cmd->add_option("--tol-deg", f.tol_deg, "Eigenvalue degeneracy tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-edge", f.tol_edge, "Squared-norm threshold for graph edges")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-supp", f.tol_supp, "Eigenvalue cutoff for local supports")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Seed for the randomized block refinement");
  cmd->add_flag("--force-refinement", f.force_refinement,
                "Use block refinement even for non-degenerate spectra");
}

std::string display_name(const StateFile& f, const std::string& path) {
  return f.name.empty() ? std::filesystem::path(path).filename().string() : f.name;
}

std::string fixed(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

std::string join_dims(const std::vector<std::size_t>& dims, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(dims[i]);
  }
  return s;
}

std::vector<std::size_t> support_dims(const Branch& b) {
  std::vector<std::size_t> out;
  for (const Matrix& s : b.supports) out.push_back(static_cast<std::size_t>(s.cols()));
  return out;
}

void print_table(std::ostream& out, const std::string& name, const MaximalResult& r) {
  const auto& d = r.decomposition;
  const auto& diag = r.diagnostics;
  const EntropyReport e = entropy_report(r);
  out << "state     " << name << "  dims [" << join_dims(d.state().dims(), ",") << "]\n";
  out << "path      " << to_string(diag.path) << "  seed " << diag.seed << "\n";
  out << "branches  " << d.size() << "\n";
  out << "E_LO      " << fixed(e.entropy_bits, 6) << " bits\n";
  if (diag.degenerate_spectrum) out << "note      degenerate local spectrum\n";
  if (diag.non_unique) out << "note      degenerate Schmidt coefficients: maximal decomposition not unique\n";
  out << "\n  #  weight            support dims\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << std::setw(3) << i << "  " << std::left << std::setw(16) << fixed(d.branch(i).weight, 12)
        << std::right << "  " << join_dims(support_dims(d.branch(i)), " ") << "\n";
  }
  out << "\nn-independence residual " << std::scientific << std::setprecision(3)
      << diag.n_independence_residual << std::defaultfloat << "\n";
}

void print_csv(std::ostream& out, const MaximalResult& r) {
  out << "branch,weight,support_dims\n";
  std::ostringstream w;
  for (std::size_t i = 0; i < r.decomposition.size(); ++i) {
    const Branch& b = r.decomposition.branch(i);
    out << i << "," << std::setprecision(17) << b.weight << std::defaultfloat << ","
        << join_dims(support_dims(b), ";") << "\n";
  }
}

int cmd_decompose(const std::string& input, const DecomposeFlags& flags, const std::string& format,
                  std::ostream& out) {
  const StateFile file = read_state_file(input);
  const MaximalResult r = maximal_decomposition(file.state, flags.options());
  const std::string name = display_name(file, input);
  if (format == "json") {
    out << to_json(make_report(name, r)).dump(2) << "\n";
  } else if (format == "csv") {
    print_csv(out, r);
  } else {
    print_table(out, name, r);
  }
  return kOk;
}

int cmd_entropy(const std::string& input, const DecomposeFlags& flags, bool nats,
                std::ostream& out) {
  const StateFile file = read_state_file(input);
  const EntropyReport e = e_lo(file.state, flags.options());
  const EntropyUnit unit = nats ? EntropyUnit::nats : EntropyUnit::bits;
  out << "E_LO = " << fixed(e.entropy(unit), 6) << (nats ? " nats" : " bits") << "\n";
  return kOk;
}

struct GenerateFlags {
  std::string kind;
  std::size_t n = 3;
  std::size_t d = 2;
  std::vector<std::size_t> dims;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::string base = "z";
  std::string name;
  std::string output;
};

int cmd_generate(const GenerateFlags& g, std::ostream& out) {
  const auto kind = parse_state_kind(g.kind);
  if (!kind) throw InvalidArgument("unknown state kind '" + g.kind + "'");
  const auto base = parse_state_kind(g.base);
  if (!base) throw InvalidArgument("unknown base kind '" + g.base + "'");
  StateSpec spec;
  spec.kind = *kind;
  spec.parties = g.n;
  spec.local_dim = g.d;
  spec.dims = g.dims;
  spec.weights = g.weights;
  spec.seed = g.seed;
  spec.base = *base;
  StateFile file{generate(spec), g.name.empty() ? std::string(to_string(*kind)) : g.name,
                 nlohmann::json::object()};
  file.metadata["kind"] = std::string(to_string(*kind));
  if (!g.weights.empty()) file.metadata["weights"] = g.weights;
  if (*kind == StateKind::random || *kind == StateKind::product ||
      *kind == StateKind::random_local_dressing) {
    file.metadata["seed"] = g.seed;
  }
  if (*kind == StateKind::random_local_dressing) file.metadata["base"] = g.base;
  if (g.output.empty() || g.output == "-") {
    out << to_json(file).dump(2) << "\n";
  } else {
    write_state_file(g.output, file);
  }
  return kOk;
}

int cmd_verify(const std::string& state_path, const std::string& report_path, bool use_oracle,
               std::ostream& out) {
  const StateFile file = read_state_file(state_path);
  const ReportDocument report = report_from_json(read_json_file(report_path));
  const BranchDecomposition d = decomposition_from_report(file.state, report);
  const VerificationReport v = verify_lo(d);
  out << "locally orthogonal: " << (v.passed ? "PASS" : "FAIL") << "\n" << v.render();
  bool ok = v.passed;
  if (use_oracle) {
    if (file.state.shape().total() > 256) {
      out << "maximality oracle: inconclusive (total dimension above 256)\n";
    } else if (!v.passed) {
      out << "maximality oracle: skipped (decomposition is not locally orthogonal)\n";
    } else {
      const auto m = oracle::verify_maximality_small(d);
      out << "maximality oracle: " << oracle::to_string(m.verdict) << " (" << m.detail << ")\n";
      ok = ok && m.verdict != oracle::Verdict::fail;
    }
  }
  return ok ? kOk : kVerificationFailed;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const DecomposeFlags& flags,
                std::ostream& out) {
  const StateFile a = read_state_file(a_path);
  const StateFile b = read_state_file(b_path);
  const EntropyReport ea = e_lo(a.state, flags.options());
  const EntropyReport eb = e_lo(b.state, flags.options());
  auto row = [&](const std::string& label, const std::string& x, const std::string& y) {
    out << std::left << std::setw(14) << label << std::setw(20) << x << y << std::right << "\n";
  };
  row("", "A", "B");
  row("state", display_name(a, a_path), display_name(b, b_path));
  row("dims", "[" + join_dims(a.state.dims(), ",") + "]", "[" + join_dims(b.state.dims(), ",") + "]");
  row("branches", std::to_string(ea.branch_count), std::to_string(eb.branch_count));
  row("E_LO (bits)", fixed(ea.entropy_bits, 6), fixed(eb.entropy_bits, 6));
  const std::size_t rows = std::max(ea.weights.size(), eb.weights.size());
  double max_diff = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const bool ha = i < ea.weights.size();
    const bool hb = i < eb.weights.size();
    row("weight[" + std::to_string(i) + "]", ha ? fixed(ea.weights[i], 12) : "-",
        hb ? fixed(eb.weights[i], 12) : "-");
    max_diff = std::max(max_diff, std::abs((ha ? ea.weights[i] : 0.0) - (hb ? eb.weights[i] : 0.0)));
  }
  std::ostringstream diff;
  diff << std::scientific << std::setprecision(3) << max_diff;
  row("max |dw|", diff.str(), "");
  row("entropy diff", fixed(std::abs(ea.entropy_bits - eb.entropy_bits), 6), "");
  const bool equal = ea.branch_count == eb.branch_count && max_diff <= 1e-9;
  row("weights_equal", equal ? "yes" : "no", "");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal locally-orthogonal decompositions of multipartite pure states"};
  app.require_subcommand(1);

  DecomposeFlags dflags;
  std::string input, format = "table";
  auto* decompose = app.add_subcommand("decompose", "Print the maximal LO decomposition");
  decompose->add_option("input", input, "State file")->required();
  decompose->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  add_decompose_flags(decompose, dflags);

  bool nats = false;
  auto* entropy = app.add_subcommand("entropy", "Print E_LO");
  entropy->add_option("input", input, "State file")->required();
  entropy->add_flag("--nats", nats, "Natural-log entropy instead of bits");
  add_decompose_flags(entropy, dflags);

  GenerateFlags g;
  auto* gen = app.add_subcommand("generate", "Write a catalog state file");
  gen->add_option("--kind", g.kind, "ghz|w|z|u|v|x|product|random|random_local_dressing")
      ->required();
  gen->add_option("--n", g.n, "Number of subsystems")->check(CLI::PositiveNumber);
  gen->add_option("--d", g.d, "Local dimension")->check(CLI::PositiveNumber);
  gen->add_option("--dims", g.dims, "Explicit per-subsystem dimensions")->delimiter(',');
  gen->add_option("--weights", g.weights, "Branch weights for z")->delimiter(',');
  gen->add_option("--seed", g.seed, "Seed for random kinds");
  gen->add_option("--base", g.base, "Base kind for random_local_dressing");
  gen->add_option("--name", g.name, "Name stored in the file");
  gen->add_option("-o,--output", g.output, "Output path (stdout if omitted)");

  std::string report_path;
  bool use_oracle = false;
  auto* verify = app.add_subcommand("verify", "Check a decomposition report against a state");
  verify->add_option("state", input, "State file")->required();
  verify->add_option("report", report_path, "JSON report from 'decompose --format json'")
      ->required();
  verify->add_flag("--oracle", use_oracle, "Also run the brute-force maximality search");

  std::string other;
  auto* compare = app.add_subcommand("compare", "Compare branch weights and E_LO of two states");
  compare->add_option("a", input, "First state file")->required();
  compare->add_option("b", other, "Second state file")->required();
  add_decompose_flags(compare, dflags);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (decompose->parsed()) return cmd_decompose(input, dflags, format, out);
    if (entropy->parsed()) return cmd_entropy(input, dflags, nats, out);
    if (gen->parsed()) return cmd_generate(g, out);
    if (verify->parsed()) return cmd_verify(input, report_path, use_oracle, out);
    if (compare->parsed()) return cmd_compare(input, other, dflags, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const UnsupportedOperation& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const InternalConsistencyError& e) {
    err << "internal consistency error: " << e.what() << "\n" << e.report();
    return kInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kBadInput;
}

}  // namespace lodecomp::cli
