#include "phs/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "phs/classifier.hpp"
#include "phs/errors.hpp"
#include "phs/model.hpp"
#include "phs/oracle.hpp"

namespace phs::cli {

namespace {

struct Options {
  std::string model;
  std::string output;
  std::string field_output;
  double tol_psd = Tolerances{}.psd;
  double tol_rank = Tolerances{}.rank;
  int grid = 65;
  int n = 3;
  int count = 1000;
  std::uint64_t seed = 42;
  int nx = 256;
  double t_final = 1.0;
  double cfl = 0.9;
  std::string p_norms = "1,2";
  std::string x0 = "sine(1)";
  std::string scheme = "euler";
  int record_every = 1;
  bool allow_illposed = false;
  bool verbose = false;
};

Tolerances tolerances(const Options& o) {
  Tolerances t;
  t.psd = o.tol_psd;
  t.rank = o.tol_rank;
  return t;
}

std::vector<double> parse_p_norms(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double p = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(p);
    } catch (const std::exception&) {
      throw SpecError("--p-norms: \"" + item + "\" is not a number");
    }
  }
  if (out.empty()) throw SpecError("--p-norms needs at least one value");
  return out;
}

// Writes to --output when given, otherwise to `out`.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot open " + path + " for writing");
  body(file);
}

int do_check(const Options& o, std::ostream& out) {
  ValidationOptions vo;
  vo.tol = tolerances(o);
  const PHSystem system = load_system_file(o.model, vo);
  nlohmann::json j{{"valid", true},
                   {"n", system.n()},
                   {"h_kind", system.h().kind() == CoefficientField::Kind::constant     ? "constant"
                              : system.h().kind() == CoefficientField::Kind::polynomial ? "polynomial"
                                                                                        : "grid"}};
  emit(o.output, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kSuccess;
}

int do_classify(const Options& o, std::ostream& out) {
  ValidationOptions vo;
  vo.tol = tolerances(o);
  const PHSystem system = load_system_file(o.model, vo);
  ClassifyOptions co;
  co.tol = vo.tol;
  co.grid_points = o.grid;
  const Verdict v = classify(system, co);
  emit(o.output, out, [&](std::ostream& os) { os << to_json(v).dump(2) << '\n'; });
  return kSuccess;
}

int do_oracle(const Options& o, std::ostream& out) {
  if (o.n < 1 || o.count < 1) throw SpecError("--n and --count must be positive");
  const oracle::CampaignReport r = oracle::run_agreement_campaign(o.n, o.count, o.seed, tolerances(o));
  nlohmann::json j = oracle::to_json(r);
  j["passed"] = r.disagreements == 0 && r.rank_implication_failures == 0;
  emit(o.output, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kSuccess;
}

int do_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  ValidationOptions vo;
  vo.tol = tolerances(o);
  const PHSystem system = load_system_file(o.model, vo);

  sim::SimConfig cfg;
  cfg.nx = o.nx;
  cfg.t_final = o.t_final;
  cfg.cfl = o.cfl;
  cfg.p_norms = parse_p_norms(o.p_norms);
  cfg.record_every = o.record_every;
  cfg.allow_illposed = o.allow_illposed;
  cfg.tol = vo.tol;
  cfg.scheme = o.scheme == "rk2" ? sim::TimeScheme::ssp_rk2 : sim::TimeScheme::forward_euler;

  const sim::InitialField x0 = x0_from_spec(o.x0, system.n());
  const sim::SimResult result = sim::run(system, cfg, x0);

  emit(o.output, out, [&](std::ostream& os) { sim::write_history_csv(os, result.history, cfg.p_norms); });
  if (!o.field_output.empty())
    emit(o.field_output, out,
         [&](std::ostream& os) { sim::write_field_csv(os, result.grid, result.final_field); });
  if (o.verbose) {
    err << "steps=" << result.steps << " dt=" << result.dt
        << " max_boundary_residual=" << result.max_boundary_residual << '\n';
  }
  return kSuccess;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Well-posedness checks and simulation for 1-D port-Hamiltonian systems", "phs"};
  app.require_subcommand(1, 1);
  Options o;
  app.add_flag("-v,--verbose", o.verbose, "Print diagnostics to stderr");

  auto add_tols = [&](CLI::App* sub) {
    sub->add_option("--tol-psd", o.tol_psd, "Semidefiniteness tolerance")->capture_default_str();
    sub->add_option("--tol-rank", o.tol_rank, "Relative rank tolerance")->capture_default_str();
    sub->add_option("-o,--output", o.output, "Output path (default: stdout)");
  };

  CLI::App* check = app.add_subcommand("check", "Validate a model document");
  check->add_option("model", o.model, "Model JSON")->required();
  add_tols(check);

  CLI::App* cls = app.add_subcommand("classify", "Contraction / unitary / C0 verdict as JSON");
  cls->add_option("model", o.model, "Model JSON")->required();
  cls->add_option("--grid", o.grid, "Grid points for the eigenvalue-crossing scan")
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  add_tols(cls);

  CLI::App* orc = app.add_subcommand("oracle", "Classifier vs kernel-form oracle campaign");
  orc->add_option("--n", o.n, "State dimension")->capture_default_str();
  orc->add_option("--count", o.count, "Number of random systems")->capture_default_str();
  orc->add_option("--seed", o.seed, "Campaign seed")->capture_default_str();
  add_tols(orc);

  CLI::App* simc = app.add_subcommand("simulate", "Upwind simulation; writes a norm-history CSV");
  simc->add_option("model", o.model, "Model JSON")->required();
  simc->add_option("--nx", o.nx, "Grid cells")->check(CLI::Range(16, 1 << 24))->capture_default_str();
  simc->add_option("--t-final", o.t_final, "Final time")->check(CLI::PositiveNumber)->capture_default_str();
  simc->add_option("--cfl", o.cfl, "CFL number in (0,1]")->check(CLI::Range(1e-6, 1.0))->capture_default_str();
  simc->add_option("--p-norms", o.p_norms, "Comma-separated p values")->capture_default_str();
  simc->add_option("--x0", o.x0, "Initial profile, e.g. 'sine(1)' or 'gaussian(0,0.3);constant(1)'")
      ->capture_default_str();
  simc->add_option("--scheme", o.scheme, "Time integrator")
      ->check(CLI::IsMember({"euler", "rk2"}))
      ->capture_default_str();
  simc->add_option("--record-every", o.record_every, "Steps between norm samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simc->add_option("--field-output", o.field_output, "Final-field CSV path");
  simc->add_flag("--allow-illposed", o.allow_illposed, "Simulate even if not a C0 generator");
  add_tols(simc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "phs: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (check->parsed()) return do_check(o, out);
    if (cls->parsed()) return do_classify(o, out);
    if (orc->parsed()) return do_oracle(o, out);
    if (simc->parsed()) return do_simulate(o, out, err);
  } catch (const SchemaError& e) {
    err << "phs: schema error: " << e.what() << '\n';
    return kInvalidModel;
  } catch (const ValidationError& e) {
    err << "phs: validation error: " << e.what() << '\n';
    return kInvalidModel;
  } catch (const IllPosedError& e) {
    err << "phs: ill-posed: " << e.what() << '\n';
    return kIllPosed;
  } catch (const SpecError& e) {
    err << "phs: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "phs: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace phs::cli
