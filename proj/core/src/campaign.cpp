// Agreement campaign between the classifier's W_B test and the kernel-form
// oracle. Kept apart from oracle.cpp, which must not depend on the
// classifier.

#include <cmath>

#include "phs/classifier.hpp"
#include "phs/oracle.hpp"

namespace phs::oracle {

CampaignReport run_agreement_campaign(int n, int count, std::uint64_t seed, const Tolerances& tol) {
  CampaignReport report;
  report.n = n;
  report.count = count;
  report.seed = seed;
  const double band = 10.0 * tol.psd;

  for (int i = 0; i < count; ++i) {
    CampaignInstance inst;
    inst.seed = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i);
    inst.hint = i % 2 == 0 ? ClassHint::general : ClassHint::contraction;
    const PHSystem system = random_system(inst.seed, n, inst.hint);

    const ContractionCheck cc = check_contraction(system, tol);
    const OracleContraction oc = check_contraction_via_c(system, tol);
    inst.classifier = cc.passes;
    inst.oracle = oc.passes;
    inst.classifier_witness = cc.sigma_form_min_eigenvalue;
    inst.oracle_witness = oc.form.max_value;
    inst.re_p0_witness = cc.re_p0_max_eigenvalue;
    inst.frontier = std::abs(inst.classifier_witness) <= band ||
                    std::abs(inst.oracle_witness) <= band || std::abs(inst.re_p0_witness) <= band;

    if (!oc.rank_implication_holds) ++report.rank_implication_failures;
    if (cc.passes) ++report.contraction_instances;

    const bool agree = inst.classifier == inst.oracle;
    if (inst.frontier) {
      ++report.frontier;
      if (!agree) ++report.frontier_disagreements;
      report.logged.push_back(inst);
    } else if (agree) {
      ++report.agreements;
    } else {
      ++report.disagreements;
      report.logged.push_back(inst);
    }
  }
  return report;
}

nlohmann::json to_json(const CampaignReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["count"] = r.count;
  j["seed"] = r.seed;
  j["agreements"] = r.agreements;
  j["disagreements"] = r.disagreements;
  j["frontier"] = r.frontier;
  j["frontier_fraction"] = r.frontier_fraction();
  j["frontier_disagreements"] = r.frontier_disagreements;
  j["rank_implication_failures"] = r.rank_implication_failures;
  j["contraction_instances"] = r.contraction_instances;
  nlohmann::json logged = nlohmann::json::array();
  for (const auto& inst : r.logged) {
    logged.push_back({{"seed", inst.seed},
                      {"hint", to_string(inst.hint)},
                      {"classifier", inst.classifier},
                      {"oracle", inst.oracle},
                      {"frontier", inst.frontier},
                      {"classifier_witness", inst.classifier_witness},
                      {"oracle_witness", inst.oracle_witness},
                      {"re_p0_witness", inst.re_p0_witness}});
  }
  j["logged"] = std::move(logged);
  return j;
}

}  // namespace phs::oracle
