// Command-line front end: solve / verify / generate / params / bench.
// All structured output is JSON on stdout. Exit codes: 0 yes (or verify
// pass), 1 no (or verify fail), 2 usage or parse error, 3 capability
// exceeded, 4 internal verification failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "efdg/general.hpp"
#include "efdg/identical.hpp"
#include "efdg/json_io.hpp"
#include "efdg/model.hpp"
#include "efdg/oracle.hpp"
#include "efdg/reductions.hpp"

namespace {

using nlohmann::json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapability = 3;
constexpr int kExitInternal = 4;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

struct SolveOptions {
  std::string path;
  std::string notion;
  int k_minus = -1;
  long long ell_plus = -1;
  std::string algorithm = "auto";
  int oracle_cap = 22;
  long long work_limit = efdg::kDefaultWorkLimit;
};

efdg::Instance load_instance(const SolveOptions& opts) {
  auto doc = efdg::instance_document_from_json(load_json(opts.path));
  if (!opts.notion.empty()) {
    const auto parsed = efdg::notion_from_string(opts.notion);
    if (!parsed) throw std::invalid_argument("--notion expects EF or EF1");
    doc.notion = *parsed;
  }
  if (opts.k_minus >= 0) doc.k_minus = opts.k_minus;
  if (opts.ell_plus >= 0) doc.ell_plus = opts.ell_plus;
  return efdg::to_instance(doc);
}

// Forced algorithm dispatch by name; "auto" goes through the dispatcher.
efdg::Solution run_algorithm(const efdg::Instance& inst, const SolveOptions& opts,
                             std::string* chosen) {
  using namespace efdg;
  const std::string& name = opts.algorithm;
  if (name == "auto") {
    DispatchOptions dopts;
    dopts.oracle_cap = opts.oracle_cap;
    dopts.work_limit = opts.work_limit;
    auto [choice, solution] = dispatch_solve(inst, dopts);
    *chosen = choice.algorithm;
    return solution;
  }
  *chosen = name;
  if (name == "oracle") {
    OracleOptions oopts;
    oopts.cap = opts.oracle_cap;
    return oracle_decide(inst, oopts);
  }
  if (name == "ef1_greedy_number") return ef1_greedy_number(inst);
  if (name == "ef1_dg_by_ell_plus") return ef1_dg_by_ell_plus(inst);
  if (name == "ef1_dg_by_ell_minus") return ef1_dg_by_ell_minus(inst);
  if (name == "ef_dg_by_ell_minus") return ef_dg_by_ell_minus(inst);
  if (name == "welfare_fixed_point") return welfare_fixed_point(inst, inst.notion);
  if (name == "constraint_formulation")
    return constraint_formulation_decide(inst, inst.notion, opts.work_limit);
  if (name == "branch_count") return branch_decide(inst, inst.notion, BudgetKind::Count);
  if (name == "branch_welfare") return branch_decide(inst, inst.notion, BudgetKind::Welfare);
  if (name == "enumerate_kminus")
    return enumerate_decide(inst, inst.notion, EnumerationStrategy::ByKMinus, opts.work_limit);
  if (name == "enumerate_lminus")
    return enumerate_decide(inst, inst.notion, EnumerationStrategy::ByLMinus, opts.work_limit);
  if (name == "enumerate_support")
    return enumerate_decide(inst, inst.notion, EnumerationStrategy::BySupport, opts.work_limit);
  if (name == "enumerate_d_lminus")
    return enumerate_decide(inst, inst.notion, EnumerationStrategy::ByDLMinus, opts.work_limit);
  if (name == "profile_guess_count")
    return profile_guess_decide(inst, inst.notion, BudgetKind::Count, opts.work_limit);
  if (name == "profile_guess_welfare")
    return profile_guess_decide(inst, inst.notion, BudgetKind::Welfare, opts.work_limit);
  if (name == "zero_one_kplus_count")
    return zero_one_kplus_decide(inst, inst.notion, BudgetKind::Count, opts.work_limit);
  if (name == "zero_one_kplus_welfare")
    return zero_one_kplus_decide(inst, inst.notion, BudgetKind::Welfare, opts.work_limit);
  if (name == "ef1_remaining_bound_count")
    return ef1_remaining_bound_decide(inst, BudgetKind::Count, opts.work_limit);
  if (name == "ef1_remaining_bound_welfare")
    return ef1_remaining_bound_decide(inst, BudgetKind::Welfare, opts.work_limit);
  throw std::invalid_argument("unknown algorithm \"" + name + "\"");
}

int cmd_solve(const SolveOptions& opts) {
  const auto started = std::chrono::steady_clock::now();
  const efdg::Instance inst = load_instance(opts);
  std::string chosen;
  efdg::ResultDocument out;
  try {
    const efdg::Solution sol = run_algorithm(inst, opts, &chosen);
    out.algorithm = chosen;
    if (sol.feasible) {
      const auto report = efdg::verify_solution(inst, sol);
      if (!report.ok()) {
        std::cerr << "internal error: solver \"" << chosen
                  << "\" produced a solution that fails verification\n";
        return kExitInternal;
      }
      out.status = "yes";
      out.verified = true;
      out.deleted_count = sol.deleted_count;
      out.remaining_welfare = sol.remaining_welfare;
      for (int r : sol.deleted) out.deleted.push_back(inst.resource_names[r]);
    } else {
      out.status = "no";
    }
  } catch (const efdg::CapabilityError& e) {
    out.status = "capability_exceeded";
    out.algorithm = chosen.empty() ? std::string("none") : chosen;
    out.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    std::cout << efdg::result_document_to_json(out).dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return kExitCapability;
  }
  out.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  std::cout << efdg::result_document_to_json(out).dump(2) << "\n";
  return out.status == "yes" ? kExitYes : kExitNo;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path) {
  const auto doc = efdg::instance_document_from_json(load_json(instance_path));
  const efdg::Instance inst = efdg::to_instance(doc);
  const auto result = efdg::result_document_from_json(load_json(solution_path));
  if (result.status != "yes")
    throw std::invalid_argument("solution document does not claim feasibility");
  efdg::Solution sol;
  sol.feasible = true;
  sol.algorithm = result.algorithm;
  for (const auto& name : result.deleted) {
    const auto it = std::find(inst.resource_names.begin(), inst.resource_names.end(), name);
    if (it == inst.resource_names.end())
      throw std::invalid_argument("solution deletes unknown resource \"" + name + "\"");
    sol.deleted.push_back(static_cast<int>(it - inst.resource_names.begin()));
  }
  std::sort(sol.deleted.begin(), sol.deleted.end());
  sol.deleted_count = static_cast<int>(sol.deleted.size());
  const auto report = efdg::verify_solution(inst, sol);
  std::cout << efdg::verification_report_to_json(inst, report).dump(2) << "\n";
  return report.ok() ? kExitYes : kExitNo;
}

int cmd_generate(const std::string& path, const std::string& notion_text,
                 const std::string& variant) {
  const efdg::SourceInstance src = efdg::source_from_json(load_json(path));
  const auto notion = efdg::notion_from_string(notion_text.empty() ? "EF1" : notion_text);
  if (!notion) throw std::invalid_argument("--notion expects EF or EF1");

  using efdg::BudgetVariant;
  auto budget_variant = [&]() {
    if (variant == "number" || variant.empty()) return BudgetVariant::Number;
    if (variant == "welfare") return BudgetVariant::Welfare;
    throw std::invalid_argument("--variant expects number or welfare for this kind");
  };

  efdg::Instance inst = [&]() -> efdg::Instance {
    switch (src.kind) {
      case efdg::SourceKind::SetCover:
        return efdg::from_set_cover(src, *notion, budget_variant());
      case efdg::SourceKind::RestrictedX3C:
        return efdg::from_x3c(src, *notion);
      case efdg::SourceKind::Partition:
        return efdg::from_partition_ef1(src);
      case efdg::SourceKind::LeqKSum:
        if (variant == "kminus_leqk")
          return efdg::from_subset_sum_ef(src, efdg::SubsetSumVariant::KMinusLeqK);
        return efdg::from_leq_k_sum_ef1(src);
      case efdg::SourceKind::KSum:
        if (variant == "kplus") return efdg::from_k_sum_ef1_number(src, efdg::KSumBound::KPlus);
        return efdg::from_k_sum_ef1_number(src, efdg::KSumBound::KMinus);
      case efdg::SourceKind::SubsetSum:
        if (variant == "ellplus1")
          return efdg::from_subset_sum_ef(src, efdg::SubsetSumVariant::EllPlus1);
        return efdg::from_subset_sum_ef(src, efdg::SubsetSumVariant::KPlus1);
      case efdg::SourceKind::Mrss:
        return efdg::from_mrss(src, *notion, budget_variant());
      case efdg::SourceKind::Clique:
        return efdg::from_clique(src, *notion);
      case efdg::SourceKind::CubicIndependentSet:
        if (variant == "ellplus1") return efdg::from_cubic_is(src, efdg::CubicIsVariant::EllPlus1);
        return efdg::from_cubic_is(src, efdg::CubicIsVariant::KPlus1);
      case efdg::SourceKind::IndependentSet:
        return efdg::from_is_ef1(src, budget_variant());
    }
    throw std::invalid_argument("unknown source kind");
  }();

  std::cout << efdg::instance_document_to_json(efdg::to_document(inst)).dump(2) << "\n";
  return kExitYes;
}

int cmd_params(const std::string& path) {
  const auto doc = efdg::instance_document_from_json(load_json(path));
  const efdg::Instance inst = efdg::to_instance(doc);
  const efdg::DerivedParams p = efdg::derive_params(inst);
  json j;
  j["n"] = inst.n;
  j["m"] = inst.m;
  j["k_minus"] = inst.k_minus;
  j["k_plus"] = p.k_plus;
  j["ell_plus"] = inst.ell_plus;
  j["ell_minus"] = p.ell_minus;
  j["initial_welfare"] = inst.initial_welfare();
  j["d"] = p.d;
  j["w_a"] = p.w_a;
  j["w_r"] = p.w_r;
  j["u_star"] = p.u_star;
  j["identical"] = p.identical;
  j["zero_one"] = p.zero_one;
  j["notion"] = efdg::to_string(inst.notion);
  std::cout << j.dump(2) << "\n";
  return kExitYes;
}

efdg::Instance random_identical_instance(int n, int m, efdg::Utility max_value,
                                         std::mt19937& rng) {
  efdg::RawInstance raw;
  std::uniform_int_distribution<efdg::Utility> value(1, max_value);
  std::uniform_int_distribution<int> owner(0, n - 1);
  std::vector<efdg::Utility> row(m);
  for (auto& v : row) v = value(rng);
  raw.utilities.assign(n, row);
  raw.owner.resize(m);
  for (auto& o : raw.owner) o = owner(rng);
  raw.notion = efdg::Notion::EF1;
  raw.ell_plus = 0;
  return efdg::validate_instance(raw);
}

int cmd_bench(const std::string& suite) {
  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  std::mt19937 rng(20240517);

  if (suite == "greedy_large") {
    const auto inst = random_identical_instance(100, 100000, 20, rng);
    const auto t0 = clock::now();
    const auto sol = efdg::ef1_greedy_number(inst);
    const double solve_ms = ms_since(t0);
    const bool ok = sol.feasible && efdg::verify_solution(inst, sol).ok();
    std::cout << "suite          case                 time_ms   status\n";
    std::cout << "greedy_large   n=100 m=100000       " << solve_ms << "   "
              << (ok ? "verified" : "FAILED") << "\n";
    return ok ? kExitYes : kExitInternal;
  }

  if (suite == "oracle_cap") {
    efdg::RawInstance raw;
    std::uniform_int_distribution<efdg::Utility> value(0, 3);
    std::uniform_int_distribution<int> owner(0, 3);
    raw.utilities.assign(4, std::vector<efdg::Utility>(20));
    for (auto& row : raw.utilities)
      for (auto& v : row) v = value(rng);
    raw.owner.resize(20);
    for (auto& o : raw.owner) o = owner(rng);
    raw.notion = efdg::Notion::EF1;
    raw.k_minus = 10;
    raw.ell_plus = 5;
    const auto inst = efdg::validate_instance(raw);
    const auto t0 = clock::now();
    const auto sol = efdg::oracle_decide(inst);
    const double solve_ms = ms_since(t0);
    std::cout << "suite       case            time_ms   status\n";
    std::cout << "oracle_cap  n=4 m=20        " << solve_ms << "   "
              << (sol.feasible ? "yes" : "no") << "\n";
    return kExitYes;
  }

  if (suite == "solver_matrix") {
    std::cout << "suite          case                      algorithm                time_ms  status\n";
    std::uniform_int_distribution<efdg::Utility> value(0, 4);
    for (int trial = 0; trial < 4; ++trial) {
      efdg::RawInstance raw;
      const int n = 3, m = 8;
      raw.utilities.assign(n, std::vector<efdg::Utility>(m));
      for (auto& row : raw.utilities)
        for (auto& v : row) v = value(rng);
      raw.owner.resize(m);
      std::uniform_int_distribution<int> owner(0, n - 1);
      for (auto& o : raw.owner) o = owner(rng);
      raw.notion = trial % 2 == 0 ? efdg::Notion::EF : efdg::Notion::EF1;
      raw.k_minus = 3;
      raw.ell_plus = 2;
      const auto inst = efdg::validate_instance(raw);
      for (const char* name :
           {"oracle", "constraint_formulation", "branch_count", "enumerate_support",
            "enumerate_kminus", "profile_guess_count"}) {
        SolveOptions opts;
        opts.algorithm = name;
        std::string chosen;
        const auto t0 = clock::now();
        std::string status;
        try {
          const auto sol = run_algorithm(inst, opts, &chosen);
          if (sol.feasible && !efdg::verify_solution(inst, sol).ok()) {
            status = "VERIFY-FAILED";
          } else {
            status = sol.feasible ? "yes" : "no";
          }
        } catch (const efdg::CapabilityError&) {
          status = "capability-skipped";
        }
        std::printf("solver_matrix  trial=%d n=3 m=8 %-4s  %-24s %9.3f  %s\n", trial,
                    raw.notion == efdg::Notion::EF ? "EF" : "EF1", name, ms_since(t0),
                    status.c_str());
        if (status == "VERIFY-FAILED") return kExitInternal;
      }
    }
    return kExitYes;
  }

  throw std::invalid_argument("unknown bench suite \"" + suite + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solvers for making an allocation envy-free by donating resources"};
  app.require_subcommand(1);

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "decide one instance");
  solve->add_option("instance", solve_opts.path, "instance JSON path")->required();
  solve->add_option("--notion", solve_opts.notion, "override the fairness notion (EF or EF1)");
  solve->add_option("--k-minus", solve_opts.k_minus, "override the deletion-count budget");
  solve->add_option("--ell-plus", solve_opts.ell_plus, "override the welfare floor");
  solve->add_option("--algorithm", solve_opts.algorithm, "force a specific algorithm");
  solve->add_option("--oracle-cap", solve_opts.oracle_cap, "max resources for the oracle");
  solve->add_option("--work-limit", solve_opts.work_limit, "work-unit budget for guards");

  std::string verify_instance, verify_solution_path;
  auto* verify = app.add_subcommand("verify", "re-check a claimed solution");
  verify->add_option("instance", verify_instance, "instance JSON path")->required();
  verify->add_option("solution", verify_solution_path, "solution JSON path")->required();

  std::string gen_path, gen_notion, gen_variant;
  auto* generate = app.add_subcommand("generate", "build an instance from a source problem");
  generate->add_option("source", gen_path, "source JSON path")->required();
  generate->add_option("--notion", gen_notion, "EF or EF1 (where the construction varies)");
  generate->add_option("--variant", gen_variant,
                       "number | welfare | kplus | kminus_leqk | ellplus1 ... (per kind)");

  std::string params_path;
  auto* params = app.add_subcommand("params", "print derived parameters");
  params->add_option("instance", params_path, "instance JSON path")->required();

  std::string bench_suite;
  auto* bench = app.add_subcommand("bench", "run a fixed timing suite");
  bench->add_option("suite", bench_suite, "greedy_large | oracle_cap | solver_matrix")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_opts);
    if (*verify) return cmd_verify(verify_instance, verify_solution_path);
    if (*generate) return cmd_generate(gen_path, gen_notion, gen_variant);
    if (*params) return cmd_params(params_path);
    if (*bench) return cmd_bench(bench_suite);
  } catch (const efdg::CapabilityError& e) {
    std::cerr << e.what() << "\n";
    return kExitCapability;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
