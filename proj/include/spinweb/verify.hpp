#pragma once

#include <string>
#include <vector>

namespace spinweb::verify {

/// One named numeric check. For equality checks, ok means
/// |expected - actual| <= tolerance; bound checks set ok directly and store
/// the bound in `expected`.
struct Check {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

struct RunReport {
  bool passed = true;
  std::vector<Check> checks;

  void add(const Check& c) {
    checks.push_back(c);
    passed = passed && c.ok;
  }
  void merge(const RunReport& other) {
    for (const auto& c : other.checks) add(c);
  }
};

/// Tolerances below are pinned; tol_scale = (requested tol / 1e-9)
/// rescales all of them, so unrealistically small requests fail
/// deterministically.
RunReport check_pair_moment_table(double tol_scale);     // criterion 1
RunReport check_product_entry(double tol_scale);         // criterion 2
RunReport check_p0_closed_form(double tol_scale);        // criterion 3
RunReport check_rank_structure(double tol_scale);        // criterion 4
RunReport check_alternating_convergence(double tol_scale); // criterion 5
RunReport check_exact_decay_law(double tol_scale);       // criterion 6
RunReport check_strong_degeneracy(double tol_scale);     // criterion 7
RunReport check_filter_norm_sweep(double tol_scale);     // criterion 8
RunReport check_generation_rank(double tol_scale);       // criterion 9
RunReport check_decomposition_properties(double tol_scale); // criterion 10
RunReport check_monte_carlo(double tol_scale, std::size_t samples); // criterion 11
RunReport check_product_perturbation(double tol_scale);  // criterion 12

/// Full suite in criterion order.
RunReport run_acceptance(double tol_scale = 1.0, std::size_t mc_samples = 100000);

/// Run a single criterion (1-based); throws input_error for unknown numbers.
RunReport run_criterion(int number, double tol_scale = 1.0,
                        std::size_t mc_samples = 100000);

} // namespace spinweb::verify
