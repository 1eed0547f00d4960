#pragma once
// Panel data model for predictive regressions with persistent regressors.
//
// Index convention
// ----------------
// Each individual stores series of length L = T + 1, indexed 0..T.  Index 0
// plays the role of the presample value x_{i,0}: the instrument recursion
// starts from z_{i,1} = x_{i,1} - x_{i,0}.  The h-step regression pairs
// (x_{i,t}, y_{i,t+h}) for t = 1..T-h, and the AR regression pairs
// (x_{i,t}, x_{i,t+1}) for t = 1..T-1.  For data read from disk the first
// observed row is relabeled t = 0 and its y value is never used.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ivxj {

// Error with a distinct category so the CLI can map it to an exit code.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndividualSeries {
  std::string id;
  std::vector<long long> times;         // strictly increasing, contiguous
  std::vector<std::vector<double>> x;   // x[j] = series of regressor j, length L
  std::vector<double> y;                // length L; y[0] is a placeholder

  // Number of effective time periods T (series length minus the presample).
  int T() const { return static_cast<int>(y.size()) - 1; }
};

struct Panel {
  std::vector<IndividualSeries> individuals;

  int n() const { return static_cast<int>(individuals.size()); }
  int k() const {
    return individuals.empty() ? 0 : static_cast<int>(individuals.front().x.size());
  }
  // T_eff = max_i T_i, used to form the common instrument persistence rho_z.
  int T_eff() const;

  // Structural checks: nonempty, per-individual x/y lengths agree, common k,
  // contiguous time stamps (interior gaps are a hard error, never imputed).
  // min_T additionally enforces T_i >= min_T and reports offenders by id.
  void validate(int min_T = 2) const;
};

// Subtract the mean: out = in - mean(in).
std::vector<double> demean_within(const std::vector<double>& series);

// Odd/even index sets used by the X-Jackknife: O = {3,5,...,T-1},
// E = {2,4,...,T-2}. Requires even T >= 6 (callers apply the odd-T rule:
// drop the last observation so T becomes even).
std::pair<std::vector<int>, std::vector<int>> odd_even_sets(int T);

}  // namespace ivxj
