#include "ivxj/panel.hpp"

#include <algorithm>
#include <sstream>

#include "ivxj/kernels.hpp"

namespace ivxj {

int Panel::T_eff() const {
  int m = 0;
  for (const auto& ind : individuals) m = std::max(m, ind.T());
  return m;
}

void Panel::validate(int min_T) const {
  if (individuals.empty()) throw InputError("panel has no individuals");
  const std::size_t k = individuals.front().x.size();
  std::ostringstream short_ids;
  bool any_short = false;
  for (const auto& ind : individuals) {
    if (ind.x.size() != k)
      throw InputError("individual '" + ind.id +
                       "': inconsistent number of regressors");
    const std::size_t L = ind.y.size();
    if (ind.times.size() != L)
      throw InputError("individual '" + ind.id + "': time/value length mismatch");
    for (const auto& series : ind.x)
      if (series.size() != L)
        throw InputError("individual '" + ind.id + "': x/y length mismatch");
    for (std::size_t t = 1; t < ind.times.size(); ++t) {
      if (ind.times[t] <= ind.times[t - 1])
        throw InputError("individual '" + ind.id + "': time stamps not increasing");
      if (ind.times[t] != ind.times[t - 1] + 1)
        throw InputError("individual '" + ind.id +
                         "': interior gap in time stamps at t=" +
                         std::to_string(ind.times[t]));
    }
    if (ind.T() < min_T) {
      if (any_short) short_ids << ", ";
      short_ids << ind.id;
      any_short = true;
    }
  }
  if (any_short)
    throw InputError("individuals too short (T < " + std::to_string(min_T) +
                     "): " + short_ids.str());
}

std::vector<double> demean_within(const std::vector<double>& series) {
  if (series.empty()) throw InputError("demean_within: empty series");
  const double mean = kern::sum(series.data(), series.size()) /
                      static_cast<double>(series.size());
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = series[i] - mean;
  return out;
}

std::pair<std::vector<int>, std::vector<int>> odd_even_sets(int T) {
  if (T < 6) throw InputError("series too short for XJ (need T >= 6)");
  if (T % 2 != 0)
    throw InputError("odd_even_sets requires even T (apply the odd-T rule first)");
  std::vector<int> O, E;
  for (int t = 3; t <= T - 1; t += 2) O.push_back(t);
  for (int t = 2; t <= T - 2; t += 2) E.push_back(t);
  return {std::move(O), std::move(E)};
}

}  // namespace ivxj
