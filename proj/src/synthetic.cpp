#include "qfraud/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "qfraud/rng.hpp"

namespace qfraud {
namespace {

constexpr double kLegitSigma[kNumPcaFeatures] = {
    1.96, 1.65, 1.52, 1.42, 1.38, 1.33, 1.24, 1.19, 1.10, 1.09, 1.02, 1.00, 1.00, 0.96,
    0.92, 0.88, 0.85, 0.84, 0.81, 0.77, 0.73, 0.73, 0.62, 0.61, 0.52, 0.48, 0.40, 0.33};
constexpr double kFraudMean[kNumPcaFeatures] = {
    -4.77, 3.62, -7.03, 4.54, -3.15, -1.40, -5.57, 0.57,  -2.58, -5.68, 3.80, -6.26, -0.11, -6.97,
    -0.09, -4.14, -6.67, -2.25, 0.68, 0.37,  0.71,  0.01, -0.04, -0.11, 0.04, 0.05,  0.17,  0.08};

}  // namespace

TransactionSet synthetic_transactions(std::size_t legit, std::size_t fraud, std::uint64_t seed,
                                      double shift) {
  Rng rng(seed);
  TransactionSet set;
  set.seed = seed;
  set.rows.reserve(legit + fraud);
  for (std::size_t i = 0; i < legit + fraud; ++i) {
    Transaction t;
    t.label = i < fraud ? 1 : 0;
    t.time = std::floor(rng.uniform(0.0, 172792.0));
    for (std::size_t j = 0; j < kNumPcaFeatures; ++j) {
      if (t.label) {
        const double mu = shift * kFraudMean[j];
        t.v[j] = mu + (0.6 * std::abs(mu) + kLegitSigma[j]) * rng.normal();
      } else {
        t.v[j] = kLegitSigma[j] * rng.normal();
      }
    }
    const double log_amount = t.label ? 3.5 + 2.0 * rng.normal() : 3.0 + 1.5 * rng.normal();
    t.amount = std::round(std::min(std::exp(log_amount), 25000.0) * 100.0) / 100.0;
    set.rows.push_back(t);
  }
  rng.shuffle(std::span<Transaction>(set.rows));
  for (std::size_t i = 0; i < set.rows.size(); ++i) set.rows[i].source_row = static_cast<std::int64_t>(i);
  return set;
}

}  // namespace qfraud
