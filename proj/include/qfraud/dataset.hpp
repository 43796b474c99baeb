#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qfraud {

inline constexpr std::size_t kNumPcaFeatures = 28;

/// One row of the credit-card dataset.
struct Transaction {
  double time = 0.0;
  std::array<double, kNumPcaFeatures> v{};
  double amount = 0.0;
  int label = 0;  // 1 = fraud
  // 0-based data-row position in the file the row was loaded from.
  std::int64_t source_row = -1;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct ClassCounts {
  std::size_t legit = 0;
  std::size_t fraud = 0;
};

struct TransactionSet {
  std::vector<Transaction> rows;
  std::uint64_t seed = 0;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  ClassCounts counts() const;
};

struct SplitSpec {
  double train_frac = 0.65;
  double val_frac = 0.05;
  double test_frac = 0.30;

  /// Throws std::invalid_argument unless every fraction is in (0, 1) and they sum to 1.
  void validate() const;
};

struct SplitResult {
  TransactionSet train;
  TransactionSet val;
  TransactionSet test;
};

/// Reads Time,V1..V28,Amount,Class CSV. Fields may be double-quoted.
/// Throws DataError on malformed input (message names the 1-based line).
TransactionSet load_transactions(const std::filesystem::path& path);

/// Inverse of load_transactions; values are written in shortest round-trip form.
std::string format_transactions_csv(const TransactionSet& set);
void save_transactions(const std::filesystem::path& path, const TransactionSet& set);

/// Keeps every minority-class row and samples the majority class without
/// replacement down to the minority count; the result is shuffled by `seed`.
TransactionSet undersample(const TransactionSet& set, std::uint64_t seed);

/// Stratified split. Part sizes are floor(frac * n) for validation and test;
/// the remainder goes to train. Rows inside each part keep input order.
SplitResult split(const TransactionSet& set, const SplitSpec& spec, std::uint64_t seed);

/// Target part sizes for `n` rows: {train, val, test}.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec);

/// Min-max scaling of Time and Amount. V1..V28 pass through untouched.
struct MinMaxScaler {
  double time_min = 0.0, time_max = 1.0;
  double amount_min = 0.0, amount_max = 1.0;

  static MinMaxScaler fit(const TransactionSet& set);
  Transaction apply(const Transaction& t) const;
  TransactionSet apply(const TransactionSet& set) const;
};

/// Key-value manifest naming the source rows of each split part.
std::string format_split_manifest(const SplitResult& parts, const SplitSpec& spec,
                                  std::uint64_t seed);

}  // namespace qfraud
