#include "qfraud/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qfraud/error.hpp"
#include "qfraud/rng.hpp"
#include "qfraud/text_io.hpp"

namespace qfraud {
namespace {

constexpr std::size_t kNumColumns = kNumPcaFeatures + 3;

std::vector<std::string> expected_header() {
  std::vector<std::string> h{"Time"};
  for (std::size_t j = 1; j <= kNumPcaFeatures; ++j) h.push_back("V" + std::to_string(j));
  h.emplace_back("Amount");
  h.emplace_back("Class");
  return h;
}

std::string_view unquote(std::string_view field) {
  field = trim(field);
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
    field = field.substr(1, field.size() - 2);
  }
  return field;
}

// floor() that ignores representation error just below an integer.
std::size_t safe_floor(double x) {
  return static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

}  // namespace

ClassCounts TransactionSet::counts() const {
  ClassCounts c;
  for (const auto& r : rows) (r.label == 1 ? c.fraud : c.legit)++;
  return c;
}

void SplitSpec::validate() const {
  for (double f : {train_frac, val_frac, test_frac}) {
    if (!(f > 0.0 && f < 1.0)) {
      throw std::invalid_argument("split fractions must each lie in (0, 1)");
    }
  }
  if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-12) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

TransactionSet load_transactions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("dataset file '" + path.string() + "' not found or unreadable");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path.string() + "': missing header row");
  const auto header = split(trim(line), ',');
  const auto expected = expected_header();
  bool header_ok = header.size() == expected.size();
  for (std::size_t i = 0; header_ok && i < header.size(); ++i) {
    header_ok = unquote(header[i]) == expected[i];
  }
  if (!header_ok) {
    throw DataError("'" + path.string() +
                    "': malformed header, expected Time,V1,...,V28,Amount,Class");
  }

  TransactionSet set;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) continue;
    const auto fields = split(content, ',');
    const auto where = "'" + path.string() + "' line " + std::to_string(line_no) +
                       " (data row " + std::to_string(set.rows.size() + 1) + ")";
    if (fields.size() != kNumColumns) {
      throw DataError(where + ": expected " + std::to_string(kNumColumns) + " columns, got " +
                      std::to_string(fields.size()));
    }
    std::array<double, kNumColumns> values{};
    for (std::size_t i = 0; i < kNumColumns; ++i) {
      auto v = parse_double(unquote(fields[i]));
      if (!v || !std::isfinite(*v)) {
        throw DataError(where + ": non-numeric value '" + std::string(fields[i]) +
                        "' in column " + expected[i]);
      }
      values[i] = *v;
    }
    Transaction t;
    t.time = values[0];
    std::copy_n(values.begin() + 1, kNumPcaFeatures, t.v.begin());
    t.amount = values[kNumColumns - 2];
    const double label = values[kNumColumns - 1];
    if (label != 0.0 && label != 1.0) {
      throw DataError(where + ": Class must be 0 or 1");
    }
    t.label = static_cast<int>(label);
    t.source_row = static_cast<std::int64_t>(set.rows.size());
    set.rows.push_back(t);
  }
  return set;
}

std::string format_transactions_csv(const TransactionSet& set) {
  std::string out;
  const auto header = expected_header();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& t : set.rows) {
    out += format_double(t.time);
    for (double v : t.v) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += format_double(t.amount);
    out += ',';
    out += std::to_string(t.label);
    out += '\n';
  }
  return out;
}

void save_transactions(const std::filesystem::path& path, const TransactionSet& set) {
  write_file_atomic(path, format_transactions_csv(set));
}

TransactionSet undersample(const TransactionSet& set, std::uint64_t seed) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < set.rows.size(); ++i) {
    by_class[set.rows[i].label == 1 ? 1 : 0].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw DataError("undersample: both classes must be present");
  }
  Rng rng(seed);
  const std::size_t keep = std::min(by_class[0].size(), by_class[1].size());
  std::vector<std::size_t> chosen;
  chosen.reserve(2 * keep);
  for (auto& idx : by_class) {
    if (idx.size() > keep) {
      rng.shuffle(std::span(idx));
      idx.resize(keep);
    }
    chosen.insert(chosen.end(), idx.begin(), idx.end());
  }
  rng.shuffle(std::span(chosen));

  TransactionSet out;
  out.seed = seed;
  out.rows.reserve(chosen.size());
  for (auto i : chosen) out.rows.push_back(set.rows[i]);
  return out;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec) {
  const std::size_t val = safe_floor(spec.val_frac * static_cast<double>(n));
  const std::size_t test = safe_floor(spec.test_frac * static_cast<double>(n));
  return {n - val - test, val, test};
}

SplitResult split(const TransactionSet& set, const SplitSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (set.empty()) throw std::invalid_argument("split: empty transaction set");

  const auto sizes = split_sizes(set.size(), spec);

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < set.rows.size(); ++i) {
    by_class[set.rows[i].label == 1 ? 1 : 0].push_back(i);
  }

  // Apportion validation then test rows across classes. Leftover rows after the
  // per-class floors go to the class furthest behind its cumulative quota, so the
  // train remainder of each class also stays close to its share.
  const double fracs[2] = {spec.val_frac, spec.test_frac};
  const std::size_t targets[2] = {sizes[1], sizes[2]};
  std::size_t alloc[2][2] = {};  // [part][class]
  std::size_t used[2] = {0, 0};
  double cum_frac = 0.0;
  for (int part = 0; part < 2; ++part) {
    cum_frac += fracs[part];
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
      const double n_c = static_cast<double>(by_class[c].size());
      alloc[part][c] = std::min(safe_floor(fracs[part] * n_c), by_class[c].size() - used[c]);
      assigned += alloc[part][c];
    }
    while (assigned < targets[part]) {
      int best = -1;
      double best_deficit = -1e300;
      for (int c = 0; c < 2; ++c) {
        if (used[c] + alloc[part][c] >= by_class[c].size()) continue;
        const double deficit = cum_frac * static_cast<double>(by_class[c].size()) -
                               static_cast<double>(used[c] + alloc[part][c]);
        if (deficit > best_deficit) {
          best_deficit = deficit;
          best = c;
        }
      }
      if (best < 0) break;
      ++alloc[part][best];
      ++assigned;
    }
    for (int c = 0; c < 2; ++c) used[c] += alloc[part][c];
  }

  Rng rng(seed);
  std::vector<std::size_t> parts[3];  // train, val, test
  for (int c = 0; c < 2; ++c) {
    auto idx = by_class[c];
    rng.shuffle(std::span(idx));
    const std::size_t nv = alloc[0][c], nt = alloc[1][c];
    parts[1].insert(parts[1].end(), idx.begin(), idx.begin() + nv);
    parts[2].insert(parts[2].end(), idx.begin() + nv, idx.begin() + nv + nt);
    parts[0].insert(parts[0].end(), idx.begin() + nv + nt, idx.end());
  }

  SplitResult out;
  TransactionSet* dest[3] = {&out.train, &out.val, &out.test};
  for (int p = 0; p < 3; ++p) {
    std::sort(parts[p].begin(), parts[p].end());
    dest[p]->seed = seed;
    dest[p]->rows.reserve(parts[p].size());
    for (auto i : parts[p]) dest[p]->rows.push_back(set.rows[i]);
  }
  return out;
}

MinMaxScaler MinMaxScaler::fit(const TransactionSet& set) {
  MinMaxScaler s;
  if (set.empty()) return s;
  s.time_min = s.time_max = set.rows.front().time;
  s.amount_min = s.amount_max = set.rows.front().amount;
  for (const auto& t : set.rows) {
    s.time_min = std::min(s.time_min, t.time);
    s.time_max = std::max(s.time_max, t.time);
    s.amount_min = std::min(s.amount_min, t.amount);
    s.amount_max = std::max(s.amount_max, t.amount);
  }
  return s;
}

Transaction MinMaxScaler::apply(const Transaction& t) const {
  auto scale = [](double x, double lo, double hi) {
    return hi > lo ? (x - lo) / (hi - lo) : 0.0;
  };
  Transaction out = t;
  out.time = scale(t.time, time_min, time_max);
  out.amount = scale(t.amount, amount_min, amount_max);
  return out;
}

TransactionSet MinMaxScaler::apply(const TransactionSet& set) const {
  TransactionSet out;
  out.seed = set.seed;
  out.rows.reserve(set.size());
  for (const auto& t : set.rows) out.rows.push_back(apply(t));
  return out;
}

std::string format_split_manifest(const SplitResult& parts, const SplitSpec& spec,
                                  std::uint64_t seed) {
  std::ostringstream os;
  os << "seed = " << seed << '\n';
  os << "train_frac = " << format_double(spec.train_frac) << '\n';
  os << "val_frac = " << format_double(spec.val_frac) << '\n';
  os << "test_frac = " << format_double(spec.test_frac) << '\n';
  auto rows = [&](const char* key, const TransactionSet& s) {
    os << key << " =";
    for (std::size_t i = 0; i < s.rows.size(); ++i) os << (i ? "," : " ") << s.rows[i].source_row;
    os << '\n';
  };
  rows("train_rows", parts.train);
  rows("val_rows", parts.val);
  rows("test_rows", parts.test);
  return os.str();
}

}  // namespace qfraud
