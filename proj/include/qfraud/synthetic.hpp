#pragma once

#include <cstddef>
#include <cstdint>

#include "qfraud/dataset.hpp"

namespace qfraud {

/// Rows with the credit-card column layout. Legitimate rows are centred
/// Gaussians; fraud rows are shifted by `shift` times per-component offsets
/// resembling the public data's class differences, with wider spread.
/// Output is shuffled. For smoke tests only.
TransactionSet synthetic_transactions(std::size_t legit, std::size_t fraud, std::uint64_t seed,
                                      double shift = 1.0);

}  // namespace qfraud
