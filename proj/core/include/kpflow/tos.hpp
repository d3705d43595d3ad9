#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kpflow::tos {

/// Size-to-tag mapping. Sizes up to the mice threshold get the top value;
/// larger sizes fall into consecutive bins of `bin_width_kb() + 1` KB, each
/// one value lower than the previous.
struct TosTable {
  std::int64_t mf_threshold_kb = 100;
  std::int64_t max_size_kb = 200'000;
  int num_values = 255;

  /// (max_size - mf_threshold) / (num_values - 1); 787 with the defaults.
  std::int64_t bin_width_kb() const noexcept;
  /// Upper edge of the last elephant bin; 200252 KB with the defaults.
  std::int64_t last_upper_kb() const noexcept;

  /// Throws InvalidTosTable.
  void validate() const;
};

struct TaggedSize {
  int value = 0;
  std::int64_t size_kb = 0;

  friend bool operator==(const TaggedSize&, const TaggedSize&) = default;
};

/// Tag in [1, num_values]. Throws NonPositiveSize for size_kb < 1.
int tag(std::int64_t size_kb, const TosTable& table = {});

/// 1-based elephant bin index for a size above the mice threshold;
/// 0 for mice. Not clamped.
std::int64_t bin_index(std::int64_t size_kb, const TosTable& table = {});

/// Element-wise tag; NonPositiveSize carries the offending index.
std::vector<TaggedSize> tag_flows(std::span<const std::int64_t> sizes_kb,
                                  const TosTable& table = {});

}  // namespace kpflow::tos
