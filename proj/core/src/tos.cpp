#include "kpflow/tos.hpp"

#include <string>

#include "kpflow/errors.hpp"

namespace kpflow::tos {

std::int64_t TosTable::bin_width_kb() const noexcept {
  return (max_size_kb - mf_threshold_kb) / (num_values - 1);
}

std::int64_t TosTable::last_upper_kb() const noexcept {
  // Bin k spans [mf + 1 + (k-1)(w+1), mf + k(w+1)].
  return mf_threshold_kb + static_cast<std::int64_t>(num_values - 1) * (bin_width_kb() + 1);
}

void TosTable::validate() const {
  if (num_values < 2) throw InvalidTosTable("num_values must be >= 2");
  if (mf_threshold_kb < 1) throw InvalidTosTable("mf_threshold_kb must be >= 1");
  if (max_size_kb <= mf_threshold_kb) {
    throw InvalidTosTable("max_size_kb must exceed mf_threshold_kb");
  }
  if (bin_width_kb() < 1) throw InvalidTosTable("elephant range too narrow for num_values");
}

std::int64_t bin_index(std::int64_t size_kb, const TosTable& table) {
  if (size_kb <= table.mf_threshold_kb) return 0;
  return (size_kb - table.mf_threshold_kb - 1) / (table.bin_width_kb() + 1) + 1;
}

int tag(std::int64_t size_kb, const TosTable& table) {
  if (size_kb < 1) {
    throw NonPositiveSize("flow size must be >= 1 KB, got " + std::to_string(size_kb));
  }
  const std::int64_t k = bin_index(size_kb, table);
  if (k == 0) return table.num_values;
  if (k >= table.num_values) return 1;  // beyond the last bin
  return table.num_values - static_cast<int>(k);
}

std::vector<TaggedSize> tag_flows(std::span<const std::int64_t> sizes_kb, const TosTable& table) {
  std::vector<TaggedSize> out;
  out.reserve(sizes_kb.size());
  for (std::size_t i = 0; i < sizes_kb.size(); ++i) {
    if (sizes_kb[i] < 1) {
      throw NonPositiveSize("flow size at index " + std::to_string(i) + " must be >= 1 KB, got " +
                                std::to_string(sizes_kb[i]),
                            i);
    }
    out.push_back({tag(sizes_kb[i], table), sizes_kb[i]});
  }
  return out;
}

}  // namespace kpflow::tos
