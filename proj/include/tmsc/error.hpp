#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tmsc {

enum class Errc {
  non_uniform_sampling,
  non_finite_value,
  too_short,
  window_out_of_range,
  pad_too_large,
  empty_input,
  invalid_range,
  frequency_above_nyquist,
  degenerate_range,
  shape_mismatch,
  empty_band,
  out_of_grid_range,
  out_of_window,
  empty_score,
  mismatched_channels,
  invalid_config,
  invalid_duration,
  soc_out_of_range,
  fault_outside_span,
  parse_error,
  missing_column,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library surfaces as this exception. `index()` carries
/// the offending sample index (or 1-based line number for parse errors) when
/// one is meaningful.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  Errc code_;
  std::optional<std::size_t> index_;
};

}  // namespace tmsc
