#include "tmsc/error.hpp"

namespace tmsc {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::non_uniform_sampling: return "NonUniformSampling";
    case Errc::non_finite_value: return "NonFiniteValue";
    case Errc::too_short: return "TooShort";
    case Errc::window_out_of_range: return "WindowOutOfRange";
    case Errc::pad_too_large: return "PadTooLarge";
    case Errc::empty_input: return "EmptyInput";
    case Errc::invalid_range: return "InvalidRange";
    case Errc::frequency_above_nyquist: return "FrequencyAboveNyquist";
    case Errc::degenerate_range: return "DegenerateRange";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::empty_band: return "EmptyBand";
    case Errc::out_of_grid_range: return "OutOfGridRange";
    case Errc::out_of_window: return "OutOfWindow";
    case Errc::empty_score: return "EmptyScore";
    case Errc::mismatched_channels: return "MismatchedChannels";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::invalid_duration: return "InvalidDuration";
    case Errc::soc_out_of_range: return "SocOutOfRange";
    case Errc::fault_outside_span: return "FaultOutsideSpan";
    case Errc::parse_error: return "ParseError";
    case Errc::missing_column: return "MissingColumn";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string decorate(Errc code, const std::string& message,
                     std::optional<std::size_t> index) {
  std::string out(to_string(code));
  if (index) out += " at " + std::to_string(*index);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(decorate(code, message, index)),
      code_(code),
      index_(index) {}

}  // namespace tmsc
