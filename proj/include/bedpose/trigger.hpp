#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "bedpose/image.hpp"

namespace bedpose {

struct TriggerConfig {
  int tau_p = 15;     // per-pixel absolute difference threshold
  double rho = 0.02;  // changed-pixel fraction threshold
  int n_bf = 30;      // backward window length

  void validate() const;
};

/// Fraction of pixels whose absolute difference exceeds tau_p.
double frame_difference(const GrayFrame& prev, const GrayFrame& cur, int tau_p);

enum class TriggerEvent { kNone, kTrigger };

/// On-demand estimation trigger. Raw scene states (1 dynamic, 0 static) feed a
/// backward window; the filtered state is the window maximum, and a falling
/// edge of the filtered state fires an estimate. The window starts full of
/// 1s and the first frame counts as dynamic, so the first sustained static
/// scene fires once.
class OnDemandTrigger {
 public:
  explicit OnDemandTrigger(TriggerConfig config);

  /// Classifies `frame` against the previous one and advances the window.
  TriggerEvent step(const GrayFrame& frame);
  /// Advances the window with an already-classified raw state.
  TriggerEvent push_raw(bool dynamic);

  const TriggerConfig& config() const noexcept { return config_; }
  const std::deque<std::uint8_t>& window() const noexcept { return window_; }
  bool filtered_state() const noexcept { return s_hat_prev_; }
  /// Raw state of the most recent step.
  bool last_raw_state() const noexcept { return window_.back() != 0; }

 private:
  TriggerConfig config_;
  std::deque<std::uint8_t> window_;
  std::size_t dynamic_in_window_ = 0;
  bool s_hat_prev_ = true;
  std::optional<GrayFrame> prev_frame_;
};

struct TriggerTrace {
  std::vector<std::uint8_t> raw;
  std::vector<std::uint8_t> filtered;
  std::vector<std::size_t> trigger_frames;
};

/// Runs a fresh trigger over a whole sequence.
TriggerTrace run_trigger(const FrameSequence& seq, const TriggerConfig& config);

}  // namespace bedpose
