#include "bedpose/trigger.hpp"

#include <cstdlib>
#include <string>

#include "bedpose/error.hpp"

namespace bedpose {

void TriggerConfig::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "rho must lie in [0,1]");
  if (n_bf < 1) throw Error(ErrorCode::kInvalidArgument, "n_bf must be >= 1");
  if (tau_p < 0 || tau_p > 255) throw Error(ErrorCode::kInvalidArgument, "tau_p must lie in [0,255]");
}

double frame_difference(const GrayFrame& prev, const GrayFrame& cur, int tau_p) {
  if (prev.width() != cur.width() || prev.height() != cur.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "frame " + std::to_string(cur.width()) + "x" + std::to_string(cur.height()) +
                    " does not match previous " + std::to_string(prev.width()) + "x" +
                    std::to_string(prev.height()));
  }
  const auto a = prev.data();
  const auto b = cur.data();
  std::size_t changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(int(b[i]) - int(a[i])) > tau_p) ++changed;
  }
  return static_cast<double>(changed) / static_cast<double>(a.size());
}

OnDemandTrigger::OnDemandTrigger(TriggerConfig config) : config_(config) {
  config_.validate();
  window_.assign(static_cast<std::size_t>(config_.n_bf), 1);
  dynamic_in_window_ = window_.size();
}

TriggerEvent OnDemandTrigger::step(const GrayFrame& frame) {
  bool dynamic = true;
  if (prev_frame_) {
    dynamic = frame_difference(*prev_frame_, frame, config_.tau_p) > config_.rho;
  }
  prev_frame_ = frame;
  return push_raw(dynamic);
}

TriggerEvent OnDemandTrigger::push_raw(bool dynamic) {
  dynamic_in_window_ -= window_.front();
  window_.pop_front();
  window_.push_back(dynamic ? 1 : 0);
  dynamic_in_window_ += window_.back();

  const bool s_hat = dynamic_in_window_ > 0;
  const bool falling = !s_hat && s_hat_prev_;
  s_hat_prev_ = s_hat;
  return falling ? TriggerEvent::kTrigger : TriggerEvent::kNone;
}

TriggerTrace run_trigger(const FrameSequence& seq, const TriggerConfig& config) {
  OnDemandTrigger trigger(config);
  TriggerTrace trace;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const auto event = trigger.step(seq.frames[i]);
    trace.raw.push_back(trigger.last_raw_state() ? 1 : 0);
    trace.filtered.push_back(trigger.filtered_state() ? 1 : 0);
    if (event == TriggerEvent::kTrigger) trace.trigger_frames.push_back(i);
  }
  return trace;
}

}  // namespace bedpose
