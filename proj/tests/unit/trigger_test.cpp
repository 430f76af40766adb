#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "../support.hpp"
#include "bedpose/error.hpp"
#include "bedpose/trigger.hpp"

using namespace bedpose;
using testing_support::make_frame;

namespace {

TriggerConfig window_of(int n) {
  TriggerConfig c;
  c.n_bf = n;
  return c;
}

std::vector<std::uint8_t> feed(OnDemandTrigger& t, const std::vector<int>& raw,
                               std::vector<std::size_t>* fired, std::size_t offset = 0) {
  std::vector<std::uint8_t> filtered;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (t.push_raw(raw[i] != 0) == TriggerEvent::kTrigger) fired->push_back(offset + i + 1);
    filtered.push_back(t.filtered_state() ? 1 : 0);
  }
  return filtered;
}

}  // namespace

TEST(TriggerConfig, Validation) {
  EXPECT_NO_THROW(TriggerConfig{}.validate());
  EXPECT_THROW(window_of(0).validate(), Error);
  TriggerConfig c;
  c.rho = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c.rho = -0.1;
  EXPECT_THROW(c.validate(), Error);
}

TEST(FrameDifference, Examples) {
  const GrayFrame a(10, 10, 40);
  EXPECT_EQ(frame_difference(a, a, 15), 0.0);
  EXPECT_EQ(frame_difference(GrayFrame(10, 10, 0), GrayFrame(10, 10, 255), 10), 1.0);
  const auto half = make_frame(10, 10, [](int r, int) { return r < 5 ? 40 : 90; });
  EXPECT_EQ(frame_difference(a, half, 15), 0.5);
  // Strictly greater than tau_p.
  EXPECT_EQ(frame_difference(a, GrayFrame(10, 10, 55), 15), 0.0);
  EXPECT_EQ(frame_difference(a, GrayFrame(10, 10, 56), 15), 1.0);
  try {
    frame_difference(a, GrayFrame(10, 11, 40), 15);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(OnDemandTrigger, InitialStableScene) {
  OnDemandTrigger t(window_of(3));
  std::vector<std::size_t> fired;
  EXPECT_EQ(feed(t, {0, 0, 0}, &fired), (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_EQ(fired, (std::vector<std::size_t>{3}));
  EXPECT_EQ(feed(t, {1, 1, 0, 0, 0}, &fired, 3), (std::vector<std::uint8_t>{1, 1, 1, 1, 0}));
  EXPECT_EQ(fired, (std::vector<std::size_t>{3, 8}));
  EXPECT_EQ(feed(t, std::vector<int>(50, 0), &fired, 8), std::vector<std::uint8_t>(50, 0));
  EXPECT_EQ(fired.size(), 2u);
}

TEST(OnDemandTrigger, FirstFrameCountsAsDynamic) {
  OnDemandTrigger t(window_of(2));
  const GrayFrame still(8, 8, 70);
  EXPECT_EQ(t.step(still), TriggerEvent::kNone);
  EXPECT_TRUE(t.last_raw_state());
  EXPECT_EQ(t.step(still), TriggerEvent::kNone);
  EXPECT_FALSE(t.last_raw_state());
  EXPECT_EQ(t.step(still), TriggerEvent::kTrigger);
  EXPECT_THROW(t.step(GrayFrame(9, 8, 70)), Error);
}

TEST(OnDemandTrigger, MotionDetectedAboveRho) {
  TriggerConfig c = window_of(1);
  c.rho = 0.25;
  OnDemandTrigger t(c);
  t.step(GrayFrame(4, 4, 0));
  // 4 of 16 pixels change: 0.25 is not above rho.
  t.step(make_frame(4, 4, [](int r, int) { return r == 0 ? 100 : 0; }));
  EXPECT_TRUE(t.last_raw_state() == false);
  t.step(make_frame(4, 4, [](int r, int) { return r <= 1 ? 0 : 100; }));
  EXPECT_TRUE(t.last_raw_state());
}

TEST(OnDemandTrigger, WindowInvariantsOnRandomStreams) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const double p_dynamic = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    OnDemandTrigger t(window_of(n));
    std::vector<int> raw;
    std::vector<std::size_t> fired;
    bool filtered_prev = true;
    for (int i = 0; i < 300; ++i) {
      const bool dyn = std::bernoulli_distribution(p_dynamic)(rng);
      raw.push_back(dyn);
      const bool event = t.push_raw(dyn) == TriggerEvent::kTrigger;
      ASSERT_EQ(t.window().size(), static_cast<std::size_t>(n));
      // Naive window over the prefilled history.
      bool any_dynamic = false;
      for (int k = i - n + 1; k <= i; ++k) any_dynamic = any_dynamic || k < 0 || raw[k];
      ASSERT_EQ(t.filtered_state(), any_dynamic);
      ASSERT_EQ(event, filtered_prev && !any_dynamic);
      filtered_prev = any_dynamic;
      if (event) {
        for (int k = i - n + 1; k <= i; ++k) ASSERT_EQ(raw[k], 0);
        if (!fired.empty()) {
          ASSERT_TRUE(std::any_of(raw.begin() + static_cast<long>(fired.back()) + 1, raw.end(),
                                  [](int v) { return v == 1; }));
        }
        fired.push_back(static_cast<std::size_t>(i));
      }
    }
  }
}

TEST(OnDemandTrigger, OneEventPerStaticEpisodeWithinWindow) {
  std::mt19937_64 rng(32);
  const int n = 10;
  std::vector<int> raw;
  std::vector<std::size_t> transitions{0};
  for (int episode = 0; episode < 6; ++episode) {
    if (episode > 0) {
      const int moving = std::uniform_int_distribution<int>(1, 15)(rng);
      for (int k = 0; k < moving; ++k) raw.push_back(1);
      transitions.push_back(raw.size());
    }
    const int hold = std::uniform_int_distribution<int>(n, 40)(rng);
    for (int k = 0; k < hold; ++k) raw.push_back(0);
  }
  OnDemandTrigger t(window_of(n));
  std::vector<std::size_t> fired;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (t.push_raw(raw[i] != 0) == TriggerEvent::kTrigger) fired.push_back(i);
  }
  ASSERT_EQ(fired.size(), transitions.size());
  for (std::size_t e = 0; e < fired.size(); ++e) {
    EXPECT_GE(fired[e], transitions[e]);
    EXPECT_LE(fired[e] - transitions[e], static_cast<std::size_t>(n));
  }
}

TEST(RunTrigger, TraceMatchesStepping) {
  FrameSequence seq;
  seq.fps = 10;
  for (int i = 0; i < 20; ++i) seq.frames.push_back(GrayFrame(6, 6, i >= 8 && i < 11 ? 120 + 30 * (i - 8) : 50));
  const auto trace = run_trigger(seq, window_of(3));
  ASSERT_EQ(trace.raw.size(), 20u);
  ASSERT_EQ(trace.filtered.size(), 20u);
  EXPECT_EQ(trace.raw[0], 1);
  EXPECT_EQ(trace.trigger_frames, (std::vector<std::size_t>{3, 14}));
}
