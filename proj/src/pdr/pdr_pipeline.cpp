#include "flp/pdr/pdr_pipeline.hpp"

#include <algorithm>

#include "flp/common/error.hpp"

namespace flp::pdr {

PdrPipeline::PdrPipeline(PdrConfig config, std::vector<double> floor_heights, int initial_floor)
    : config_(config), steps_(config.fs, config.steps), dpc_(config.dpc), altitude_(config.altitude) {
  config_.step_model.validate();
  if (floor_heights.size() >= 2) floors_.emplace(std::move(floor_heights), initial_floor, config.floors);
}

double PdrPipeline::heading_at(double t) const noexcept {
  if (headings_.empty()) return orientation_.heading;
  auto it = std::upper_bound(headings_.begin(), headings_.end(), t,
                             [](double v, const auto& h) { return v < h.first; });
  if (it == headings_.begin()) return it->second;
  return std::prev(it)->second;
}

void PdrPipeline::update_bias() {
  if (window_.size() < 2 || window_.back().t - window_.front().t < config_.bias_window - 1e-9) return;
  const std::vector<ImuSample> samples(window_.begin(), window_.end());
  if (auto bias = estimate_gyro_bias(samples)) orientation_.gyro_bias = *bias;
}

void PdrPipeline::push(const ImuSample& s, std::vector<PdrEvent>& out) {
  if (last_t_ && !(s.t > *last_t_)) fail(ErrorCode::InvalidArgument, "IMU timestamps must be strictly increasing");
  const double dt = last_t_ ? std::min(s.t - *last_t_, 0.1) : 0.0;
  last_t_ = s.t;

  window_.push_back(s);
  while (window_.size() > 2 && window_[1].t <= s.t - config_.bias_window) window_.pop_front();
  if (++since_bias_check_ >= std::max(1, static_cast<int>(config_.fs / 4.0))) {
    since_bias_check_ = 0;
    update_bias();
  }

  orientation_ = update_orientation(orientation_, s, orientation_.initialized ? dt : 0.0, config_.orientation);
  headings_.emplace_back(s.t, orientation_.heading);
  const double keep = config_.heading_lookback + config_.dpc.average_window + 1.0;
  while (headings_.size() > 1 && headings_.front().first < s.t - keep) headings_.pop_front();

  if (auto flag = dpc_.push(s.t, s.accel)) {
    steps_.set_dpc(*flag);
    const double h = *flag == DpcFlag::InProgress ? heading_at(s.t - config_.dpc.average_window - config_.heading_lookback)
                                                  : orientation_.heading;
    out.emplace_back(DpcFlagEvent{s.t, *flag, h});
  }

  if (auto step = steps_.push(s.t, s.accel))
    out.emplace_back(StepEvent{step->t, step_length(step->frequency, config_.step_model), heading_at(step->t),
                               step->frequency});

  if (s.pressure) {
    last_altitude_ = altitude_.push(s.t, *s.pressure);
    if (floors_)
      if (auto e = floors_->push(*last_altitude_)) out.emplace_back(*e);
  }
}

}  // namespace flp::pdr
