#include "flp/filter/engine.hpp"

#include <algorithm>

#include "flp/common/error.hpp"

namespace flp::filter {

namespace {

int prior_floor(const Prior& prior) {
  return std::visit([](const auto& p) { return p.floor; }, prior);
}

constexpr double kStepHistory = 30.0;  // s of steps kept for replay after a floor change

}  // namespace

Engine::Engine(std::shared_ptr<const map::MapModel> map, FilterConfig config, const Prior& prior, std::uint32_t seed,
               pdr::PdrConfig pdr_config)
    : map_(std::move(map)),
      config_(config),
      pdr_config_(pdr_config),
      cloud_(init_cloud(prior, config, *map_, seed)),
      cache_(map::map_loader(*map_), config.cache_slots),
      floor_(prior_floor(prior)) {
  clusters_ = kmeans_step(cloud_, {}, std::min(config_.n_clusters, cloud_.size()));
  estimate_ = output_estimate(clusters_);
}

void Engine::feed(const pdr::ImuSample& sample) {
  if (!pdr_) pdr_.emplace(pdr_config_, map_->floor_heights(), floor_);
  pdr_events_.clear();
  pdr_->push(sample, pdr_events_);
  for (const auto& e : pdr_events_) feed(e);
}

void Engine::feed(const pdr::PdrEvent& event) {
  std::visit([this](const auto& e) { feed(e); }, event);
}

void Engine::feed(const pdr::StepEvent& step) {
  ++counters_.steps;
  last_t_ = std::max(last_t_, step.t);
  pending_steps_.push_back(step);
  since_output_.push_back(step);
  recent_steps_.push_back(step);
  while (!recent_steps_.empty() && recent_steps_.front().t < step.t - kStepHistory) recent_steps_.pop_front();
  maybe_trigger();
}

void Engine::feed(const measurements::Measurement& m) {
  last_t_ = std::max(last_t_, measurements::measurement_time(m));
  if (const auto* r = std::get_if<measurements::RssObservation>(&m)) {
    const map::Beacon* b = map_->find_beacon(r->beacon_id);
    if (!b) fail(ErrorCode::UnknownBeacon, "beacon '" + r->beacon_id + "' is not in the map");
    if (b->floor != floor_) {
      ++counters_.skipped_rss;
      return;
    }
  }
  pending_meas_.push_back(m);
  maybe_trigger();
}

void Engine::feed(const pdr::DpcFlagEvent& flag) {
  last_t_ = std::max(last_t_, flag.t);
  if (flag.flag == pdr::DpcFlag::InProgress) {
    if (!dpc_active_) {
      dpc_active_ = true;
      dpc_heading_before_ = flag.heading;
    }
    return;
  }
  if (!dpc_active_) return;
  dpc_active_ = false;
  pending_dpc_ = {dpc_heading_before_, flag.heading};
  maybe_trigger();
}

void Engine::feed(const pdr::FloorEvent& event) {
  last_t_ = std::max(last_t_, event.t);
  if (!map_->has_floor(event.new_floor))
    fail(ErrorCode::UnknownFloor, "floor event targets unknown floor " + std::to_string(event.new_floor));
  if (!pending_steps_.empty() || !pending_meas_.empty() || pending_dpc_) flush();

  const auto outcome = handle_floor_change(cloud_, event.new_floor, *map_, config_);
  ++counters_.floor_changes;
  if (outcome.fallback_global) ++counters_.global_fallbacks;
  floor_ = event.new_floor;

  // Steps walked after the climb ended but before the event was detected.
  std::vector<pdr::StepEvent> late;
  for (const auto& s : recent_steps_)
    if (s.t > event.t - event.latency && s.t <= event.t) late.push_back(s);
  if (!late.empty() && !outcome.resampled_indices.empty()) {
    const UpdateEpoch replay = make_epoch(late, {}, UpdateEpoch::Trigger::Flush);
    predict(cloud_, replay, config_.noise, *map_, outcome.resampled_indices);
    for (auto& p : cloud_.particles) p.start = p.position();
  }
  clusters_ = kmeans_step(cloud_, {}, std::min(config_.n_clusters, cloud_.size()));
  estimate_ = output_estimate(clusters_);
  estimate_->t = event.t;
  floor_ = estimate_->floor;
  since_output_.clear();
}

void Engine::maybe_trigger() {
  if (dpc_active_) return;
  if (auto epoch = epoch_trigger(pending_steps_, pending_meas_, config_)) {
    run_epoch(*epoch);
    pending_steps_.clear();
    pending_meas_.clear();
  }
}

void Engine::flush() {
  if (pending_steps_.empty() && pending_meas_.empty() && !pending_dpc_) return;
  run_epoch(make_epoch(pending_steps_, pending_meas_, UpdateEpoch::Trigger::Flush));
  pending_steps_.clear();
  pending_meas_.clear();
}

void Engine::run_epoch(const UpdateEpoch& epoch) {
  ++cloud_.epoch;
  ++counters_.epochs;
  if (pending_dpc_) {
    apply_dpc(cloud_, pending_dpc_->first, pending_dpc_->second, config_.dpc_uniform_fraction);
    pending_dpc_.reset();
  }
  predict(cloud_, epoch, config_.noise, *map_);
  const auto meas = measurement_update(cloud_, epoch.measurements, *map_, config_);
  const auto coll = apply_collisions(cloud_, *map_, cache_, config_.correction);
  counters_.killed += coll.killed + coll.out_of_map;
  counters_.corrected += coll.corrected;
  counters_.evicted += coll.evicted;
  if (coll.rejected) {
    ++counters_.rejected_epochs;
    // The map contradicts every hypothesis repeatedly: start over from the beacon or globally.
    if (++rejected_run_ >= config_.max_rejected_epochs) {
      for (auto& p : cloud_.particles) p.weight = 0.0;
      rejected_run_ = 0;
    }
  } else {
    rejected_run_ = 0;
  }

  const map::Beacon* anchor = meas.high_rss ? meas.beacon : nullptr;
  const auto res = partial_resample(cloud_, config_, *map_, anchor, floor_);
  counters_.resampled += res.replaced;
  if (res.fallback_global) ++counters_.global_fallbacks;

  clusters_ = kmeans_step(cloud_, clusters_, std::min(config_.n_clusters, cloud_.size()));
  estimate_ = output_estimate(clusters_);
  estimate_->t = std::max(epoch.t, last_t_);
  floor_ = estimate_->floor;
  since_output_.clear();
}

std::optional<Estimate> Engine::poll() const {
  if (!estimate_) return std::nullopt;
  Estimate e = *estimate_;
  if (config_.short_term_prediction && !since_output_.empty()) {
    e.position = short_term_predict(e, since_output_);
    e.t = std::max(e.t, since_output_.back().t);
  }
  return e;
}

}  // namespace flp::filter
