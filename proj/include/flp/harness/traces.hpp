#pragma once

#include <string>
#include <vector>

#include "flp/harness/synth.hpp"

namespace flp::harness {

/// JSON-lines codecs. Sensor records: {t, accel:[3], gyro:[3], pressure?}.
/// Measurement records: {t, kind:"gnss", x, y, sigma} or {t, kind:"rss", beacon_id, rss}.
/// PDR event records: {t, kind:"step"|"dpc"|"floor", ...}. Truth: {t, x, y, floor}.
/// Readers throw Error(ParseError) naming file and line.
void write_imu_jsonl(const std::string& path, const std::vector<pdr::ImuSample>& samples);
std::vector<pdr::ImuSample> read_imu_jsonl(const std::string& path);

void write_measurements_jsonl(const std::string& path, const std::vector<measurements::Measurement>& ms);
std::vector<measurements::Measurement> read_measurements_jsonl(const std::string& path);

void write_events_jsonl(const std::string& path, const std::vector<pdr::PdrEvent>& events);
std::vector<pdr::PdrEvent> read_events_jsonl(const std::string& path);

void write_truth_jsonl(const std::string& path, const GroundTruth& truth);
GroundTruth read_truth_jsonl(const std::string& path);

/// Step, DPC and floor events of the traces merged in time order.
std::vector<pdr::PdrEvent> pdr_events(const SensorTraces& traces);

/// Writes imu.jsonl (IMU source) or events.jsonl (step source), plus
/// measurements.jsonl and truth.jsonl, into dir (created if missing).
void write_traces(const std::string& dir, const SensorTraces& traces);

}  // namespace flp::harness
