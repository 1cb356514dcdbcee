#include "flp/filter/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "flp/common/error.hpp"

namespace flp::filter {

void NoiseConfig::validate() const {
  if (sigma_epsilon < 0.0 || sigma_beta < 0.0 || sigma_d < 0.0 || sigma_alpha < 0.0)
    fail(ErrorCode::InvalidArgument, "noise sigmas must be non-negative");
}

void FilterConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::InvalidArgument, std::string("invalid filter config: ") + what);
  };
  require(n_particles >= 1, "n_particles must be >= 1");
  require(n_clusters >= 1, "n_clusters must be >= 1");
  require(n_clusters <= n_particles, "n_clusters must not exceed n_particles");
  require(resample_weight_threshold >= 0.0, "resample_weight_threshold must be >= 0");
  require(dpc_uniform_fraction >= 0.0 && dpc_uniform_fraction <= 1.0, "dpc_uniform_fraction must lie in [0, 1]");
  require(high_rss_count >= 1, "high_rss_count must be >= 1");
  require(beacon_resample_radius > 0.0, "beacon_resample_radius must be positive");
  require(stairway_decay_lambda > 0.0, "stairway_decay_lambda must be positive");
  require(steps_per_epoch >= 1, "steps_per_epoch must be >= 1");
  require(init_epsilon_sigma >= 0.0, "init_epsilon_sigma must be >= 0");
  require(resample_jitter >= 0.0, "resample_jitter must be >= 0");
  require(exit_sigma >= 0.0, "exit_sigma must be >= 0");
  require(spawn_clearance >= 0.0, "spawn_clearance must be >= 0");
  require(cache_slots >= 1, "cache_slots must be >= 1");
  require(max_rejected_epochs >= 1, "max_rejected_epochs must be >= 1");
  noise.validate();
  rss.validate();
}

namespace {

struct Field {
  std::function<void(FilterConfig&, std::string_view)> set;
  std::function<std::string(const FilterConfig&)> get;
};

double parse_double(std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw std::invalid_argument("expected a number");
  return out;
}

std::size_t parse_count(std::string_view v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw std::invalid_argument("expected a non-negative integer");
  return out;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw std::invalid_argument("expected true/false");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

#define FLP_DOUBLE(key, expr)                                                                      \
  {                                                                                                \
    key, {[](FilterConfig& c, std::string_view v) { c.expr = parse_double(v); },                   \
          [](const FilterConfig& c) { return fmt(c.expr); } }                                      \
  }
#define FLP_COUNT(key, expr)                                                                       \
  {                                                                                                \
    key, {[](FilterConfig& c, std::string_view v) { c.expr = parse_count(v); },                    \
          [](const FilterConfig& c) { return std::to_string(c.expr); } }                           \
  }
#define FLP_BOOL(key, expr)                                                                        \
  {                                                                                                \
    key, {[](FilterConfig& c, std::string_view v) { c.expr = parse_bool(v); },                     \
          [](const FilterConfig& c) { return std::string(c.expr ? "true" : "false"); } }           \
  }

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = {
      FLP_COUNT("n_particles", n_particles),
      FLP_COUNT("n_clusters", n_clusters),
      FLP_DOUBLE("resample_weight_threshold", resample_weight_threshold),
      FLP_DOUBLE("dpc_uniform_fraction", dpc_uniform_fraction),
      FLP_DOUBLE("high_rss_threshold", high_rss_threshold),
      FLP_COUNT("high_rss_count", high_rss_count),
      FLP_DOUBLE("beacon_resample_radius", beacon_resample_radius),
      FLP_DOUBLE("stairway_decay_lambda", stairway_decay_lambda),
      FLP_COUNT("steps_per_epoch", steps_per_epoch),
      FLP_BOOL("accessibility", accessibility),
      FLP_DOUBLE("init_epsilon_sigma", init_epsilon_sigma),
      FLP_DOUBLE("resample_jitter", resample_jitter),
      FLP_DOUBLE("exit_sigma", exit_sigma),
      FLP_DOUBLE("spawn_clearance", spawn_clearance),
      FLP_COUNT("cache_slots", cache_slots),
      FLP_COUNT("max_rejected_epochs", max_rejected_epochs),
      FLP_BOOL("short_term_prediction", short_term_prediction),
      FLP_DOUBLE("sigma_epsilon", noise.sigma_epsilon),
      FLP_DOUBLE("sigma_beta", noise.sigma_beta),
      FLP_DOUBLE("sigma_d", noise.sigma_d),
      FLP_DOUBLE("sigma_alpha", noise.sigma_alpha),
      FLP_DOUBLE("rss_sigma", rss.sigma),
      FLP_BOOL("correction_enabled", correction.enabled),
      FLP_DOUBLE("grazing_angle", correction.grazing_angle),
      FLP_DOUBLE("wall_margin", correction.wall_margin),
      FLP_DOUBLE("head_on_fraction", correction.head_on_fraction),
  };
  return table;
}

#undef FLP_DOUBLE
#undef FLP_COUNT
#undef FLP_BOOL

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

FilterConfig parse_config(std::string_view text, const std::string& source_name) {
  FilterConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::InvalidArgument, where + "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    auto it = fields().find(key);
    if (it == fields().end()) fail(ErrorCode::InvalidArgument, where + "unknown key '" + std::string(key) + "'");
    try {
      it->second.set(cfg, value);
    } catch (const std::invalid_argument& e) {
      fail(ErrorCode::InvalidArgument, where + std::string(key) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

FilterConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string to_config_text(const FilterConfig& config) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(config) + "\n";
  return out;
}

}  // namespace flp::filter
