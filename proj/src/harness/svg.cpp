#include "flp/harness/svg.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "flp/common/error.hpp"

namespace flp::harness {

namespace {

constexpr double kScale = 8.0;   // px per meter
constexpr double kPad = 20.0;    // px

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string trajectory_svg(const map::MapModel& map, std::span<const TruthSample> truth,
                           std::span<const EstimateSample> estimates, const std::string& title) {
  map::AxisBox box = map::AxisBox::empty();
  for (const auto& f : map.floors)
    for (const auto& p : f.partitions)
      for (const auto& w : p.walls) box.expand(w.bbox);
  for (const auto& s : truth) box.expand(s.position);
  for (const auto& s : estimates) box.expand(s.position);
  if (box.is_empty()) box = {{0.0, 0.0}, {1.0, 1.0}};

  const double pw = box.width() * kScale + 2.0 * kPad;
  const double ph = box.height() * kScale + 2.0 * kPad;
  const std::size_t panels = std::max<std::size_t>(map.floors.size(), 1);
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pw * static_cast<double>(panels) << "\" height=\""
     << ph + 20.0 << "\">\n";
  os << "<text x=\"" << kPad << "\" y=\"14\" font-family=\"sans-serif\" font-size=\"12\">" << escape(title)
     << "</text>\n";

  auto px = [&](std::size_t panel, map::Point2 p) {
    return std::pair{static_cast<double>(panel) * pw + kPad + (p.x - box.min.x) * kScale,
                     20.0 + kPad + (box.max.y - p.y) * kScale};
  };
  for (std::size_t fi = 0; fi < map.floors.size(); ++fi) {
    const auto& f = map.floors[fi];
    os << "<g stroke=\"#999\" stroke-width=\"1\">\n";
    for (const auto& p : f.partitions)
      for (const auto& w : p.walls) {
        const auto [x1, y1] = px(fi, w.seg.a);
        const auto [x2, y2] = px(fi, w.seg.b);
        os << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2 << "\"/>\n";
      }
    os << "</g>\n";
    const auto [lx, ly] = px(fi, {box.min.x, box.min.y});
    os << "<text x=\"" << lx << "\" y=\"" << ly + 14.0 << "\" font-family=\"sans-serif\" font-size=\"10\">floor "
       << f.index << "</text>\n";
  }

  auto polyline = [&](auto samples, const char* colour) {
    for (std::size_t fi = 0; fi < panels; ++fi) {
      os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& s : samples) {
        if (static_cast<std::size_t>(std::max(s.floor, 0)) != fi) continue;
        const auto [x, y] = px(fi, s.position);
        os << x << ',' << y << ' ';
      }
      os << "\"/>\n";
    }
  };
  polyline(truth, "black");
  polyline(estimates, "#d62728");
  os << "</svg>\n";
  return os.str();
}

void write_trajectory_svg(const std::string& path, const map::MapModel& map, std::span<const TruthSample> truth,
                          std::span<const EstimateSample> estimates, const std::string& title) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << trajectory_svg(map, truth, estimates, title);
}

}  // namespace flp::harness
