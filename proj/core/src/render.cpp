#include "topoexp/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "topoexp/text_util.hpp"

namespace topoexp {

namespace {

std::string num(double v) { return text::format_fixed(v, 3); }

struct Rgb {
  std::uint8_t r, g, b;
};

class Canvas {
 public:
  Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h, Rgb{255, 255, 255}) {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
    px_[static_cast<std::size_t>(h_ - 1 - y) * w_ + x] = c;
  }

  void line(double x0, double y0, double x1, double y1, Rgb c) {
    const int steps = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
    for (int k = 0; k <= steps; ++k) {
      const double t = static_cast<double>(k) / steps;
      set(static_cast<int>(std::floor(x0 + (x1 - x0) * t)), static_cast<int>(std::floor(y0 + (y1 - y0) * t)), c);
    }
  }

  void dot(double x, double y, int r, Rgb c) {
    const int cx = static_cast<int>(std::floor(x));
    const int cy = static_cast<int>(std::floor(y));
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy <= r * r) set(cx + dx, cy + dy, c);
      }
    }
  }

  std::string encode() const {
    std::string out = "P6\n" + std::to_string(w_) + " " + std::to_string(h_) + "\n255\n";
    out.reserve(out.size() + px_.size() * 3);
    for (const Rgb& p : px_) {
      out.push_back(static_cast<char>(p.r));
      out.push_back(static_cast<char>(p.g));
      out.push_back(static_cast<char>(p.b));
    }
    return out;
  }

 private:
  int w_;
  int h_;
  std::vector<Rgb> px_;
};

}  // namespace

std::string render_svg(const WorldMap& world, const TopoGraph& g, std::span<const Vec3> trajectory) {
  const double res = world.resolution();
  const double w = world.width() * res;
  const double h = world.height() * res;
  const double x0 = world.origin_x();
  const double y0 = world.origin_y();
  // Flip y so north is up.
  auto sx = [&](double x) { return num(x - x0); };
  auto sy = [&](double y) { return num(h - (y - y0)); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + num(w) + " " + num(h) +
         "\" width=\"" + std::to_string(world.width()) + "\" height=\"" +
         std::to_string(world.height()) + "\">\n";
  out +=
      "<style>.occ{fill:#444}.edge{stroke:#7a8fb8;stroke-width:0.05}"
      ".traj{fill:none;stroke:#2a9d3a;stroke-width:0.08}.waypoint{fill:#1f4fd1}"
      ".frontier{fill:#d12f1f}</style>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"#fff\"/>\n";
  for (int cy = 0; cy < world.height(); ++cy) {
    int cx = 0;
    while (cx < world.width()) {
      if (!world.occupied(cx, cy)) {
        ++cx;
        continue;
      }
      const int run_start = cx;
      while (cx < world.width() && world.occupied(cx, cy)) ++cx;
      out += "<rect class=\"occ\" x=\"" + num(run_start * res) + "\" y=\"" +
             num(h - (cy + 1) * res) + "\" width=\"" + num((cx - run_start) * res) +
             "\" height=\"" + num(res) + "\"/>\n";
    }
  }
  if (trajectory.size() >= 2) {
    out += "<polyline class=\"traj\" points=\"";
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
      if (k > 0 && trajectory[k] == trajectory[k - 1]) continue;
      out += sx(trajectory[k].x) + "," + sy(trajectory[k].y) + " ";
    }
    out += "\"/>\n";
  }
  for (const auto& [id, n] : g.nodes()) {
    for (const Edge& e : n.adj) {
      if (!(id < e.to)) continue;
      const Vec3& b = g.node(e.to).position;
      out += "<line class=\"edge\" x1=\"" + sx(n.position.x) + "\" y1=\"" + sy(n.position.y) +
             "\" x2=\"" + sx(b.x) + "\" y2=\"" + sy(b.y) + "\"/>\n";
    }
  }
  for (const auto& [id, n] : g.nodes()) {
    out += std::string("<circle class=\"") + (n.is_waypoint() ? "waypoint" : "frontier") +
           "\" data-id=\"" + to_string(id) + "\" cx=\"" + sx(n.position.x) + "\" cy=\"" +
           sy(n.position.y) + "\" r=\"0.25\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_ppm(const WorldMap& world, const TopoGraph& g, std::span<const Vec3> trajectory) {
  Canvas canvas(world.width(), world.height());
  for (int cy = 0; cy < world.height(); ++cy) {
    for (int cx = 0; cx < world.width(); ++cx) {
      if (world.occupied(cx, cy)) canvas.set(cx, cy, {68, 68, 68});
    }
  }
  const double res = world.resolution();
  auto px = [&](const Vec3& p) { return std::pair{(p.x - world.origin_x()) / res, (p.y - world.origin_y()) / res}; };
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const auto [ax, ay] = px(trajectory[k - 1]);
    const auto [bx, by] = px(trajectory[k]);
    canvas.line(ax, ay, bx, by, {42, 157, 58});
  }
  for (const auto& [id, n] : g.nodes()) {
    for (const Edge& e : n.adj) {
      if (!(id < e.to)) continue;
      const auto [ax, ay] = px(n.position);
      const auto [bx, by] = px(g.node(e.to).position);
      canvas.line(ax, ay, bx, by, {122, 143, 184});
    }
  }
  const int r = std::max(1, static_cast<int>(std::round(0.25 / res)));
  for (const auto& [id, n] : g.nodes()) {
    const auto [x, y] = px(n.position);
    canvas.dot(x, y, r, n.is_waypoint() ? Rgb{31, 79, 209} : Rgb{209, 47, 31});
  }
  return canvas.encode();
}

void render_snapshot(const WorldMap& world, const TopoGraph& g, std::span<const Vec3> trajectory,
                     const std::string& path) {
  const bool ppm = path.size() >= 4 && path.compare(path.size() - 4, 4, ".ppm") == 0;
  const std::string data = ppm ? render_ppm(world, g, trajectory) : render_svg(world, g, trajectory);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot " + path);
  out << data;
  if (!out) throw std::runtime_error("failed writing snapshot " + path);
}

}  // namespace topoexp
