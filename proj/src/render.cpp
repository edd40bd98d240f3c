#include "lowtail/render.hpp"

#include <cstdio>
#include <sstream>

#include "lowtail/error.hpp"
#include "lowtail/spatial_grid.hpp"

namespace lowtail {

Graph display_graph(const ScoreSpec& spec, const PointConfig& config) {
  double t = 0;
  if (const auto* c = std::get_if<CliqueCount>(&spec.kind)) t = c->t;
  if (const auto* r = std::get_if<PowerEdgeRGG>(&spec.kind)) t = r->t;
  if (t > 0) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < config.size(); ++i) {
      config.grid().for_each_within(config[i], t, [&](std::size_t j, double dist) {
        if (i < j && dist < t) pairs.emplace_back(i, j);
      });
    }
    return Graph::from_pairs(config.size(), std::move(pairs));
  }
  if (const auto* k = std::get_if<KnnPower>(&spec.kind)) {
    if (config.size() <= static_cast<std::size_t>(k->k)) return Graph{config.size(), {}};
    return knn_graph(config, k->k, k->mode);
  }
  if (std::holds_alternative<RngPower>(spec.kind)) return rng_graph(config);
  return Graph{config.size(), {}};
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const PointConfig& config, const BoxWindow& frame, const Graph& edges,
                       const std::string& title, int pixels) {
  if (frame.dimension() != 2 || config.dimension() != 2) throw ParameterError("rendering is planar");
  const double pad = 20, header = 30;
  const double scale = pixels / frame.side();
  const auto sx = [&](double x) { return pad + (x - frame.lower(0)) * scale; };
  const auto sy = [&](double y) { return header + pad + (frame.upper(1) - y) * scale; };

  std::ostringstream os;
  const int width = pixels + 2 * static_cast<int>(pad);
  const int height = pixels + 2 * static_cast<int>(pad) + static_cast<int>(header);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(pad) << "\" y=\"" << fmt(header - 8)
     << "\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << fmt(pad) << "\" y=\"" << fmt(header + pad) << "\" width=\"" << pixels
     << "\" height=\"" << pixels << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  os << "<g stroke=\"#4a6fa5\" stroke-width=\"1\">\n";
  for (const auto& [i, j] : edges.edges) {
    if (!frame.contains(config[i]) || !frame.contains(config[j])) continue;
    os << "<line x1=\"" << fmt(sx(config[i][0])) << "\" y1=\"" << fmt(sy(config[i][1])) << "\" x2=\""
       << fmt(sx(config[j][0])) << "\" y2=\"" << fmt(sy(config[j][1])) << "\"/>\n";
  }
  os << "</g>\n<g fill=\"black\">\n";
  for (const Point& p : config.points()) {
    if (!frame.contains(p)) continue;
    os << "<circle cx=\"" << fmt(sx(p[0])) << "\" cy=\"" << fmt(sy(p[1])) << "\" r=\"3\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace lowtail
