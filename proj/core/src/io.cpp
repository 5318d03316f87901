#include "superlattice/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "superlattice/errors.hpp"

namespace superlattice::io {

std::string format_number(double value) {
  std::array<char, 40> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return {buf.data(), end};
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field_csv(const lattice::LatticeField& field) {
  std::string out = "x,y,value\n";
  for (std::int64_t i = 0; i < field.width(); ++i)
    for (std::int64_t j = 0; j < field.height(); ++j) {
      const auto p = field.site(i, j);
      out += std::to_string(p.x) + ',' + std::to_string(p.y) + ',' + format_number(field.sample(i, j)) + '\n';
    }
  return out;
}

lattice::LatticeField parse_field_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,value") throw IoError("field CSV must start with x,y,value");
  struct Row {
    std::int64_t x, y;
    double v;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r{};
    const char* p = line.data();
    const char* end = p + line.size();
    auto field = [&](auto& target) {
      const auto [next, ec] = std::from_chars(p, end, target);
      if (ec != std::errc{}) throw IoError("malformed field CSV line: " + line);
      p = next < end && *next == ',' ? next + 1 : next;
    };
    field(r.x);
    field(r.y);
    field(r.v);
    rows.push_back(r);
  }
  if (rows.empty()) return {};
  std::int64_t x0 = rows.front().x, x1 = x0, y0 = rows.front().y, y1 = y0;
  for (const auto& r : rows) {
    x0 = std::min(x0, r.x);
    x1 = std::max(x1, r.x);
    y0 = std::min(y0, r.y);
    y1 = std::max(y1, r.y);
  }
  // infer the sublattice spacing from the coordinate gaps
  std::int64_t stride = 0;
  for (const auto& r : rows) stride = std::gcd(stride, std::gcd(r.x - x0, r.y - y0));
  if (stride == 0) stride = 1;
  lattice::LatticeField f({x0, y0}, {(x1 - x0) / stride + 1, (y1 - y0) / stride + 1}, stride);
  for (const auto& r : rows) f.set({r.x, r.y}, r.v);
  return f;
}

std::string grid_csv(const symbol::GridField& grid) {
  std::string out = "i,j,p,q,value\n";
  for (std::int64_t i = 0; i < grid.n; ++i)
    for (std::int64_t j = 0; j < grid.n; ++j)
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_number(grid.node(i)) + ',' +
             format_number(grid.node(j)) + ',' + format_number(grid.at(i, j)) + '\n';
  return out;
}

std::string diagonal_csv(const symbol::GridField& grid) {
  std::string out = "i,p,value\n";
  for (std::int64_t i = 0; i < grid.n; ++i)
    out += std::to_string(i) + ',' + format_number(grid.node(i)) + ',' + format_number(grid.at(i, i)) + '\n';
  return out;
}

std::string histogram_csv(const hopper::Histogram2D& histogram) {
  std::string out = "x,y,count\n";
  const auto& w = histogram.window;
  for (std::int64_t x = w.origin.x; x < w.origin.x + w.extent.width; ++x)
    for (std::int64_t y = w.origin.y; y < w.origin.y + w.extent.height; ++y)
      out += std::to_string(x) + ',' + std::to_string(y) + ',' + std::to_string(histogram.at({x, y})) + '\n';
  return out;
}

std::string series_csv(std::span<const std::pair<double, double>> points) {
  std::string out = "t,fwhm\n";
  for (const auto& [t, w] : points) out += format_number(t) + ',' + format_number(w) + '\n';
  return out;
}

std::string profile_csv(const asymptotics::LimitProfile& profile, bool with_gaussian) {
  std::string out = with_gaussian ? "xi,eta,value,gaussian\n" : "xi,eta,value\n";
  for (std::int64_t i = -profile.radius; i <= profile.radius; ++i)
    for (std::int64_t j = -profile.radius; j <= profile.radius; ++j) {
      const double xi = profile.spacing * static_cast<double>(i);
      const double eta = profile.spacing * static_cast<double>(j);
      out += format_number(xi) + ',' + format_number(eta) + ',' + format_number(profile.at(i, j));
      if (with_gaussian) out += ',' + format_number(asymptotics::gaussian_profile(profile.s, xi, eta));
      out += '\n';
    }
  return out;
}

nlohmann::json spec_json(const symbol::SymbolSpec& spec) {
  nlohmann::json j;
  j["s"] = spec.s();
  if (spec.order()) j["truncation"] = *spec.order();
  else j["truncation"] = "inf";
  return j;
}

nlohmann::json evolution_json(const evolution::EvolutionResult& result, const symbol::SymbolSpec& spec) {
  nlohmann::json j = spec_json(spec);
  j["t"] = result.t;
  j["grid_n"] = result.grid_n;
  j["stride"] = result.stride;
  j["captured_mass"] = result.captured_mass;
  j["window_mass"] = result.window_mass;
  j["refinement_error"] = result.refinement_error;
  j["imaginary_residue"] = result.imaginary_residue;
  return j;
}

nlohmann::json fit_json(const asymptotics::ScalingFit& fit) {
  nlohmann::json j;
  j["kappa"] = fit.kappa;
  j["c"] = fit.c;
  j["stderr_kappa"] = fit.stderr_kappa;
  j["points"] = nlohmann::json::array();
  for (const auto& [t, w] : fit.points) j["points"].push_back({t, w});
  return j;
}

nlohmann::json histogram_json(const hopper::HopperConfig& config, const hopper::HopperRun& run) {
  nlohmann::json j;
  j["s"] = config.s;
  j["t"] = config.t_final;
  j["n_walkers"] = config.n_walkers;
  j["seed"] = config.seed;
  j["k_cap"] = run.k_cap;
  j["tail_mass"] = run.tail_mass;
  j["out_of_window"] = run.histogram.out_of_window;
  j["truncated_rate"] = run.truncated_rate;
  return j;
}

std::string dump(const nlohmann::json& value) { return value.dump(2) + '\n'; }

}  // namespace superlattice::io
