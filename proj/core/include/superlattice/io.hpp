#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <utility>

#include "superlattice/asymptotics.hpp"
#include "superlattice/evolution.hpp"
#include "superlattice/hopper.hpp"
#include "superlattice/lattice.hpp"
#include "superlattice/symbol.hpp"

namespace superlattice::io {

// 17 significant digits, '.' decimal point, independent of the global locale.
[[nodiscard]] std::string format_number(double value);

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

// x,y,value over the sampled sites, x outer.
[[nodiscard]] std::string field_csv(const lattice::LatticeField& field);
[[nodiscard]] lattice::LatticeField parse_field_csv(const std::string& text);
// i,j,p,q,value
[[nodiscard]] std::string grid_csv(const symbol::GridField& grid);
// i,p,value along p = q
[[nodiscard]] std::string diagonal_csv(const symbol::GridField& grid);
// x,y,count
[[nodiscard]] std::string histogram_csv(const hopper::Histogram2D& histogram);
// t,fwhm
[[nodiscard]] std::string series_csv(std::span<const std::pair<double, double>> points);
// xi,eta,value[,gaussian]
[[nodiscard]] std::string profile_csv(const asymptotics::LimitProfile& profile, bool with_gaussian);

[[nodiscard]] nlohmann::json spec_json(const symbol::SymbolSpec& spec);
[[nodiscard]] nlohmann::json evolution_json(const evolution::EvolutionResult& result, const symbol::SymbolSpec& spec);
[[nodiscard]] nlohmann::json fit_json(const asymptotics::ScalingFit& fit);
[[nodiscard]] nlohmann::json histogram_json(const hopper::HopperConfig& config, const hopper::HopperRun& run);

// Compact JSON with a trailing newline.
[[nodiscard]] std::string dump(const nlohmann::json& value);

}  // namespace superlattice::io
