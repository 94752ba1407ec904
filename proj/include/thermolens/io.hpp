#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "thermolens/energy.hpp"
#include "thermolens/verification.hpp"

namespace thermolens {

inline constexpr std::string_view kSeriesHeader =
    "t,E0,E1,E2,D_p,E_theta,D_theta,Lambda,Fterm,min_alpha";

// One row per report, 17 significant digits; parsing the text back gives
// the same doubles.
std::string render_timeseries(const std::vector<EnergyReport>& series);
std::vector<EnergyReport> parse_timeseries(std::string_view text);

void write_timeseries(const std::vector<EnergyReport>& series, const std::filesystem::path& path);
std::vector<EnergyReport> read_timeseries(const std::filesystem::path& path);

// level,n,dt,error rows followed by an `orders` footer row.
std::string render_study(const ConvergenceStudy& study);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace thermolens
