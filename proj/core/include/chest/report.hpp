#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "chest/experiments.hpp"
#include "chest/metrics.hpp"

namespace chest {

inline constexpr const char* kCsvHeader =
    "method,snr_db,n_pilots,nmse_emp,nmse_floor,nmse_noise,se_bps_hz,trials";

/// Rows sorted by method, snr_db, n_pilots; floats with 9 significant digits.
std::string format_csv(std::span<const MetricsRecord> records);

/// Throws std::invalid_argument on an empty record list (no file is
/// created) and std::runtime_error on I/O failure.
void emit_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path);

enum class PlotMetric { nmse_db, spectral_efficiency };
enum class PlotAxis { snr_db, n_pilots };

void emit_plot(std::span<const MetricsRecord> records, const std::filesystem::path& path,
               PlotMetric metric, PlotAxis axis = PlotAxis::snr_db);

/// method,snr_db,post_snr_db,cdf; at most `max_points` rows per table.
std::string format_ecdf_csv(std::span<const EcdfTable> tables, std::size_t max_points = 512);
void emit_ecdf_csv(std::span<const EcdfTable> tables, const std::filesystem::path& path);
void emit_ecdf_plot(std::span<const EcdfTable> tables, const std::filesystem::path& path);

/// n_batch,snr_db,nmse_emp,std_error,trials
void emit_ntb_csv(std::span<const BatchFloorRecord> records, const std::filesystem::path& path);

}  // namespace chest
