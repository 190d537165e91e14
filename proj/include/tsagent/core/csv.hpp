#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsagent/core/panel.hpp"

namespace tsagent {

struct PanelColumns {
    std::string id = "unique_id";
    std::string time = "ds";
    std::string value = "y";
};

/// Minimal RFC 4180 reader: header row plus records, quoted fields allowed.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row

    std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Long-format CSV to panel. The frequency is inferred unless `freq_override` is given.
SeriesPanel parse_panel(std::istream& in, const PanelColumns& columns = {},
                        std::optional<Frequency> freq_override = std::nullopt);
SeriesPanel parse_panel(const std::filesystem::path& path, const PanelColumns& columns = {},
                        std::optional<Frequency> freq_override = std::nullopt);

/// Values are written with 17 significant digits so that parse_panel restores them exactly.
void write_panel_csv(std::ostream& out, const SeriesPanel& panel, const PanelColumns& columns = {});

/// unique_id, ds, model, mean, q<level*100>... one row per (frame, series, step).
/// All frames must share the same quantile levels (or have none).
void write_forecast_csv(std::ostream& out, const std::vector<ForecastFrame>& frames);

/// "%.12g" formatting used by every CSV writer and the adapter wire format.
std::string format_number(double value);

}  // namespace tsagent
