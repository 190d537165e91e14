#include "tsagent/core/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "tsagent/core/error.hpp"

namespace tsagent {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

// Splits one logical record; may consume extra physical lines for quoted newlines.
bool next_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
    std::string line;
    if (!std::getline(in, line)) return false;
    ++line_no;
    fields.clear();
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0;; ++i) {
        if (i == line.size()) {
            if (quoted) {
                std::string more;
                if (!std::getline(in, more)) {
                    throw Error(ErrorCategory::parse, "unterminated quoted field at line " + std::to_string(line_no));
                }
                ++line_no;
                field.push_back('\n');
                line = std::move(more);
                i = static_cast<std::size_t>(-1);
                continue;
            }
            break;
        }
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(std::move(field));
    return true;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return i;
    }
    return std::nullopt;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::size_t line_no = 0;
    std::vector<std::string> fields;
    if (!next_record(in, fields, line_no)) return table;
    if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
    table.header = fields;
    while (next_record(in, fields, line_no)) {
        if (fields.size() == 1 && trim(fields[0]).empty()) continue;
        table.rows.push_back(fields);
        table.line_numbers.push_back(line_no);
    }
    return table;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n\r") != std::string::npos) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

SeriesPanel parse_panel(std::istream& in, const PanelColumns& columns, std::optional<Frequency> freq_override) {
    const CsvTable table = read_csv(in);
    if (table.header.empty()) return {};

    auto require = [&](const std::string& name) {
        auto idx = table.column(name);
        if (!idx) throw Error(ErrorCategory::schema, "missing column '" + name + "'");
        return *idx;
    };
    const std::size_t id_col = require(columns.id);
    const std::size_t time_col = require(columns.time);
    const std::size_t value_col = require(columns.value);

    std::vector<std::string> order;
    std::map<std::string, std::map<Timestamp, double>> grouped;

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string row_label = "row " + std::to_string(table.line_numbers[r]);
        const std::size_t needed = std::max({id_col, time_col, value_col});
        if (row.size() <= needed) throw Error(ErrorCategory::parse, row_label + ": too few fields");

        std::string id{trim(row[id_col])};
        if (id.empty()) throw Error(ErrorCategory::parse, row_label + ": empty series id");
        auto ts = parse_timestamp(row[time_col]);
        if (!ts) throw Error(ErrorCategory::parse, row_label + ": unparseable timestamp '" + row[time_col] + "'");
        auto value = parse_double(row[value_col]);
        if (!value) throw Error(ErrorCategory::parse, row_label + ": unparseable value '" + row[value_col] + "'");

        auto [it, inserted] = grouped.try_emplace(id);
        if (inserted) order.push_back(id);
        if (!it->second.emplace(*ts, *value).second) {
            throw Error(ErrorCategory::duplicate,
                        row_label + ": duplicate observation for ('" + id + "', " + format_timestamp(*ts) + ")");
        }
    }

    std::vector<Series> series;
    series.reserve(order.size());
    for (const std::string& id : order) {
        Series s;
        s.id = id;
        for (const auto& [ts, y] : grouped[id]) {
            s.ds.push_back(ts);
            s.y.push_back(y);
        }
        series.push_back(std::move(s));
    }

    Frequency freq = Frequency::of(FrequencyUnit::monthly);
    if (freq_override) {
        freq = *freq_override;
    } else if (!series.empty()) {
        std::optional<Frequency> inferred;
        for (const Series& s : series) {
            if (s.size() < 3) continue;
            const Frequency f = infer_frequency(s.ds);
            if (inferred && *inferred != f) {
                throw Error(ErrorCategory::frequency, "series '" + s.id + "' is " + std::string(f.name()) +
                                                          " but earlier series are " +
                                                          std::string(inferred->name()));
            }
            inferred = f;
        }
        if (!inferred) {
            throw Error(ErrorCategory::insufficient_data,
                        "cannot infer frequency: no series has 3 or more observations (use a frequency override)");
        }
        freq = *inferred;
    }
    return SeriesPanel(std::move(series), freq);
}

SeriesPanel parse_panel(const std::filesystem::path& path, const PanelColumns& columns,
                        std::optional<Frequency> freq_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::parse, "cannot open '" + path.string() + "'");
    return parse_panel(in, columns, freq_override);
}

void write_panel_csv(std::ostream& out, const SeriesPanel& panel, const PanelColumns& columns) {
    write_csv_row(out, {columns.id, columns.time, columns.value});
    char buf[64];
    for (const Series& s : panel.series()) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", s.y[i]);
            write_csv_row(out, {s.id, format_timestamp(s.ds[i]), buf});
        }
    }
}

std::string format_number(double value) {
    if (std::isnan(value)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_forecast_csv(std::ostream& out, const std::vector<ForecastFrame>& frames) {
    QuantileLevels levels = QuantileLevels::none();
    for (const ForecastFrame& f : frames) {
        if (f.levels.empty()) continue;
        if (levels.empty()) {
            levels = f.levels;
        } else if (!(levels == f.levels)) {
            throw Error(ErrorCategory::alignment, "frames disagree on quantile levels");
        }
    }
    std::vector<std::string> header{"unique_id", "ds", "model", "mean"};
    for (double q : levels.values()) header.push_back(quantile_column_name(q));
    write_csv_row(out, header);

    std::vector<std::string> row;
    for (const ForecastFrame& frame : frames) {
        for (const SeriesForecast& s : frame.series) {
            for (std::size_t k = 0; k < s.horizon(); ++k) {
                row.assign({s.id, format_timestamp(s.ds[k]), frame.model, format_number(s.mean[k])});
                for (std::size_t j = 0; j < levels.size(); ++j) {
                    row.push_back(s.has_quantiles() ? format_number(s.quantiles[k * levels.size() + j]) : "");
                }
                write_csv_row(out, row);
            }
        }
    }
}

}  // namespace tsagent
