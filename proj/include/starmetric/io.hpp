#ifndef STARMETRIC_IO_HPP
#define STARMETRIC_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "starmetric/errors.hpp"
#include "starmetric/point.hpp"
#include "starmetric/space.hpp"
#include "starmetric/tdefiner.hpp"
#include "starmetric/topology.hpp"

namespace starmetric {

// ---------------------------------------------------------------------------
// Space configuration: the flat namespace the CLI exposes.
// ---------------------------------------------------------------------------

/// tdefiner in {"lukasiewicz","max","s","p"}; construction in
/// {"induced","signed_line","product_max","product_T","euclidean_L"}.
/// Product constructions combine `arity` one-dimensional factor lines:
/// signed lines for lukasiewicz and s (so windows over R^n work, as in the
/// square/disc/diamond raster), induced lines on [0, inf) for max and p.
struct SpaceConfig {
    std::string tdefiner = "lukasiewicz";
    std::string construction = "induced";
    std::size_t arity = 1;
    bool pseudometric = false;  // check M1' instead of M1 in law suites
};

inline StarMetricSpace make_space(const SpaceConfig& config, const ToleranceConfig& cfg = {}) {
    const TDefiner& star = find_tdefiner(config.tdefiner);
    const bool is_product = config.construction == "product_max" ||
                            config.construction == "product_T" ||
                            config.construction == "euclidean_L";
    if (config.arity == 0) throw usage_error("arity must be positive");
    if (!is_product && config.arity != 1)
        throw usage_error("construction \"" + config.construction + "\" requires arity 1");

    if (config.construction == "induced") return induced_metric(star, cfg);
    if (config.construction == "signed_line") return signed_line_space(star);

    if (!is_product)
        throw usage_error("unknown construction \"" + config.construction +
                          "\" (expected induced, signed_line, product_max, product_T, "
                          "euclidean_L)");

    const bool signed_factors = star.name == "lukasiewicz" || star.name == "s";
    std::vector<StarMetricSpace> factors;
    factors.reserve(config.arity);
    for (std::size_t i = 0; i < config.arity; ++i)
        factors.push_back(signed_factors ? signed_line_space(star) : induced_metric(star, cfg));

    if (config.construction == "product_max") return product_max(std::move(factors));
    if (config.construction == "product_T") return product_T(std::move(factors));
    return euclidean_product_L(std::move(factors));  // validates lukasiewicz itself
}

// ---------------------------------------------------------------------------
// Dataset ingestion.
// ---------------------------------------------------------------------------

enum class DataFormat { csv, json };

struct Dataset {
    PointSet points;
    std::string source;
    DataFormat format = DataFormat::csv;

    std::size_t arity() const { return points.empty() ? 0 : points.front().arity(); }
};

namespace detail {

inline bool parse_double(std::string_view text, double& out) {
    // Locale-independent decimal parsing; leading/trailing blanks tolerated.
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline void require_rectangular(const PointSet& points, const std::string& source) {
    if (points.empty()) throw usage_error(source + ": dataset has no points");
    const std::size_t arity = points.front().arity();
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].arity() != arity)
            throw usage_error(source + ": row " + std::to_string(i + 1) + " has " +
                              std::to_string(points[i].arity()) + " columns, expected " +
                              std::to_string(arity));
}

}  // namespace detail

/// One point per row, comma-separated decimals. A header row is skipped when
/// none of its cells parses as a number; a row that mixes numbers and text is
/// an error at the offending cell. NaN and infinities are rejected.
inline PointSet parse_csv_points(std::istream& in, const std::string& source) {
    PointSet points;
    std::string line;
    std::size_t row = 0;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view view(line);
        if (view.find_first_not_of(" \t") == std::string_view::npos) continue;

        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = view.find(',', start);
            cells.push_back(view.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }

        std::vector<double> coords(cells.size());
        std::size_t bad_col = 0;
        bool all_bad = true, any_bad = false;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (detail::parse_double(cells[c], coords[c])) {
                all_bad = false;
            } else if (!any_bad) {
                any_bad = true;
                bad_col = c + 1;
            }
        }
        if (any_bad) {
            if (first_content_row && all_bad) {  // header
                first_content_row = false;
                continue;
            }
            throw usage_error(source + ": row " + std::to_string(row) + " column " +
                              std::to_string(bad_col) + " is not a number");
        }
        for (std::size_t c = 0; c < coords.size(); ++c)
            if (!std::isfinite(coords[c]))
                throw usage_error(source + ": row " + std::to_string(row) + " column " +
                                  std::to_string(c + 1) + " is not finite");
        first_content_row = false;
        points.push_back(Point{std::move(coords)});
    }
    detail::require_rectangular(points, source);
    return points;
}

/// JSON array of arrays of numbers.
inline PointSet parse_json_points(std::istream& in, const std::string& source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw usage_error(source + ": invalid JSON: " + e.what());
    }
    if (!doc.is_array()) throw usage_error(source + ": expected an array of arrays of numbers");
    PointSet points;
    points.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& row = doc[i];
        if (!row.is_array())
            throw usage_error(source + ": row " + std::to_string(i + 1) + " is not an array");
        std::vector<double> coords;
        coords.reserve(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!row[c].is_number())
                throw usage_error(source + ": row " + std::to_string(i + 1) + " column " +
                                  std::to_string(c + 1) + " is not a number");
            const double v = row[c].get<double>();
            if (!std::isfinite(v))
                throw usage_error(source + ": row " + std::to_string(i + 1) + " column " +
                                  std::to_string(c + 1) + " is not finite");
            coords.push_back(v);
        }
        points.push_back(Point{std::move(coords)});
    }
    detail::require_rectangular(points, source);
    return points;
}

inline DataFormat format_from_extension(const std::filesystem::path& path) {
    return path.extension() == ".json" ? DataFormat::json : DataFormat::csv;
}

inline Dataset ingest(const std::filesystem::path& path, DataFormat format) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open \"" + path.string() + "\"");
    Dataset dataset;
    dataset.source = path.string();
    dataset.format = format;
    dataset.points = format == DataFormat::csv ? parse_csv_points(in, dataset.source)
                                               : parse_json_points(in, dataset.source);
    return dataset;
}

// ---------------------------------------------------------------------------
// Grid serialization. PGM is plain P2 with maxval 2; cell values are
// 0 = outside, 1 = inside, 2 = boundary-ambiguous.
// ---------------------------------------------------------------------------

inline void write_pgm(const MembershipGrid& grid, std::ostream& out) {
    out << "P2\n" << grid.resolution << " " << grid.resolution << "\n2\n";
    for (std::size_t row = 0; row < grid.resolution; ++row) {
        for (std::size_t col = 0; col < grid.resolution; ++col) {
            if (col) out << ' ';
            out << static_cast<int>(grid.at(row, col));
        }
        out << '\n';
    }
}

inline void write_grid_csv(const MembershipGrid& grid, std::ostream& out) {
    for (std::size_t row = 0; row < grid.resolution; ++row) {
        for (std::size_t col = 0; col < grid.resolution; ++col) {
            if (col) out << ',';
            out << static_cast<int>(grid.at(row, col));
        }
        out << '\n';
    }
}

/// Write-then-rename so readers never observe a half-written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw usage_error("cannot write \"" + tmp.string() + "\"");
        out << content;
        if (!out) throw usage_error("short write to \"" + tmp.string() + "\"");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw usage_error("cannot rename \"" + tmp.string() + "\" to \"" + path.string() +
                              "\": " + ec.message());
}

}  // namespace starmetric

#endif  // STARMETRIC_IO_HPP
