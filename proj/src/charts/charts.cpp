#include "ava/charts/charts.hpp"

#include "ava/errors.hpp"
#include "ava/image.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <random>

namespace ava {

namespace {

constexpr Rgb kAxisColour{0.45, 0.45, 0.45};

const Rgb& palette(int label) {
    static const Rgb kTab10[10] = {
        {0.122, 0.467, 0.706}, {1.000, 0.498, 0.055}, {0.173, 0.627, 0.173}, {0.839, 0.153, 0.157},
        {0.580, 0.404, 0.741}, {0.549, 0.337, 0.294}, {0.890, 0.467, 0.761}, {0.498, 0.498, 0.498},
        {0.737, 0.741, 0.133}, {0.090, 0.745, 0.812},
    };
    return kTab10[((label % 10) + 10) % 10];
}

double to_unit(double v, double lo, double hi) {
    return hi > lo ? (v - lo) / (hi - lo) : 0.5;
}

double parse_number(const std::string& cell, const std::string& column) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw InvalidParams("column '" + column + "' has non-numeric cell '" + cell + "'");
    }
    return value;
}

}  // namespace

void validate(const PointSet& ps) {
    for (const auto& p : ps.points) {
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw InvalidParams("point coordinates must be finite");
    }
    if (ps.labels && ps.labels->size() != ps.points.size()) {
        throw InvalidParams("labels length differs from points length");
    }
}

DataBounds bounds_of(const std::vector<Point2>& points) {
    DataBounds b{points.front()[0], points.front()[0], points.front()[1], points.front()[1]};
    for (const auto& p : points) {
        b.x_min = std::min(b.x_min, p[0]);
        b.x_max = std::max(b.x_max, p[0]);
        b.y_min = std::min(b.y_min, p[1]);
        b.y_max = std::max(b.y_max, p[1]);
    }
    return b;
}

ScatterRender render_scatter(const PointSet& ps, double opacity, double radius, const CanvasConfig& config,
                             const ScatterStyle& style) {
    if (ps.points.empty()) throw EmptyPointSet("scatterplot needs at least one point");
    validate(ps);
    if (!(opacity > 0.0 && opacity <= 1.0)) throw InvalidParams("opacity must lie in (0,1]");
    if (!(radius > 0.0)) throw InvalidParams("point radius must be positive");

    Canvas canvas(config);
    const int w = config.width;
    const int h = config.height;
    const double m = config.margin;
    if (style.axes) {
        canvas.line(m - 6, h - m + 6, w - m + 6, h - m + 6, kAxisColour, 1.0);
        canvas.line(m - 6, m - 6, m - 6, h - m + 6, kAxisColour, 1.0);
    }

    ScatterRender out;
    out.coverage.width = w;
    out.coverage.height = h;
    out.coverage.coverage.assign(static_cast<std::size_t>(w) * h, 0.0);
    out.coverage.count.assign(static_cast<std::size_t>(w) * h, 0);

    const DataBounds b = style.bounds.value_or(bounds_of(ps.points));
    for (std::size_t i = 0; i < ps.points.size(); ++i) {
        const auto& p = ps.points[i];
        const double cx = m + to_unit(p[0], b.x_min, b.x_max) * (w - 2 * m);
        const double cy = (h - m) - to_unit(p[1], b.y_min, b.y_max) * (h - 2 * m);
        const Rgb& colour = style.colour_by_label && ps.labels ? palette((*ps.labels)[i]) : style.colour;
        canvas.for_disc(cx, cy, radius, [&](int x, int y) {
            canvas.blend(x, y, colour, opacity);
            const std::size_t k = static_cast<std::size_t>(y) * w + x;
            out.coverage.coverage[k] = opacity + (1.0 - opacity) * out.coverage.coverage[k];
            ++out.coverage.count[k];
        });
        ++canvas.counters().discs;
    }
    out.image = canvas.to_image();
    out.counters = canvas.counters();
    return out;
}

OverplotMetrics overplot_metrics(const CoverageBuffer& buf, double saturation) {
    OverplotMetrics m;
    long covered = 0;
    long saturated = 0;
    for (std::size_t i = 0; i < buf.count.size(); ++i) {
        if (buf.count[i] == 0) continue;
        ++covered;
        if (buf.coverage[i] >= saturation) ++saturated;
        if (buf.count[i] == 1) m.faintness = std::max(m.faintness, buf.coverage[i]);
    }
    if (covered > 0) {
        m.saturated_fraction = static_cast<double>(saturated) / covered;
        m.covered_fraction = static_cast<double>(covered) / static_cast<double>(buf.count.size());
    }
    return m;
}

ParallelRender render_parallel_coords(const std::vector<std::vector<double>>& rows, const CanvasConfig& config,
                                      const ParallelStyle& style) {
    if (rows.empty()) throw InvalidParams("parallel coordinates need at least one row");
    const std::size_t d = rows.front().size();
    if (d < 2) throw InvalidParams("parallel coordinates need at least two dimensions");
    for (const auto& r : rows) {
        if (r.size() != d) throw InvalidParams("all rows must have the same length");
        for (double v : r) {
            if (!std::isfinite(v)) throw InvalidParams("values must be finite");
        }
    }

    ParallelRender out;
    std::vector<double> lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
        lo[j] = hi[j] = rows.front()[j];
        for (const auto& r : rows) {
            lo[j] = std::min(lo[j], r[j]);
            hi[j] = std::max(hi[j], r[j]);
        }
        if (lo[j] == hi[j]) {
            const std::string name = j < style.axis_names.size() ? style.axis_names[j] : std::to_string(j);
            out.warnings.push_back("degenerate column " + name + ": constant value, drawn at the midline");
        }
    }

    Canvas canvas(config);
    const double m = config.margin;
    const double w = config.width;
    const double h = config.height;
    auto axis_x = [&](std::size_t j) { return m + static_cast<double>(j) * (w - 2 * m) / static_cast<double>(d - 1); };
    std::vector<std::array<double, 2>> line(d);
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < d; ++j) {
            line[j] = {axis_x(j), (h - m) - to_unit(r[j], lo[j], hi[j]) * (h - 2 * m)};
        }
        canvas.polyline(line, style.colour, style.opacity);
    }
    const DrawCounters data_counters = canvas.counters();
    for (std::size_t j = 0; j < d; ++j) {
        canvas.line(axis_x(j), m, axis_x(j), h - m, Rgb{0.0, 0.0, 0.0}, 1.0);
        if (j < style.axis_names.size()) {
            const auto& name = style.axis_names[j];
            canvas.text(axis_x(j) - text_width(name) / 2.0, h - m + 8, name, Rgb{0.0, 0.0, 0.0});
        }
    }
    out.image = canvas.to_image();
    out.counters = canvas.counters();
    out.counters.polylines = data_counters.polylines;
    return out;
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(std::max(nodes, 0)));
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

void validate(const Graph& g) {
    if (g.nodes < 0) throw InvalidParams("node count must be non-negative");
    for (const auto& [a, b] : g.edges) {
        if (a < 0 || b < 0 || a >= g.nodes || b >= g.nodes) throw InvalidParams("edge endpoint out of range");
        if (a == b) throw InvalidParams("self-loops are not supported");
    }
}

std::vector<Point2> fr_layout(const Graph& g, int iterations, std::uint64_t seed) {
    validate(g);
    if (g.nodes < 1) throw InvalidParams("layout needs at least one node");
    const auto n = static_cast<std::size_t>(g.nodes);
    std::mt19937_64 rng(seed);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<Point2> pos(n);
    for (auto& p : pos) p = {uniform(), uniform()};

    const double k = std::sqrt(1.0 / static_cast<double>(n));
    const double t0 = 0.1;
    std::vector<Point2> disp(n);
    for (int it = 0; it < iterations; ++it) {
        std::fill(disp.begin(), disp.end(), Point2{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double dx = pos[i][0] - pos[j][0];
                double dy = pos[i][1] - pos[j][1];
                double dist = std::hypot(dx, dy);
                if (dist < 1e-9) {
                    // Coincident nodes: separate along a direction fixed by their indices.
                    const double angle = static_cast<double>(i * 31 + j * 17);
                    dx = std::cos(angle) * 1e-9;
                    dy = std::sin(angle) * 1e-9;
                    dist = 1e-9;
                }
                const double f = k * k / dist;
                disp[i][0] += dx / dist * f;
                disp[i][1] += dy / dist * f;
                disp[j][0] -= dx / dist * f;
                disp[j][1] -= dy / dist * f;
            }
        }
        for (const auto& [a, b] : g.edges) {
            const double dx = pos[a][0] - pos[b][0];
            const double dy = pos[a][1] - pos[b][1];
            const double dist = std::hypot(dx, dy);
            if (dist < 1e-12) continue;
            const double f = dist * dist / k;
            disp[a][0] -= dx / dist * f;
            disp[a][1] -= dy / dist * f;
            disp[b][0] += dx / dist * f;
            disp[b][1] += dy / dist * f;
        }
        const double t = t0 * (1.0 - static_cast<double>(it) / iterations);
        for (std::size_t i = 0; i < n; ++i) {
            const double len = std::hypot(disp[i][0], disp[i][1]);
            if (len > 0.0) {
                const double s = std::min(len, t) / len;
                pos[i][0] = std::clamp(pos[i][0] + disp[i][0] * s, 0.0, 1.0);
                pos[i][1] = std::clamp(pos[i][1] + disp[i][1] * s, 0.0, 1.0);
            }
        }
    }

    const DataBounds b = bounds_of(pos);
    const double sx = 0.5 - 0.5 * (b.x_min + b.x_max);
    const double sy = 0.5 - 0.5 * (b.y_min + b.y_max);
    for (auto& p : pos) {
        p[0] += sx;
        p[1] += sy;
    }
    return pos;
}

NodeLinkRender render_node_link(const Graph& g, const std::vector<Point2>& positions,
                                const std::vector<std::string>& labels, const CanvasConfig& config,
                                const NodeLinkStyle& style) {
    validate(g);
    if (positions.size() < static_cast<std::size_t>(g.nodes)) {
        throw MissingPosition("no position for node " + std::to_string(positions.size()));
    }
    Canvas canvas(config);
    const double m = config.margin;
    auto pixel = [&](int i) {
        return Point2{m + positions[i][0] * (config.width - 2 * m), m + positions[i][1] * (config.height - 2 * m)};
    };
    for (const auto& [a, b] : g.edges) {
        const auto pa = pixel(a);
        const auto pb = pixel(b);
        canvas.line(pa[0], pa[1], pb[0], pb[1], style.edge_colour, 1.0);
    }
    for (int i = 0; i < g.nodes; ++i) {
        const auto p = pixel(i);
        canvas.for_disc(p[0], p[1], style.node_radius, [&](int x, int y) { canvas.blend(x, y, style.edge_colour, 1.0); });
        canvas.disc(p[0], p[1], style.node_radius - 1.5, style.node_colour, 1.0);
    }

    NodeLinkRender out;
    const double glyph_h = kGlyphHeight * style.label_scale;
    std::map<std::pair<long, long>, int> stacked;
    for (int i = 0; i < g.nodes; ++i) {
        const auto p = pixel(i);
        const auto key = std::make_pair(std::lround(p[0]), std::lround(p[1]));
        const int slot = stacked[key]++;
        const Point2 origin{p[0] + style.node_radius + 3, p[1] - glyph_h / 2 + slot * (glyph_h + 3)};
        out.label_origins.push_back(origin);
        const std::string& text = static_cast<std::size_t>(i) < labels.size() ? labels[i] : std::to_string(i);
        canvas.text(origin[0], origin[1], text, style.label_colour, style.label_scale);
    }
    out.image = canvas.to_image();
    out.counters = canvas.counters();
    return out;
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                record.push_back(std::move(field));
                records.push_back(std::move(record));
            }
            field.clear();
            record.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (quoted) throw InvalidParams("unterminated quoted field in CSV");
    if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    if (records.empty()) throw InvalidParams("CSV has no header row");
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].size() != table.header.size()) {
            throw InvalidParams("CSV row " + std::to_string(i) + " has " + std::to_string(records[i].size()) +
                                " fields, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(records[i]));
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    const auto bytes = read_file(path);
    return parse_csv(std::string(bytes.begin(), bytes.end()));
}

std::vector<std::vector<double>> csv_columns(const CsvTable& table, const std::vector<std::string>& columns) {
    std::vector<std::size_t> idx;
    if (columns.empty()) {
        for (std::size_t j = 0; j < table.header.size(); ++j) idx.push_back(j);
    }
    for (const auto& name : columns) {
        const auto it = std::find(table.header.begin(), table.header.end(), name);
        if (it == table.header.end()) throw InvalidParams("unknown CSV column '" + name + "'");
        idx.push_back(static_cast<std::size_t>(it - table.header.begin()));
    }
    std::vector<std::vector<double>> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<double> values;
        for (auto j : idx) values.push_back(parse_number(row[j], table.header[j]));
        out.push_back(std::move(values));
    }
    return out;
}

PointSet csv_points(const CsvTable& table, const std::string& x, const std::string& y, const std::string& label) {
    PointSet ps;
    for (const auto& r : csv_columns(table, {x, y})) ps.points.push_back({r[0], r[1]});
    if (!label.empty()) {
        std::vector<int> labels;
        for (const auto& r : csv_columns(table, {label})) labels.push_back(static_cast<int>(std::lround(r[0])));
        ps.labels = std::move(labels);
    }
    return ps;
}

}  // namespace ava
