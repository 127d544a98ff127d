#include "ghazal/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"

namespace ghazal {

namespace {

// Two decimals, no locale, no negative zero.
std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    std::string s(buf, res.ptr);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string weight_label(double w) {
    if (w == std::floor(w) && std::abs(w) < 1e15) return std::to_string(static_cast<long long>(w));
    return format_significant(w, 4);
}

std::string svg_open(double width, double height) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"Vazirmatn, Tahoma, sans-serif\">\n";
}

std::string svg_title(std::string_view title, double x, double y) {
    if (title.empty()) return {};
    return "<text class=\"title\" x=\"" + num(x) + "\" y=\"" + num(y) +
           "\" font-size=\"16\" text-anchor=\"middle\">" + xml_escape(title) + "</text>\n";
}

constexpr std::array<std::string_view, 8> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
};

}  // namespace

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::vector<WeightedTerm> rank_terms(const TermCounts& counts) {
    std::vector<WeightedTerm> terms;
    terms.reserve(counts.size());
    for (const auto& [term, c] : counts) terms.emplace_back(term, static_cast<double>(c));
    return rank_terms(std::move(terms));
}

std::vector<WeightedTerm> rank_terms(std::vector<WeightedTerm> terms) {
    std::sort(terms.begin(), terms.end(), [](const WeightedTerm& a, const WeightedTerm& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return terms;
}

// ---------------------------------------------------------------------------
// Histogram

namespace {
constexpr double kBarArea = 300.0;
constexpr double kBarWidth = 28.0;
constexpr double kBarGap = 8.0;
constexpr double kMargin = 50.0;
}  // namespace

std::vector<HistogramBar> histogram_bars(std::span<const WeightedTerm> ranked, std::size_t top_n) {
    if (ranked.empty()) fail_usage("histogram: empty frequencies");
    if (top_n == 0) fail_usage("histogram: top_n must be >= 1");
    const std::size_t n = std::min(top_n, ranked.size());
    const double max_w = ranked.front().second;
    std::vector<HistogramBar> bars;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = max_w > 0 ? kBarArea * ranked[i].second / max_w : 0.0;
        bars.push_back({ranked[i].first, ranked[i].second, h});
    }
    return bars;
}

std::string render_histogram(std::span<const WeightedTerm> ranked, std::size_t top_n, std::string_view title) {
    const auto bars = histogram_bars(ranked, top_n);
    const double width = 2 * kMargin + static_cast<double>(bars.size()) * (kBarWidth + kBarGap);
    const double height = kBarArea + 2 * kMargin + 60.0;
    const double base = kMargin + kBarArea;

    std::string s = svg_open(width, height);
    s += svg_title(title, width / 2, 24);
    s += "<line class=\"axis\" x1=\"" + num(kMargin) + "\" y1=\"" + num(base) + "\" x2=\"" +
         num(width - kMargin) + "\" y2=\"" + num(base) + "\" stroke=\"#333\"/>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        const double x = kMargin + kBarGap / 2 + static_cast<double>(i) * (kBarWidth + kBarGap);
        const double cx = x + kBarWidth / 2;
        s += "<rect class=\"bar\" data-term=\"" + xml_escape(b.term) + "\" data-count=\"" + weight_label(b.weight) +
             "\" x=\"" + num(x) + "\" y=\"" + num(base - b.height) + "\" width=\"" + num(kBarWidth) +
             "\" height=\"" + num(b.height) + "\" fill=\"#4c72b0\"/>\n";
        s += "<text class=\"count\" x=\"" + num(cx) + "\" y=\"" + num(base - b.height - 4) +
             "\" font-size=\"10\" text-anchor=\"middle\">" + weight_label(b.weight) + "</text>\n";
        s += "<text class=\"label\" x=\"" + num(cx) + "\" y=\"" + num(base + 8) +
             "\" font-size=\"12\" text-anchor=\"end\" direction=\"rtl\" unicode-bidi=\"embed\" transform=\"rotate(-60 " +
             num(cx) + " " + num(base + 8) + ")\">" + xml_escape(b.term) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

void emit_histogram(const TermCounts& frequencies, std::size_t top_n, const std::filesystem::path& path) {
    const auto ranked = rank_terms(frequencies);
    write_file(path, render_histogram(ranked, top_n));
}

// ---------------------------------------------------------------------------
// Word cloud

namespace {

bool overlaps(const PlacedWord& a, const PlacedWord& b) {
    return a.left() < b.right() && b.left() < a.right() && a.top() < b.bottom() && b.top() < a.bottom();
}

}  // namespace

std::vector<PlacedWord> layout_wordcloud(std::span<const WeightedTerm> ranked, const WordCloudOptions& options) {
    if (ranked.empty()) fail_usage("wordcloud: empty frequencies");
    const std::size_t n = std::min(options.max_words, ranked.size());
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        lo = std::min(lo, ranked[i].second);
        hi = std::max(hi, ranked[i].second);
    }

    std::vector<PlacedWord> placed;
    placed.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PlacedWord w;
        w.term = ranked[i].first;
        w.weight = ranked[i].second;
        w.font_size = hi > lo ? options.min_font + (options.max_font - options.min_font) * (w.weight - lo) / (hi - lo)
                              : options.max_font;
        const double glyphs = static_cast<double>(std::max<std::size_t>(1, codepoint_count(w.term)));
        w.width = options.glyph_width * w.font_size * glyphs;
        w.height = w.font_size;

        // Rectangular spiral: legs of 1,1,2,2,3,3,... steps turning right, down, left, up.
        constexpr std::array<std::pair<int, int>, 4> kDirs = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
        long long gx = 0, gy = 0;
        int dir = 0;
        long long leg = 1, walked = 0;
        int legs_done = 0;
        for (;;) {
            w.x = static_cast<double>(gx) * options.spiral_step;
            w.y = static_cast<double>(gy) * options.spiral_step;
            const bool clash = std::any_of(placed.begin(), placed.end(),
                                           [&](const PlacedWord& p) { return overlaps(p, w); });
            if (!clash) break;
            gx += kDirs[dir].first;
            gy += kDirs[dir].second;
            if (++walked == leg) {
                walked = 0;
                dir = (dir + 1) % 4;
                if (++legs_done % 2 == 0) ++leg;
            }
        }
        placed.push_back(std::move(w));
    }
    return placed;
}

std::string render_wordcloud(std::span<const PlacedWord> words, std::string_view title) {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    for (const auto& w : words) {
        x0 = std::min(x0, w.left());
        x1 = std::max(x1, w.right());
        y0 = std::min(y0, w.top());
        y1 = std::max(y1, w.bottom());
    }
    const double pad = 20.0, head = title.empty() ? 0.0 : 30.0;
    const double width = x1 - x0 + 2 * pad, height = y1 - y0 + 2 * pad + head;
    const double ox = pad - x0, oy = pad + head - y0;

    std::string s = svg_open(width, height);
    s += svg_title(title, width / 2, 22);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        s += "<text class=\"word\" data-weight=\"" + weight_label(w.weight) + "\" x=\"" + num(w.x + ox) + "\" y=\"" +
             num(w.y + oy) + "\" font-size=\"" + num(w.font_size) +
             "\" text-anchor=\"middle\" dominant-baseline=\"central\" direction=\"rtl\" unicode-bidi=\"embed\" fill=\"" +
             std::string(kPalette[i % kPalette.size()]) + "\">" + xml_escape(w.term) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

void emit_wordcloud(const TermCounts& frequencies, const std::filesystem::path& path, const WordCloudOptions& options) {
    const auto ranked = rank_terms(frequencies);
    write_file(path, render_wordcloud(layout_wordcloud(ranked, options)));
}

// ---------------------------------------------------------------------------
// Heatmap

std::string heat_color(double value) {
    const double v = std::clamp(value, 0.0, 1.0);
    constexpr std::array<int, 3> lo = {255, 255, 255};
    constexpr std::array<int, 3> hi = {8, 48, 107};
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(lo[c] + (hi[c] - lo[c]) * v));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string render_heatmap(const SimilarityMatrix& matrix, std::string_view title) {
    const std::size_t n = matrix.n;
    const double cell = std::clamp(480.0 / static_cast<double>(std::max<std::size_t>(n, 1)), 6.0, 40.0);
    const double left = 50.0, top = title.empty() ? 40.0 : 60.0;
    const double grid = cell * static_cast<double>(n);
    const double legend_x = left + grid + 30.0;
    const double width = legend_x + 80.0, height = top + grid + 40.0;

    std::string s = svg_open(width, height);
    s += svg_title(title, width / 2, 24);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = matrix.at(i, j);
            s += "<rect class=\"cell\" data-row=\"" + std::to_string(matrix.poem_order[i]) + "\" data-col=\"" +
                 std::to_string(matrix.poem_order[j]) + "\" data-value=\"" + format_significant(v, 6) + "\" x=\"" +
                 num(left + cell * static_cast<double>(j)) + "\" y=\"" + num(top + cell * static_cast<double>(i)) +
                 "\" width=\"" + num(cell) + "\" height=\"" + num(cell) + "\" fill=\"" + heat_color(v) + "\"/>\n";
        }
    }
    const double font = std::min(12.0, cell * 0.8);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = cell * (static_cast<double>(i) + 0.5);
        const auto label = std::to_string(matrix.poem_order[i]);
        s += "<text class=\"row-label\" x=\"" + num(left - 4) + "\" y=\"" + num(top + c) + "\" font-size=\"" +
             num(font) + "\" text-anchor=\"end\" dominant-baseline=\"central\">" + label + "</text>\n";
        s += "<text class=\"col-label\" x=\"" + num(left + c) + "\" y=\"" + num(top - 4) + "\" font-size=\"" +
             num(font) + "\" text-anchor=\"middle\">" + label + "</text>\n";
    }
    s += "<defs><linearGradient id=\"heat\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
         "<stop offset=\"0\" stop-color=\"" + heat_color(0.0) + "\"/><stop offset=\"1\" stop-color=\"" +
         heat_color(1.0) + "\"/></linearGradient></defs>\n";
    s += "<g class=\"legend\"><rect x=\"" + num(legend_x) + "\" y=\"" + num(top) + "\" width=\"16\" height=\"" +
         num(grid) + "\" fill=\"url(#heat)\" stroke=\"#333\"/>";
    s += "<text x=\"" + num(legend_x + 22) + "\" y=\"" + num(top + 10) + "\" font-size=\"11\">1</text>";
    s += "<text x=\"" + num(legend_x + 22) + "\" y=\"" + num(top + grid) + "\" font-size=\"11\">0</text></g>\n";
    s += "</svg>\n";
    return s;
}

void emit_heatmap(const SimilarityMatrix& matrix, const std::filesystem::path& path) {
    write_file(path, render_heatmap(matrix));
}

// ---------------------------------------------------------------------------
// Scatter

std::string_view palette_color(int cluster) {
    return kPalette[static_cast<std::size_t>(cluster) % kPalette.size()];
}

std::string render_scatter(const Projection& projection, const ClusterAssignment& labels,
                           std::span<const std::string> titles, std::span<const int> poem_indices,
                           std::string_view title) {
    const std::size_t n = projection.coords.size();
    if (labels.labels.size() != n || titles.size() != n || poem_indices.size() != n) {
        fail_usage("scatter: projection, label, title and index counts differ");
    }
    if (projection.n_components < 2) fail_usage("scatter: need two projected components");

    constexpr double plot = 420.0, margin = 40.0;
    const double top = title.empty() ? margin : margin + 20.0;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& c : projection.coords) {
        xmin = std::min(xmin, c[0]);
        xmax = std::max(xmax, c[0]);
        ymin = std::min(ymin, c[1]);
        ymax = std::max(ymax, c[1]);
    }
    auto map = [](double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.5; };

    const double width = margin * 2 + plot + 120.0, height = top + plot + margin;
    std::string s = svg_open(width, height);
    s += svg_title(title, width / 2, 24);
    s += "<rect class=\"frame\" x=\"" + num(margin) + "\" y=\"" + num(top) + "\" width=\"" + num(plot) +
         "\" height=\"" + num(plot) + "\" fill=\"none\" stroke=\"#999\"/>\n";
    s += "<text x=\"" + num(margin + plot / 2) + "\" y=\"" + num(top + plot + 28) +
         "\" font-size=\"12\" text-anchor=\"middle\">PC1</text>\n";
    s += "<text x=\"" + num(margin - 24) + "\" y=\"" + num(top + plot / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\">PC2</text>\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double x = margin + 10 + (plot - 20) * map(projection.coords[i][0], xmin, xmax);
        const double y = top + plot - 10 - (plot - 20) * map(projection.coords[i][1], ymin, ymax);
        const int c = labels.labels[i];
        s += "<circle class=\"marker\" data-poem=\"" + std::to_string(poem_indices[i]) + "\" data-cluster=\"" +
             std::to_string(c) + "\" cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"5\" fill=\"" +
             std::string(palette_color(c)) + "\"><title>" + xml_escape(titles[i]) + "</title></circle>\n";
        s += "<text class=\"annotation\" x=\"" + num(x + 7) + "\" y=\"" + num(y - 5) + "\" font-size=\"10\">" +
             std::to_string(poem_indices[i]) + "</text>\n";
    }
    s += "<g class=\"legend\">\n";
    for (std::size_t c = 0; c < labels.k(); ++c) {
        const double y = top + 12 + 20.0 * static_cast<double>(c);
        s += "<circle class=\"legend-swatch\" cx=\"" + num(margin + plot + 24) + "\" cy=\"" + num(y) +
             "\" r=\"5\" fill=\"" + std::string(palette_color(static_cast<int>(c))) + "\"/>";
        s += "<text x=\"" + num(margin + plot + 36) + "\" y=\"" + num(y + 4) + "\" font-size=\"12\">cluster " +
             std::to_string(c) + "</text>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

void emit_scatter(const Projection& projection, const ClusterAssignment& labels,
                  std::span<const std::string> titles, std::span<const int> poem_indices,
                  const std::filesystem::path& path) {
    write_file(path, render_scatter(projection, labels, titles, poem_indices));
}

}  // namespace ghazal
