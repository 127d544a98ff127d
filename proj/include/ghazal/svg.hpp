#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ghazal/cluster.hpp"
#include "ghazal/features.hpp"

namespace ghazal {

/// Term with a non-negative weight (a count, or a probability for topics).
using WeightedTerm = std::pair<std::string, double>;

/// Descending weight, ties by term bytes.
std::vector<WeightedTerm> rank_terms(const TermCounts& counts);
std::vector<WeightedTerm> rank_terms(std::vector<WeightedTerm> terms);

struct HistogramBar {
    std::string term;
    double weight = 0.0;
    double height = 0.0;  // in SVG units, proportional to weight
};

/// Bars for the top `top_n` ranked terms (clamped to the number of terms).
/// Throws Error(Usage) on empty input or top_n == 0.
std::vector<HistogramBar> histogram_bars(std::span<const WeightedTerm> ranked, std::size_t top_n);
std::string render_histogram(std::span<const WeightedTerm> ranked, std::size_t top_n, std::string_view title = {});
void emit_histogram(const TermCounts& frequencies, std::size_t top_n, const std::filesystem::path& path);

struct WordCloudOptions {
    double min_font = 10.0;
    double max_font = 48.0;
    std::size_t max_words = 100;
    double spiral_step = 2.0;
    double glyph_width = 0.6;  // advance per code point, in ems
};

struct PlacedWord {
    std::string term;
    double weight = 0.0;
    double font_size = 0.0;
    double x = 0.0;  // box centre
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;

    double left() const { return x - width / 2; }
    double right() const { return x + width / 2; }
    double top() const { return y - height / 2; }
    double bottom() const { return y + height / 2; }
};

/// Greedy placement in descending weight order. Each word walks an outward
/// rectangular spiral from the origin until its box overlaps no placed box.
/// Font size is linear in weight between min_font and max_font; when all
/// weights are equal every word gets max_font.
std::vector<PlacedWord> layout_wordcloud(std::span<const WeightedTerm> ranked, const WordCloudOptions& options = {});
std::string render_wordcloud(std::span<const PlacedWord> words, std::string_view title = {});
void emit_wordcloud(const TermCounts& frequencies, const std::filesystem::path& path,
                    const WordCloudOptions& options = {});

/// `#rrggbb` for a value clamped to [0, 1], white at 0 to dark blue at 1.
std::string heat_color(double value);
std::string render_heatmap(const SimilarityMatrix& matrix, std::string_view title = {});
void emit_heatmap(const SimilarityMatrix& matrix, const std::filesystem::path& path);

/// Fixed eight-colour palette; cluster c uses entry c mod 8.
std::string_view palette_color(int cluster);
/// One marker per row of `projection`; throws Error(Usage) if the projection,
/// label and title counts differ.
std::string render_scatter(const Projection& projection, const ClusterAssignment& labels,
                           std::span<const std::string> titles, std::span<const int> poem_indices,
                           std::string_view title = {});
void emit_scatter(const Projection& projection, const ClusterAssignment& labels,
                  std::span<const std::string> titles, std::span<const int> poem_indices,
                  const std::filesystem::path& path);

std::string xml_escape(std::string_view text);

}  // namespace ghazal
