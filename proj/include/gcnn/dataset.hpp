#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcnn/graph.hpp"
#include "gcnn/pattern.hpp"

namespace gcnn {

enum class Split { Train, Validation, Test };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

struct Sample {
    std::string id;
    Graph graph;
    double label = 0.0;
    Split split = Split::Train;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Augmented copies are named "<origin>~<index>".
std::string_view origin_id(std::string_view sample_id);

/// Labelled graphs sharing one pad dimension. `pattern` is empty for
/// unlabelled data (all labels zero).
struct GraphDataset {
    std::optional<Pattern> pattern;
    int pad_dim = 0;
    std::vector<Sample> samples;

    std::vector<const Sample*> split(Split s) const;
    std::size_t split_size(Split s) const;

    /// Checks the invariants: pad_dim >= every node count, labels >= 0.
    void validate() const;

    friend bool operator==(const GraphDataset&, const GraphDataset&) = default;
};

inline constexpr int kDatasetFormatVersion = 1;

/// JSON lines: a header {format, version, pattern, pad_dim} followed by one
/// {id, n, edges, label, split} object per sample. UTF-8, LF endings.
void write_dataset(std::ostream& out, const GraphDataset& ds);
GraphDataset read_dataset(std::istream& in);

void save_dataset(const GraphDataset& ds, const std::filesystem::path& path);
GraphDataset load_dataset(const std::filesystem::path& path);

/// Reads <dir>/<NAME>_A.txt and <dir>/<NAME>_graph_indicator.txt. Node ids in
/// both files are 1-indexed; arcs are symmetrized and duplicates collapsed.
/// Throws ParseError or InconsistentIndicator.
std::vector<Graph> load_tu_dataset(const std::filesystem::path& dir);

}  // namespace gcnn
