#include "gcnn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "gcnn/error.hpp"
#include "json.hpp"

namespace gcnn {

using nlohmann::json;

namespace {

constexpr std::string_view kDatasetFormat = "gcnn-dataset";

json to_json(const Sample& s) {
    json edges = json::array();
    for (const Edge& e : s.graph.edges()) edges.push_back({e.u, e.v});
    return json{{"id", s.id}, {"n", s.graph.node_count()}, {"edges", std::move(edges)},
                {"label", s.label}, {"split", split_name(s.split)}};
}

Sample sample_from_json(const json& j) {
    Sample s;
    s.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
    const int n = j.at("n").get<int>();
    if (n < 0) throw ParseError("negative node count");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a [u, v] pair");
        int u = e[0].get<int>();
        int v = e[1].get<int>();
        if (u > v) std::swap(u, v);
        edges.push_back({u, v});
    }
    s.graph = Graph::from_edges(n, edges);
    s.label = j.at("label").get<double>();
    s.split = parse_split(j.at("split").get<std::string>());
    return s;
}

}  // namespace

std::string_view split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Validation: return "validation";
        case Split::Test: return "test";
    }
    return "train";
}

Split parse_split(std::string_view name) {
    if (name == "train") return Split::Train;
    if (name == "validation" || name == "val") return Split::Validation;
    if (name == "test") return Split::Test;
    throw ParseError("unknown split '" + std::string(name) + "'");
}

std::string_view origin_id(std::string_view sample_id) {
    const auto pos = sample_id.find('~');
    return pos == std::string_view::npos ? sample_id : sample_id.substr(0, pos);
}

std::vector<const Sample*> GraphDataset::split(Split s) const {
    std::vector<const Sample*> out;
    for (const Sample& x : samples)
        if (x.split == s) out.push_back(&x);
    return out;
}

std::size_t GraphDataset::split_size(Split s) const {
    return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [s](const Sample& x) { return x.split == s; }));
}

void GraphDataset::validate() const {
    for (const Sample& s : samples) {
        if (s.graph.node_count() > pad_dim)
            throw DimensionTooSmall("sample '" + s.id + "' has " + std::to_string(s.graph.node_count()) +
                                    " nodes, pad_dim is " + std::to_string(pad_dim));
        if (!(s.label >= 0.0)) throw ParseError("sample '" + s.id + "' has a negative or NaN label");
    }
}

void write_dataset(std::ostream& out, const GraphDataset& ds) {
    json header{{"format", kDatasetFormat}, {"version", kDatasetFormatVersion}, {"pad_dim", ds.pad_dim}};
    header["pattern"] = ds.pattern ? json(pattern_name(*ds.pattern)) : json(nullptr);
    out << header.dump() << '\n';
    for (const Sample& s : ds.samples) out << to_json(s).dump() << '\n';
}

GraphDataset read_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing dataset header line");
    GraphDataset ds;
    try {
        const json header = json::parse(line);
        if (header.value("format", "") != kDatasetFormat) throw ParseError("not a gcnn dataset header");
        const int version = header.at("version").get<int>();
        if (version != kDatasetFormatVersion)
            throw SchemaVersionMismatch("dataset version " + std::to_string(version) + ", expected " +
                                        std::to_string(kDatasetFormatVersion));
        ds.pad_dim = header.at("pad_dim").get<int>();
        if (!header.at("pattern").is_null()) ds.pattern = parse_pattern(header.at("pattern").get<std::string>());
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                ds.samples.push_back(sample_from_json(json::parse(line)));
            } catch (const json::exception& e) {
                throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("dataset header: ") + e.what());
    }
    ds.validate();
    return ds;
}

void save_dataset(const GraphDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    write_dataset(out, ds);
}

GraphDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    return read_dataset(in);
}

namespace {

std::filesystem::path find_with_suffix(const std::filesystem::path& dir, std::string_view suffix) {
    if (!std::filesystem::is_directory(dir)) throw ParseError(dir.string() + " is not a directory");
    std::vector<std::filesystem::path> hits;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > suffix.size() && name.ends_with(suffix)) hits.push_back(entry.path());
    }
    if (hits.size() != 1)
        throw ParseError("expected exactly one *" + std::string(suffix) + " in " + dir.string() + ", found " +
                         std::to_string(hits.size()));
    return hits.front();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

long parse_positive(std::string_view field, const std::string& where) {
    field = trim(field);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        throw ParseError(where + ": '" + std::string(field) + "' is not an integer");
    if (value < 1) throw ParseError(where + ": ids are 1-indexed, got " + std::to_string(value));
    return value;
}

}  // namespace

std::vector<Graph> load_tu_dataset(const std::filesystem::path& dir) {
    const auto indicator_path = find_with_suffix(dir, "_graph_indicator.txt");
    const auto arcs_path = find_with_suffix(dir, "_A.txt");

    std::ifstream ind(indicator_path);
    if (!ind) throw ParseError("cannot open " + indicator_path.string());
    std::vector<long> graph_of;  // node (0-based) -> graph id (1-based)
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ind, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        graph_of.push_back(parse_positive(line, indicator_path.filename().string() + ":" + std::to_string(lineno)));
    }
    long graph_count = 0;
    for (long g : graph_of) graph_count = std::max(graph_count, g);

    std::vector<int> local(graph_of.size());
    std::vector<int> sizes(static_cast<std::size_t>(graph_count), 0);
    for (std::size_t v = 0; v < graph_of.size(); ++v) local[v] = sizes[graph_of[v] - 1]++;

    std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(graph_count));
    std::ifstream arcs(arcs_path);
    if (!arcs) throw ParseError("cannot open " + arcs_path.string());
    lineno = 0;
    while (std::getline(arcs, line)) {
        ++lineno;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        const std::string where = arcs_path.filename().string() + ":" + std::to_string(lineno);
        const auto comma = text.find(',');
        if (comma == std::string_view::npos) throw ParseError(where + ": expected 'u, v'");
        const long a = parse_positive(text.substr(0, comma), where);
        const long b = parse_positive(text.substr(comma + 1), where);
        const auto n = static_cast<long>(graph_of.size());
        if (a > n || b > n) throw ParseError(where + ": node id exceeds indicator length");
        if (graph_of[a - 1] != graph_of[b - 1])
            throw InconsistentIndicator(where + ": arc joins graphs " + std::to_string(graph_of[a - 1]) + " and " +
                                        std::to_string(graph_of[b - 1]));
        if (a == b) continue;  // self-loops have no place in a simple graph
        int u = local[a - 1];
        int v = local[b - 1];
        if (u > v) std::swap(u, v);
        edges[graph_of[a - 1] - 1].push_back({u, v});
    }

    std::vector<Graph> graphs;
    graphs.reserve(static_cast<std::size_t>(graph_count));
    for (long g = 0; g < graph_count; ++g) graphs.push_back(Graph::from_edges(sizes[g], edges[g]));
    return graphs;
}

}  // namespace gcnn
