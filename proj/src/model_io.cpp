#include "gcnn/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "gcnn/error.hpp"
#include "json.hpp"

namespace gcnn {
namespace {

using nlohmann::json;

constexpr const char* kFlattenOrder = "height,width,channel";
constexpr char kHex[] = "0123456789abcdef";

template <typename U, typename T>
std::string encode(std::span<const T> values) {
    using Bits = std::conditional_t<sizeof(U) == 4, std::uint32_t, std::uint64_t>;
    std::string s;
    s.reserve(values.size() * sizeof(U) * 2);
    for (T v : values) {
        const Bits bits = std::bit_cast<Bits>(static_cast<U>(v));
        for (std::size_t b = 0; b < sizeof(U); ++b) {
            const auto byte = static_cast<unsigned>((bits >> (8 * b)) & 0xffu);
            s.push_back(kHex[byte >> 4]);
            s.push_back(kHex[byte & 0xf]);
        }
    }
    return s;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

template <typename U, typename T>
void decode(const std::string& s, std::span<T> out, const std::string& name) {
    using Bits = std::conditional_t<sizeof(U) == 4, std::uint32_t, std::uint64_t>;
    if (s.size() != out.size() * sizeof(U) * 2)
        throw CorruptPayload(name + ": expected " + std::to_string(out.size() * sizeof(U) * 2) + " hex digits, got " +
                             std::to_string(s.size()));
    std::size_t pos = 0;
    for (T& v : out) {
        Bits bits = 0;
        for (std::size_t b = 0; b < sizeof(U); ++b) {
            const int hi = hex_value(s[pos++]);
            const int lo = hex_value(s[pos++]);
            if (hi < 0 || lo < 0) throw CorruptPayload(name + ": invalid hex digit");
            bits |= static_cast<Bits>((hi << 4) | lo) << (8 * b);
        }
        v = static_cast<T>(std::bit_cast<U>(bits));
    }
}

const char* block_names[] = {"conv1.weights", "conv1.bias", "conv2.weights", "conv2.bias", "dense.weights", "dense.bias"};

}  // namespace

template <typename T>
void write_model(std::ostream& out, const CnnModel<T>& model) {
    model.check_shapes();
    const ModelConfig& c = model.config;
    json j;
    j["format"] = "gcnn-model";
    j["version"] = kModelFormatVersion;
    j["dtype"] = sizeof(T) == 4 ? "f32" : "f64";
    j["byte_order"] = "little";
    j["flatten_order"] = kFlattenOrder;
    j["weight_layout"] = "H,H,C_in,C_out";
    j["config"] = {{"input_dim", c.input_dim}, {"filter1", c.filter1},     {"filter2", c.filter2},
                   {"channels1", c.channels1}, {"channels2", c.channels2}, {"output_relu", c.output_relu}};
    j["target_scale"] = model.target_scale;
    json payload = json::object();
    int b = 0;
    for_each_block(model, [&](auto s) { payload[block_names[b++]] = encode<T>(std::span<const T>(s.data(), s.size())); });
    j["payload"] = payload;
    out << j.dump(1) << '\n';
    if (!out) throw std::runtime_error("failed writing model");
}

template <typename T>
CnnModel<T> read_model(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
    try {
        if (j.value("format", std::string()) != "gcnn-model") throw ParseError("not a model file");
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw VersionMismatch("model format " + std::to_string(version) + ", expected " +
                                  std::to_string(kModelFormatVersion));
        if (j.at("flatten_order").get<std::string>() != kFlattenOrder)
            throw VersionMismatch("unsupported flatten order");
        const auto& jc = j.at("config");
        ModelConfig c;
        c.input_dim = jc.at("input_dim").get<int>();
        c.filter1 = jc.at("filter1").get<int>();
        c.filter2 = jc.at("filter2").get<int>();
        c.channels1 = jc.at("channels1").get<int>();
        c.channels2 = jc.at("channels2").get<int>();
        c.output_relu = jc.at("output_relu").get<bool>();
        CnnModel<T> model = zero_model<T>(c);
        model.target_scale = j.at("target_scale").get<double>();
        const std::string dtype = j.at("dtype").get<std::string>();
        if (dtype != "f32" && dtype != "f64") throw CorruptPayload("unknown dtype " + dtype);
        const auto& payload = j.at("payload");
        int b = 0;
        for_each_block(model, [&](auto s) {
            const std::string name = block_names[b++];
            const auto& text = payload.at(name).template get_ref<const std::string&>();
            if (dtype == "f32") decode<float>(text, s, name);
            else decode<double>(text, s, name);
        });
        model.check_shapes();
        return model;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
}

template <typename T>
void save_model(const CnnModel<T>& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_model(out, model);
}

template <typename T>
CnnModel<T> load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    return read_model<T>(in);
}

template void write_model<float>(std::ostream&, const CnnModel<float>&);
template void write_model<double>(std::ostream&, const CnnModel<double>&);
template CnnModel<float> read_model<float>(std::istream&);
template CnnModel<double> read_model<double>(std::istream&);
template void save_model<float>(const CnnModel<float>&, const std::filesystem::path&);
template void save_model<double>(const CnnModel<double>&, const std::filesystem::path&);
template CnnModel<float> load_model<float>(const std::filesystem::path&);
template CnnModel<double> load_model<double>(const std::filesystem::path&);

}  // namespace gcnn
