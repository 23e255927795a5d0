#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gcnn/error.hpp"
#include "gcnn/model_io.hpp"

using namespace gcnn;
using nlohmann::json;

namespace {

ModelConfig tiny() {
    ModelConfig c;
    c.input_dim = 4;
    c.filter1 = 2;
    c.filter2 = 2;
    c.channels1 = 1;
    c.channels2 = 1;
    return c;
}

template <typename T>
std::string to_text(const CnnModel<T>& m) {
    std::ostringstream out;
    write_model(out, m);
    return out.str();
}

template <typename T>
CnnModel<T> from_text(const std::string& s) {
    std::istringstream in(s);
    return read_model<T>(in);
}

std::string hex_le(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    static const char* d = "0123456789abcdef";
    std::string out;
    for (int b = 0; b < 4; ++b) {
        const unsigned byte = (bits >> (8 * b)) & 0xffu;
        out += d[byte >> 4];
        out += d[byte & 0xf];
    }
    return out;
}

}  // namespace

TEST(ModelIo, RoundTripIsBitExact) {
    auto m = make_model<float>(ModelConfig{}, 17);
    m.target_scale = 123.25;
    m.dense.bias = -0.0f;
    const auto back = from_text<float>(to_text(m));
    EXPECT_EQ(back.config, m.config);
    EXPECT_EQ(back.target_scale, m.target_scale);
    ASSERT_EQ(back.conv2.weights.size(), m.conv2.weights.size());
    EXPECT_EQ(std::memcmp(back.conv2.weights.data(), m.conv2.weights.data(), m.conv2.weights.size() * sizeof(float)), 0);
    EXPECT_TRUE(std::signbit(back.dense.bias));
    EXPECT_EQ(back, m);
}

TEST(ModelIo, DoubleRoundTripAndConversion) {
    const auto m = make_model<double>(tiny(), 2);
    EXPECT_EQ(from_text<double>(to_text(m)), m);
    const auto f = from_text<float>(to_text(m));
    for (std::size_t i = 0; i < m.conv1.weights.size(); ++i)
        EXPECT_EQ(f.conv1.weights[i], static_cast<float>(m.conv1.weights[i]));
}

TEST(ModelIo, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "gcnn_model_io_test.bin";
    const auto m = make_model<float>(tiny(), 3);
    save_model(m, path);
    EXPECT_EQ(load_model<float>(path), m);
    std::filesystem::remove(path);
    EXPECT_THROW(load_model<float>(path), Error);
}

TEST(ModelIo, HandBuiltDocument) {
    json j;
    j["format"] = "gcnn-model";
    j["version"] = kModelFormatVersion;
    j["dtype"] = "f32";
    j["byte_order"] = "little";
    j["flatten_order"] = "height,width,channel";
    j["weight_layout"] = "H,H,C_in,C_out";
    j["config"] = {{"input_dim", 4}, {"filter1", 2}, {"filter2", 2}, {"channels1", 1}, {"channels2", 1},
                   {"output_relu", true}};
    j["target_scale"] = 2.0;
    auto block = [](std::initializer_list<float> vs) {
        std::string s;
        for (float v : vs) s += hex_le(v);
        return s;
    };
    j["payload"] = {{"conv1.weights", block({1, 2, 3, 4})}, {"conv1.bias", block({0.5f})},
                    {"conv2.weights", block({-1, 0, 0, 1})}, {"conv2.bias", block({0})},
                    {"dense.weights", block({0.25f, 0.5f, 0.75f, 1.0f})}, {"dense.bias", block({1.5f})}};
    const auto m = from_text<float>(j.dump());
    EXPECT_EQ(m.conv1.weights, (std::vector<float>{1, 2, 3, 4}));
    EXPECT_EQ(m.conv1.bias[0], 0.5f);
    EXPECT_EQ(m.conv2.weights[0], -1.0f);
    EXPECT_EQ(m.dense.weights[3], 1.0f);
    EXPECT_EQ(m.dense.bias, 1.5f);
    EXPECT_EQ(m.target_scale, 2.0);
    // And the writer reproduces the same payload strings.
    const auto again = json::parse(to_text(m));
    EXPECT_EQ(again["payload"], j["payload"]);
}

TEST(ModelIo, TruncatedPayload) {
    auto j = json::parse(to_text(make_model<float>(tiny(), 1)));
    std::string w = j["payload"]["conv2.weights"];
    j["payload"]["conv2.weights"] = w.substr(0, w.size() - 8);
    EXPECT_THROW(from_text<float>(j.dump()), CorruptPayload);
    j["payload"]["conv2.weights"] = w.substr(0, w.size() - 1);
    EXPECT_THROW(from_text<float>(j.dump()), CorruptPayload);
    w[0] = 'z';
    j["payload"]["conv2.weights"] = w;
    EXPECT_THROW(from_text<float>(j.dump()), CorruptPayload);
}

TEST(ModelIo, VersionAndSyntax) {
    auto j = json::parse(to_text(make_model<float>(tiny(), 1)));
    j["version"] = kModelFormatVersion + 1;
    EXPECT_THROW(from_text<float>(j.dump()), VersionMismatch);
    EXPECT_THROW(from_text<float>("{not json"), ParseError);
    const std::string text = to_text(make_model<float>(tiny(), 1));
    EXPECT_THROW(from_text<float>(text.substr(0, text.size() / 2)), ParseError);
}
