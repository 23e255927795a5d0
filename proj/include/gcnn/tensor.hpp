#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gcnn {

/// height × width × channels, row-major with channels innermost.
template <typename T>
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int height, int width, int channels, T fill = T{0})
        : h_(height), w_(width), c_(channels), data_(static_cast<std::size_t>(height) * width * channels, fill) {}

    int height() const { return h_; }
    int width() const { return w_; }
    int channels() const { return c_; }
    std::size_t size() const { return data_.size(); }

    T& at(int i, int j, int t) { return data_[index(i, j, t)]; }
    const T& at(int i, int j, int t) const { return data_[index(i, j, t)]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::span<T> values() { return data_; }
    std::span<const T> values() const { return data_; }

    friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
    std::size_t index(int i, int j, int t) const {
        return (static_cast<std::size_t>(i) * w_ + j) * c_ + t;
    }

    int h_ = 0;
    int w_ = 0;
    int c_ = 0;
    std::vector<T> data_;
};

}  // namespace gcnn
