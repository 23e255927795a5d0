#pragma once

#include <filesystem>
#include <iosfwd>

#include "gcnn/cnn.hpp"

namespace gcnn {

inline constexpr int kModelFormatVersion = 1;

/// One JSON document: shapes, hyperparameters, target_scale, dtype and the
/// flatten order, with every parameter block stored as a hex string of
/// little-endian IEEE-754 values.
template <typename T>
void write_model(std::ostream& out, const CnnModel<T>& model);

/// Accepts payloads of either precision and converts to T. Throws
/// VersionMismatch, CorruptPayload (bad hex or wrong length), ShapeMismatch,
/// ParseError.
template <typename T>
CnnModel<T> read_model(std::istream& in);

template <typename T>
void save_model(const CnnModel<T>& model, const std::filesystem::path& path);

template <typename T>
CnnModel<T> load_model(const std::filesystem::path& path);

}  // namespace gcnn
