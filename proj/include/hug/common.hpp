#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hug {

using cplx = std::complex<double>;

// Dense row-major matrix. Only what the pipeline needs.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    T* row(std::size_t r) { return data_.data() + r * cols_; }
    const T* row(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<cplx>;

// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameter set; carries every violated invariant.
class InvalidParams : public Error {
public:
    explicit InvalidParams(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

// Malformed input data (file formats, wire streams, inconsistent shapes).
class DataError : public Error {
public:
    using Error::Error;
};

// Malformed binary input at a known byte offset.
class FormatError : public DataError {
public:
    FormatError(const std::string& what, std::uint64_t offset);
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

// The seven gesture classes, in label order.
enum class GestureClass : std::uint8_t {
    no_finger = 0,
    finger_press = 1,
    button_on = 2,
    button_off = 3,
    motion_up = 4,
    motion_down = 5,
    screw = 6,
};

inline constexpr std::size_t kClassCount = 7;

std::string_view class_name(GestureClass c);
std::optional<GestureClass> parse_class(std::string_view name);
GestureClass class_from_index(std::size_t index);
inline std::size_t class_index(GestureClass c) { return static_cast<std::size_t>(c); }

// splitmix64 mixing; used to derive independent seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace hug
