#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "hug/common.hpp"
#include "hug/params.hpp"

namespace hug::io {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

// Little-endian writer over an ostream.
class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& os) : os_(os) {}

    template <typename T>
    void put(T value) {
        static_assert(std::is_trivially_copyable_v<T>);
        os_.write(reinterpret_cast<const char*>(&value), sizeof(T));
    }
    void put_bytes(const void* data, std::size_t n) { os_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n)); }
    bool ok() const { return static_cast<bool>(os_); }

private:
    std::ostream& os_;
};

// Little-endian reader that tracks its byte offset for diagnostics.
class BinaryReader {
public:
    explicit BinaryReader(std::istream& is, std::uint64_t start_offset = 0) : is_(is), offset_(start_offset) {}

    template <typename T>
    T get(const char* what) {
        static_assert(std::is_trivially_copyable_v<T>);
        T value;
        get_bytes(&value, sizeof(T), what);
        return value;
    }
    void get_bytes(void* out, std::size_t n, const char* what);
    /// Reads exactly n bytes, or returns false if the stream is already at EOF.
    /// A partial read throws.
    bool try_get_bytes(void* out, std::size_t n, const char* what);
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::istream& is_;
    std::uint64_t offset_;
};

// Shared FrameParams block: 8 x f64 then 4 x u32. The six physical fields
// fill the first six doubles in declaration order; the last two are reserved.
inline constexpr std::size_t kParamsBlockBytes = 8 * 8 + 4 * 4;

void write_params_block(BinaryWriter& w, const FrameParams& p);
FrameParams read_params_block(BinaryReader& r);

}  // namespace hug::io
