#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "textpm/error.hpp"

namespace textpm {

/// Little-endian binary encoder used by every persisted container.
class BinaryWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) { put_le(v); }
    void u64(std::uint64_t v) { put_le(v); }
    void i64(std::int64_t v) { put_le(static_cast<std::uint64_t>(v)); }
    void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }

    void str(std::string_view s) {
        u64(s.size());
        buf_.append(s.data(), s.size());
    }

    void raw(std::string_view s) { buf_.append(s.data(), s.size()); }

    void f64s(const std::vector<double>& v) {
        u64(v.size());
        for (double x : v) f64(x);
    }

    void strs(const std::vector<std::string>& v) {
        u64(v.size());
        for (const auto& s : v) str(s);
    }

    const std::string& bytes() const { return buf_; }

private:
    template <typename T>
    void put_le(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    }

    std::string buf_;
};

/// Bounds-checked decoder; every short read raises CorruptError.
class BinaryReader {
public:
    explicit BinaryReader(std::string_view data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }
    std::uint32_t u32() { return get_le<std::uint32_t>(); }
    std::uint64_t u64() { return get_le<std::uint64_t>(); }
    std::int64_t i64() { return static_cast<std::int64_t>(get_le<std::uint64_t>()); }
    double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

    std::string str() {
        const std::uint64_t n = u64();
        need(n);
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    std::string raw(std::size_t n) {
        need(n);
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    std::vector<double> f64s() {
        const std::uint64_t n = u64();
        need_elems(n, 8);
        std::vector<double> v(n);
        for (auto& x : v) x = f64();
        return v;
    }

    std::vector<std::string> strs() {
        const std::uint64_t n = u64();
        need_elems(n, 8);
        std::vector<std::string> v;
        v.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) v.push_back(str());
        return v;
    }

    /// Element count sanity check before allocating.
    void need_elems(std::uint64_t count, std::size_t min_elem_size) const {
        if (min_elem_size != 0 && count > (data_.size() - pos_) / min_elem_size) {
            throw CorruptError("truncated or corrupt container");
        }
    }

    bool at_end() const { return pos_ == data_.size(); }

private:
    void need(std::uint64_t n) const {
        if (n > data_.size() - pos_) throw CorruptError("truncated or corrupt container");
    }

    template <typename T>
    T get_le() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(T);
        return v;
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

/// Writes a container header: 8-byte magic followed by a format version.
inline void write_header(BinaryWriter& w, std::string_view magic, std::uint32_t version) {
    w.raw(magic);
    w.u32(version);
}

/// Validates magic and version; raises CorruptError / VersionError.
inline void read_header(BinaryReader& r, std::string_view magic, std::uint32_t version) {
    if (r.raw(magic.size()) != magic) throw CorruptError("bad magic: not a " + std::string(magic) + " file");
    const std::uint32_t found = r.u32();
    if (found != version) {
        throw VersionError("unsupported format version " + std::to_string(found) + " (expected " +
                           std::to_string(version) + ")");
    }
}

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace textpm
