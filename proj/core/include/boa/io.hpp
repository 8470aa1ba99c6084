#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "boa/errors.hpp"

namespace boa::io {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts need byte swaps");

// FNV-1a 64-bit over a byte span. Stable across platforms; used for
// observation hashing and environment fingerprints.
inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw FormatError("cannot open for writing: " + path);
    }

    void bytes(const void* data, std::size_t n) {
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    }
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u64(std::uint64_t v) { bytes(&v, 8); }
    void f32(float v) { bytes(&v, 4); }
    void text(const std::string& s) { bytes(s.data(), s.size()); }

    void close() {
        out_.close();
        if (!out_) throw FormatError("write failed on close");
    }

private:
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
        if (!in_) throw FormatError("cannot open for reading: " + path);
    }

    void bytes(void* data, std::size_t n) {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
        if (in_.gcount() != static_cast<std::streamsize>(n)) {
            throw FormatError("unexpected end of file");
        }
    }
    std::uint8_t u8() {
        std::uint8_t v;
        bytes(&v, 1);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, 8);
        return v;
    }
    float f32() {
        float v;
        bytes(&v, 4);
        return v;
    }
    // Reads up to and including the next newline.
    std::string line() {
        std::string s;
        if (!std::getline(in_, s)) throw FormatError("unexpected end of file");
        return s;
    }
    bool at_eof() { return in_.peek() == std::ifstream::traits_type::eof(); }

private:
    std::ifstream in_;
};

inline void expect_magic(Reader& r, const char* magic) {
    const std::size_t n = std::strlen(magic);
    std::vector<char> buf(n);
    try {
        r.bytes(buf.data(), n);
    } catch (const FormatError&) {
        throw FormatError(std::string("file too short for magic '") + magic + "'");
    }
    if (std::memcmp(buf.data(), magic, n) != 0) {
        throw FormatError(std::string("bad magic, expected '") + magic + "'");
    }
}

}  // namespace boa::io
