#ifndef GTS_HASH_HPP
#define GTS_HASH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace gts {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

/// FNV-1a over bytes. Stable across platforms and runs, unlike std::hash.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

/// splitmix64 finalizer; decorrelates sequential inputs.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Order-sensitive accumulator over 64-bit words producing a 128-bit digest.
/// Streams of different length never collide by prefix: the element count is
/// folded into the final state.
class Digest128 {
public:
    void absorb(std::uint64_t v) {
        lo_ = mix64(lo_ ^ v);
        hi_ = mix64(hi_ + v * kFnvPrime);
        ++count_;
    }

    void absorb(std::string_view s) { absorb(fnv1a(s)); }

    std::array<std::uint64_t, 2> finish() const {
        return {mix64(hi_ ^ count_), mix64(lo_ + count_)};
    }

private:
    std::uint64_t hi_ = 0x6a09e667f3bcc908ull;
    std::uint64_t lo_ = 0xbb67ae8584caa73bull;
    std::uint64_t count_ = 0;
};

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline std::string to_hex(const std::array<std::uint64_t, 2>& v) {
    return to_hex(v[0]) + to_hex(v[1]);
}

} // namespace gts

#endif // GTS_HASH_HPP
