#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>
#include <type_traits>

namespace routerisk::detail {

// FNV-1a, 64-bit.
class Fnv1a {
public:
    void bytes(const void* data, std::size_t n) noexcept {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }

    template <typename T>
        requires std::is_arithmetic_v<T>
    void add(T value) noexcept {
        if constexpr (std::is_floating_point_v<T>) {
            if (value == T{0}) value = T{0};  // fold -0.0
        }
        bytes(&value, sizeof(value));
    }

    void add(std::string_view s) noexcept {
        add(static_cast<std::uint64_t>(s.size()));
        bytes(s.data(), s.size());
    }

    std::uint64_t value() const noexcept { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// splitmix64 finalizer, used to derive independent seeds.
inline std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    return mix_seed(mix_seed(base) ^ (stream * 0xd1b54a32d192ed03ULL));
}

}  // namespace routerisk::detail
