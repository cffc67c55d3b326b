#pragma once

#include <cstdint>
#include <initializer_list>

namespace gpc {

// Seed derivation tree. Every random stream descends from one root seed by
// mixing in a path of integer tags (point id, trial, measurement setting...),
// so any sub-stream can be regenerated without replaying its siblings.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(root);
    for (std::uint64_t tag : path) {
        s = splitmix64(s ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
    }
    return s;
}

}  // namespace gpc
