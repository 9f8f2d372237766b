#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace daybt {

// FNV-1a 64-bit, used to fingerprint input files in run manifests.
class Fnv1a {
public:
    void update(std::string_view bytes) {
        for (unsigned char c : bytes) {
            hash_ ^= c;
            hash_ *= 0x100000001b3ULL;
        }
    }

    std::uint64_t value() const { return hash_; }

    std::string hex() const;

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

// Reads a file and folds its bytes into the hash. Throws DataError if the
// file cannot be opened.
void hash_file(Fnv1a& h, const std::string& path);

} // namespace daybt
