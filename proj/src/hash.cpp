#include "daybt/hash.hpp"

#include <cstdio>
#include <fstream>

#include "daybt/errors.hpp"

namespace daybt {

std::string Fnv1a::hex() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
}

void hash_file(Fnv1a& h, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for hashing: " + path);
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        h.update(std::string_view(buf, static_cast<std::size_t>(in.gcount())));
    }
}

} // namespace daybt
