#include "biastrace/digest.hpp"

#include "biastrace/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace biastrace {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return digest_hex(ss.str());
}

} // namespace biastrace
