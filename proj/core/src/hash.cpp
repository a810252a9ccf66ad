#include "teeshield/hash.hpp"

#include <fstream>
#include <sstream>

#include "teeshield/errors.hpp"

namespace teeshield {

std::string hash_hex(uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

uint64_t hash_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open '" + path + "' for hashing");
    std::ostringstream ss;
    ss << is.rdbuf();
    const std::string buf = ss.str();
    return fnv1a64(buf.data(), buf.size());
}

}  // namespace teeshield
