#include "tausolve/rational.hpp"

#include <cstdlib>

namespace tausolve {

Rat Rat::parse(const std::string& s) {
    if (s.empty()) fail(Err::ParseError, "empty rational literal");
    std::size_t slash = s.find('/');
    auto to_i64 = [&](const std::string& part) -> std::int64_t {
        if (part.empty()) fail(Err::ParseError, "malformed rational '" + s + "'");
        char* end = nullptr;
        errno = 0;
        long long v = std::strtoll(part.c_str(), &end, 10);
        if (errno != 0 || end != part.c_str() + part.size())
            fail(Err::ParseError, "malformed rational '" + s + "'");
        return (std::int64_t)v;
    };
    if (slash == std::string::npos) return Rat(to_i64(s));
    return Rat(to_i64(s.substr(0, slash)), to_i64(s.substr(slash + 1)));
}

} // namespace tausolve
