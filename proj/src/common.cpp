#include "newspop/common.hpp"

#include <cstdio>
#include <cstring>

namespace newspop {

Fingerprint& Fingerprint::add(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    return add(bits);
}

std::string Fingerprint::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return buf;
}

}  // namespace newspop
