#pragma once

#include <string>
#include <string_view>

namespace mnet {

// SHA-256 digest as lowercase hex; used to fingerprint inputs in
// certificates and run manifests.
std::string sha256_hex(std::string_view data);

}  // namespace mnet
