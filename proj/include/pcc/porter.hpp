#pragma once

#include <string>
#include <string_view>

namespace pcc {

/// Porter (1980) suffix-stripping stemmer, steps 1a through 5b, as originally
/// published. Input is expected lowercase; any token containing a character
/// outside a-z is returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace pcc
