// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_STEMMER_HPP
#define LOGIGRAPH_STEMMER_HPP

#include <string>
#include <string_view>

namespace logigraph {

/// Porter (1980) suffix-stripping stemmer for lowercase ASCII words.
/// Words of length <= 2 or with non-alphabetic characters come back unchanged.
std::string stem(std::string_view word);

} // namespace logigraph

#endif // LOGIGRAPH_STEMMER_HPP
