#ifndef STRPROP_TEXT_HH
#define STRPROP_TEXT_HH

#include <cstddef>
#include <string>
#include <string_view>

#include "strprop/interval.hh"

namespace strprop {

    /// Decodes one UTF-8 sequence starting at `pos` and advances `pos`.
    /// Invalid bytes decode as themselves (Latin-1 fallback) so that no input is rejected here.
    CodePoint utf8_next(std::string_view s, std::size_t& pos);

    std::u32string utf8_decode(std::string_view s);
    std::string utf8_encode(std::u32string_view w);
    void utf8_append(std::string& out, CodePoint c);

} // namespace strprop

#endif
