#pragma once

#include <string>
#include <string_view>

namespace listreward {

bool is_ascii(std::string_view text);

// Strips ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

// Unicode NFC. Invalid UTF-8 sequences become U+FFFD.
std::string nfc(std::string_view text);

// Matching normalization applied to both sides of every string comparison:
// NFC, full Unicode case folding, whitespace trimmed and collapsed to single
// spaces, and the ASCII punctuation . , ; : ! ? " ' ( ) stripped from both
// ends. Idempotent.
std::string normalize(std::string_view text);

}  // namespace listreward
