#include "listreward/text.h"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utypes.h>

#include <stdexcept>

namespace listreward {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_edge_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '"': case '\'': case '(': case ')':
      return true;
    default:
      return false;
  }
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *n;
}

std::string nfc_fold(std::string_view text) {
  const icu::Normalizer2& norm = nfc_instance();
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString composed = norm.normalize(s, status);
  composed.foldCase();
  composed = norm.normalize(composed, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  std::string out;
  composed.toUTF8String(out);
  return out;
}

}  // namespace

bool is_ascii(std::string_view text) {
  for (unsigned char c : text) {
    if (c >= 0x80) return false;
  }
  return true;
}

std::string_view trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return text.substr(b, e - b);
}

std::string nfc(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  const icu::Normalizer2& norm = nfc_instance();
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString composed = norm.normalize(s, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  std::string out;
  composed.toUTF8String(out);
  return out;
}

std::string normalize(std::string_view text) {
  std::string folded;
  if (is_ascii(text)) {
    folded.assign(text);
    for (char& c : folded) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  } else {
    folded = nfc_fold(text);
  }

  std::size_t b = 0, e = folded.size();
  while (b < e && (is_space(folded[b]) || is_edge_punct(folded[b]))) ++b;
  while (e > b && (is_space(folded[e - 1]) || is_edge_punct(folded[e - 1]))) {
    --e;
  }

  std::string out;
  out.reserve(e - b);
  bool pending_space = false;
  for (std::size_t i = b; i < e; ++i) {
    char c = folded[i];
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace listreward
