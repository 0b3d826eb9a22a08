#include "prose2poem/text.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "prose2poem/error.h"

namespace prose2poem {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t begin = i;
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({static_cast<char32_t>(c), static_cast<std::size_t>(begin),
                   static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_separator(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c)) || c == U'\uFEFF';
}

bool is_strippable(char32_t c) {
  return u_ispunct(static_cast<UChar32>(c)) || c == kZwnj;
}

}  // namespace

std::string normalize_nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  const std::string normalized = normalize_nfc(text);
  const auto cps = decode(normalized);
  std::vector<std::string> tokens;

  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_separator(cps[i].value)) ++i;
    const std::size_t chunk_begin = i;
    while (i < cps.size() && !is_separator(cps[i].value)) ++i;
    const std::size_t chunk_end = i;
    if (chunk_begin == chunk_end) continue;

    const std::string_view chunk(normalized.data() + cps[chunk_begin].begin,
                                 cps[chunk_end - 1].end - cps[chunk_begin].begin);
    if (chunk == kMaskToken) {
      tokens.emplace_back(chunk);
      continue;
    }
    std::size_t lo = chunk_begin;
    std::size_t hi = chunk_end;
    while (lo < hi && is_strippable(cps[lo].value)) ++lo;
    while (hi > lo && is_strippable(cps[hi - 1].value)) --hi;
    if (lo == hi) continue;
    tokens.emplace_back(normalized.substr(cps[lo].begin, cps[hi - 1].end - cps[lo].begin));
  }
  return tokens;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::u32string to_code_points(std::string_view utf8) {
  std::u32string out;
  for (const auto& cp : decode(utf8)) out.push_back(cp.value);
  return out;
}

bool is_reserved_token(std::string_view token) {
  return token == kMaskToken || token == kBeginToken || token == kEndToken;
}

std::uint64_t fingerprint(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace prose2poem
