#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prose2poem {

// Reserved slot symbol shared by masked sequences and the fill-mask protocol.
inline constexpr std::string_view kMaskToken = "[MASK]";

// Sentence sentinels used by the n-gram model; rejected as corpus words.
inline constexpr std::string_view kBeginToken = "<s>";
inline constexpr std::string_view kEndToken = "</s>";

inline constexpr char32_t kZwnj = U'\u200C';

std::string normalize_nfc(std::string_view text);

// Splits NFC-normalized text into word tokens.
//
// Tokens are separated by Unicode whitespace. Leading and trailing
// punctuation (and stray ZWNJ) is stripped from each chunk and discarded;
// chunks made only of punctuation vanish. ZWNJ inside a word is preserved.
// The literal mask symbol survives as a single token.
//
// tokenize(detokenize(tokenize(s))) == tokenize(s) for every s.
std::vector<std::string> tokenize(std::string_view text);

std::string detokenize(std::span<const std::string> tokens);

std::u32string to_code_points(std::string_view utf8);

// Sentinels and the mask symbol cannot appear as corpus words.
bool is_reserved_token(std::string_view token);

// 64-bit FNV-1a, used to fingerprint corpora and the artifacts built from them.
std::uint64_t fingerprint(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace prose2poem
