#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace curator {

// Canonical dedup key for a text: unicode compatibility normalization (NFKC),
// lowercased in the root locale, every non-alphanumeric codepoint replaced by
// a space, runs of spaces collapsed, then trimmed. Idempotent; empty input
// yields empty output. The stored text is never altered, only its key.
std::string normalize_text(std::string_view text);

// normalize_text followed by a split on single spaces.
std::vector<std::string> normalized_tokens(std::string_view text);

} // namespace curator
