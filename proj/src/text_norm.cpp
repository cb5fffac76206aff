#include "text_norm.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace curator {

namespace {

const icu::Normalizer2& nfkc() {
    UErrorCode ec = U_ZERO_ERROR;
    const icu::Normalizer2* inst = icu::Normalizer2::getNFKCInstance(ec);
    if (U_FAILURE(ec) || inst == nullptr) {
        throw std::runtime_error("ICU NFKC normalizer unavailable");
    }
    return *inst;
}

} // namespace

std::string normalize_text(std::string_view text) {
    if (text.empty()) {
        return {};
    }
    icu::UnicodeString us = icu::UnicodeString::fromUTF8(
        icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));

    UErrorCode ec = U_ZERO_ERROR;
    icu::UnicodeString normalized = nfkc().normalize(us, ec);
    if (U_FAILURE(ec)) {
        normalized = us;
    }
    normalized.toLower(icu::Locale::getRoot());

    icu::UnicodeString out;
    bool pending_space = false;
    for (int32_t i = 0; i < normalized.length();) {
        UChar32 cp = normalized.char32At(i);
        i += U16_LENGTH(cp);
        if (u_isalnum(cp)) {
            if (pending_space && out.length() > 0) {
                out.append(static_cast<UChar>(u' '));
            }
            pending_space = false;
            out.append(cp);
        } else {
            pending_space = true;
        }
    }

    std::string result;
    out.toUTF8String(result);
    return result;
}

std::vector<std::string> normalized_tokens(std::string_view text) {
    std::string norm = normalize_text(text);
    std::vector<std::string> tokens;
    size_t start = 0;
    while (start < norm.size()) {
        size_t end = norm.find(' ', start);
        if (end == std::string::npos) {
            end = norm.size();
        }
        tokens.emplace_back(norm.substr(start, end - start));
        start = end + 1;
    }
    return tokens;
}

} // namespace curator
