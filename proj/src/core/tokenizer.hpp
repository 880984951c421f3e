#pragma once

#include <string>
#include <unordered_set>
#include <vector>

namespace lexalign {

/// Text pipeline settings. The identity pipeline (no stemming, no stopword
/// removal) reproduces plain alphanumeric splitting, which is the main
/// configuration for all distribution analyses.
struct pipeline_config {
    bool lowercase = true;
    bool stem = false;
    bool stopwords = false;
    /// Optional stopword list override, one term per line. Empty means the
    /// bundled 33-term classic English list.
    std::string stopword_file;
};

/// Classic Porter stemmer (1980 algorithm, with the two fixes carried by the
/// reference implementation: step-2 "bli"->"ble" and "logi"->"log").
/// Operates on lowercase ASCII words; anything else is returned unchanged.
std::string porter_stem(const std::string& word);

/// The bundled stop set (33 classic English stopwords).
const std::unordered_set<std::string>& default_stopwords();

/// Loads a stopword file, one term per line, '#' comments allowed.
std::unordered_set<std::string> load_stopwords(const std::string& path);

/// NFC-normalizes UTF-8 text. ASCII input is returned as-is; malformed UTF-8
/// sequences are substituted with U+FFFD before normalizing.
std::string normalize_nfc(const std::string& text);

/// Splits on maximal non-alphanumeric runs after NFC normalization, then
/// applies lowercasing, stemming and stopword removal in that order.
/// Case folding is ASCII-only; non-ASCII code points count as word
/// characters and pass through unchanged.
std::vector<std::string> tokenize(const std::string& text, const pipeline_config& cfg);

} // namespace lexalign
