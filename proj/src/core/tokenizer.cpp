#include "core/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include "core/error.hpp"

namespace lexalign {

namespace {

// ---------------------------------------------------------------- porter

// Direct transcription of the classic algorithm; `word` holds lowercase
// ASCII letters, k is the index of the last live character and j marks the
// stem end set by ends().
struct porter_state {
    std::string b;
    int k = 0;
    int j = 0;

    bool cons(int i) const {
        switch (b[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !cons(i - 1);
        default:
            return true;
        }
    }

    int m() const {
        int n = 0;
        int i = 0;
        for (;;) {
            if (i > j) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        for (;;) {
            for (;;) {
                if (i > j) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            for (;;) {
                if (i > j) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool doublec(int i) const {
        if (i < 1) return false;
        if (b[i] != b[i - 1]) return false;
        return cons(i);
    }

    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char ch = b[i];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(const char* s) {
        int len = static_cast<int>(std::char_traits<char>::length(s));
        if (len > k + 1) return false;
        if (b.compare(k - len + 1, len, s) != 0) return false;
        j = k - len;
        return true;
    }

    void setto(const char* s) {
        int len = static_cast<int>(std::char_traits<char>::length(s));
        b.replace(j + 1, b.size() - j - 1, s);
        k = j + len;
    }

    void r(const char* s) {
        if (m() > 0) setto(s);
    }

    void step1ab() {
        if (b[k] == 's') {
            if (ends("sses"))
                k -= 2;
            else if (ends("ies"))
                setto("i");
            else if (b[k - 1] != 's')
                --k;
        }
        if (ends("eed")) {
            if (m() > 0) --k;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k = j;
            if (ends("at"))
                setto("ate");
            else if (ends("bl"))
                setto("ble");
            else if (ends("iz"))
                setto("ize");
            else if (doublec(k)) {
                --k;
                char ch = b[k];
                if (ch == 'l' || ch == 's' || ch == 'z') ++k;
            } else if (m() == 1 && cvc(k))
                setto("e");
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b[k] = 'i';
    }

    void step2() {
        switch (b[k - 1]) {
        case 'a':
            if (ends("ational")) { r("ate"); break; }
            if (ends("tional")) { r("tion"); break; }
            break;
        case 'c':
            if (ends("enci")) { r("ence"); break; }
            if (ends("anci")) { r("ance"); break; }
            break;
        case 'e':
            if (ends("izer")) { r("ize"); break; }
            break;
        case 'l':
            if (ends("bli")) { r("ble"); break; }
            if (ends("alli")) { r("al"); break; }
            if (ends("entli")) { r("ent"); break; }
            if (ends("eli")) { r("e"); break; }
            if (ends("ousli")) { r("ous"); break; }
            break;
        case 'o':
            if (ends("ization")) { r("ize"); break; }
            if (ends("ation")) { r("ate"); break; }
            if (ends("ator")) { r("ate"); break; }
            break;
        case 's':
            if (ends("alism")) { r("al"); break; }
            if (ends("iveness")) { r("ive"); break; }
            if (ends("fulness")) { r("ful"); break; }
            if (ends("ousness")) { r("ous"); break; }
            break;
        case 't':
            if (ends("aliti")) { r("al"); break; }
            if (ends("iviti")) { r("ive"); break; }
            if (ends("biliti")) { r("ble"); break; }
            break;
        case 'g':
            if (ends("logi")) { r("log"); break; }
            break;
        default:
            break;
        }
    }

    void step3() {
        switch (b[k]) {
        case 'e':
            if (ends("icate")) { r("ic"); break; }
            if (ends("ative")) { r(""); break; }
            if (ends("alize")) { r("al"); break; }
            break;
        case 'i':
            if (ends("iciti")) { r("ic"); break; }
            break;
        case 'l':
            if (ends("ical")) { r("ic"); break; }
            if (ends("ful")) { r(""); break; }
            break;
        case 's':
            if (ends("ness")) { r(""); break; }
            break;
        default:
            break;
        }
    }

    void step4() {
        switch (b[k - 1]) {
        case 'a':
            if (ends("al")) break;
            return;
        case 'c':
            if (ends("ance")) break;
            if (ends("ence")) break;
            return;
        case 'e':
            if (ends("er")) break;
            return;
        case 'i':
            if (ends("ic")) break;
            return;
        case 'l':
            if (ends("able")) break;
            if (ends("ible")) break;
            return;
        case 'n':
            if (ends("ant")) break;
            if (ends("ement")) break;
            if (ends("ment")) break;
            if (ends("ent")) break;
            return;
        case 'o':
            if (ends("ion") && j >= 0 && (b[j] == 's' || b[j] == 't')) break;
            if (ends("ou")) break;
            return;
        case 's':
            if (ends("ism")) break;
            return;
        case 't':
            if (ends("ate")) break;
            if (ends("iti")) break;
            return;
        case 'u':
            if (ends("ous")) break;
            return;
        case 'v':
            if (ends("ive")) break;
            return;
        case 'z':
            if (ends("ize")) break;
            return;
        default:
            return;
        }
        if (m() > 1) k = j;
    }

    void step5() {
        j = k;
        if (b[k] == 'e') {
            int a = m();
            if (a > 1 || (a == 1 && !cvc(k - 1))) --k;
        }
        if (b[k] == 'l' && doublec(k) && m() > 1) --k;
    }
};

bool is_ascii_lower_word(const std::string& w) {
    return std::all_of(w.begin(), w.end(), [](unsigned char c) { return c >= 'a' && c <= 'z'; });
}

} // namespace

std::string porter_stem(const std::string& word) {
    if (word.size() <= 2 || !is_ascii_lower_word(word)) return word;
    porter_state s;
    s.b = word;
    s.k = static_cast<int>(word.size()) - 1;
    s.step1ab();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    s.b.resize(s.k + 1);
    return s.b;
}

const std::unordered_set<std::string>& default_stopwords() {
    static const std::unordered_set<std::string> words = {
        "a",    "an",   "and",  "are",   "as",    "at",   "be",   "but",  "by",
        "for",  "if",   "in",   "into",  "is",    "it",   "no",   "not",  "of",
        "on",   "or",   "such", "that",  "the",   "their", "then", "there",
        "these", "they", "this", "to",   "was",   "will", "with"};
    return words;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open stopword file: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t");
        words.insert(line.substr(b, e - b + 1));
    }
    return words;
}

std::string normalize_nfc(const std::string& text) {
    bool ascii = std::all_of(text.begin(), text.end(), [](unsigned char c) { return c < 0x80; });
    if (ascii) return text;

    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* nfc = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) raise(errc::unknown, "ICU NFC instance unavailable");

    std::vector<UChar> utf16(text.size() + 1);
    int32_t len16 = 0;
    status = U_ZERO_ERROR;
    u_strFromUTF8WithSub(utf16.data(), static_cast<int32_t>(utf16.size()), &len16, text.data(),
                         static_cast<int32_t>(text.size()), 0xfffd, nullptr, &status);
    if (U_FAILURE(status)) raise(errc::parse, "text is not decodable as UTF-8");

    std::vector<UChar> normed(static_cast<size_t>(len16) * 3 + 32);
    status = U_ZERO_ERROR;
    int32_t lenn = unorm2_normalize(nfc, utf16.data(), len16, normed.data(),
                                    static_cast<int32_t>(normed.size()), &status);
    if (U_FAILURE(status)) raise(errc::unknown, "NFC normalization failed");

    std::string out(static_cast<size_t>(lenn) * 4 + 32, '\0');
    int32_t len8 = 0;
    status = U_ZERO_ERROR;
    u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &len8, normed.data(), lenn, &status);
    if (U_FAILURE(status)) raise(errc::unknown, "UTF-8 re-encoding failed");
    out.resize(len8);
    return out;
}

std::vector<std::string> tokenize(const std::string& text, const pipeline_config& cfg) {
    std::string norm = normalize_nfc(text);

    // Load or reference the stop set up front so errors surface before work.
    const std::unordered_set<std::string>* stops = nullptr;
    std::unordered_set<std::string> file_stops;
    if (cfg.stopwords) {
        if (cfg.stopword_file.empty()) {
            stops = &default_stopwords();
        } else {
            file_stops = load_stopwords(cfg.stopword_file);
            stops = &file_stops;
        }
    }

    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&]() {
        if (current.empty()) return;
        std::string tok = std::move(current);
        current.clear();
        if (cfg.lowercase)
            for (auto& c : tok)
                if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (cfg.stem) tok = porter_stem(tok);
        if (stops != nullptr && stops->count(tok) > 0) return;
        tokens.push_back(std::move(tok));
    };

    for (unsigned char c : norm) {
        bool word_char = (c >= 0x80) || std::isalnum(c);
        if (word_char)
            current.push_back(static_cast<char>(c));
        else
            flush();
    }
    flush();
    return tokens;
}

} // namespace lexalign
