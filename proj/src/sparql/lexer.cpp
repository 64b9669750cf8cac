#include "sqt/sparql/lexer.hpp"

#include <cctype>

#include "sqt/util/strings.hpp"

namespace sqt::sparql {

namespace {

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// Characters a PN_LOCAL may contain directly (plus '.' with lookahead and
// '\'-escapes and %-encoded pairs, handled in the scanner).
bool is_local_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

Kw keyword_of(std::string_view word) {
    struct Entry { const char* name; Kw kw; };
    static const Entry table[] = {
        {"SELECT", Kw::Select},     {"ASK", Kw::Ask},
        {"CONSTRUCT", Kw::Construct}, {"DESCRIBE", Kw::Describe},
        {"WHERE", Kw::Where},       {"PREFIX", Kw::Prefix},
        {"BASE", Kw::Base},         {"ORDER", Kw::Order},
        {"BY", Kw::By},             {"LIMIT", Kw::Limit},
        {"OFFSET", Kw::Offset},     {"DISTINCT", Kw::Distinct},
        {"REDUCED", Kw::Reduced},   {"AS", Kw::As},
        {"FILTER", Kw::Filter},     {"OPTIONAL", Kw::Optional},
        {"UNION", Kw::Union},       {"VALUES", Kw::Values},
        {"BIND", Kw::Bind},         {"SERVICE", Kw::Service},
        {"MINUS", Kw::Minus},       {"GRAPH", Kw::Graph},
        {"FROM", Kw::From},         {"NAMED", Kw::Named},
        {"GROUP", Kw::Group},       {"HAVING", Kw::Having},
        {"ASC", Kw::Asc},           {"DESC", Kw::Desc},
        {"NOT", Kw::Not},           {"EXISTS", Kw::Exists},
        {"IN", Kw::In},
    };
    for (const auto& e : table)
        if (iequals(word, e.name)) return e.kw;
    return Kw::None;
}

// `<` opens an IRIREF only if a matching `>` appears before whitespace or a
// character illegal inside IRIs; otherwise it is the less-than operator.
bool looks_like_iriref(std::string_view s, size_t pos, size_t* close) {
    for (size_t i = pos + 1; i < s.size(); ++i) {
        char c = s[i];
        if (c == '>') {
            *close = i;
            return true;
        }
        if (c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
            std::isspace(static_cast<unsigned char>(c)))
            return false;
    }
    return false;
}

} // namespace

LexResult lex(std::string_view s) {
    LexResult out;
    size_t i = 0;
    const size_t n = s.size();

    auto push = [&](Token t) { out.tokens.push_back(std::move(t)); };

    while (i < n) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {  // comment to end of line
            while (i < n && s[i] != '\n') ++i;
            continue;
        }
        size_t start = i;
        if (c == '<') {
            size_t close;
            if (looks_like_iriref(s, i, &close)) {
                push({Token::Kind::IriRef, Kw::None,
                      std::string(s.substr(i + 1, close - i - 1)), "", "", start,
                      close + 1});
                i = close + 1;
                continue;
            }
            push({Token::Kind::Punct, Kw::None, "<", "", "", start, start + 1});
            ++i;
            continue;
        }
        if (c == '"' || c == '\'') {
            char q = c;
            bool is_long = i + 2 < n && s[i + 1] == q && s[i + 2] == q;
            size_t j = i + (is_long ? 3 : 1);
            bool closed = false;
            while (j < n) {
                if (s[j] == '\\' && j + 1 < n) {
                    j += 2;
                    continue;
                }
                if (is_long) {
                    if (s[j] == q && j + 2 < n && s[j + 1] == q && s[j + 2] == q) {
                        j += 3;
                        closed = true;
                        break;
                    }
                    ++j;
                } else {
                    if (s[j] == q) {
                        ++j;
                        closed = true;
                        break;
                    }
                    if (s[j] == '\n') break;  // unterminated short string
                    ++j;
                }
            }
            if (!closed) {
                out.errors.push_back("unterminated string literal");
                j = std::min(j, n);
            }
            push({Token::Kind::String, Kw::None, std::string(s.substr(i, j - i)),
                  "", "", start, j});
            i = j;
            continue;
        }
        if (c == '@') {
            size_t j = i + 1;
            while (j < n && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '-'))
                ++j;
            push({Token::Kind::LangTag, Kw::None, std::string(s.substr(i, j - i)),
                  "", "", start, j});
            i = j;
            continue;
        }
        if (c == '?' || c == '$') {
            size_t j = i + 1;
            while (j < n && is_name_char(s[j])) ++j;
            if (j == i + 1) {  // bare '?' is the path modifier
                push({Token::Kind::Punct, Kw::None, std::string(1, c), "", "",
                      start, start + 1});
                ++i;
                continue;
            }
            push({Token::Kind::Var, Kw::None, std::string(s.substr(i + 1, j - i - 1)),
                  "", "", start, j});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '+' || c == '-' || c == '.') && i + 1 < n &&
             std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            size_t j = i;
            if (s[j] == '+' || s[j] == '-') ++j;
            while (j < n && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j < n && s[j] == '.' && j + 1 < n &&
                std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                while (j < n && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            }
            if (j < n && (s[j] == 'e' || s[j] == 'E')) {
                size_t k = j + 1;
                if (k < n && (s[k] == '+' || s[k] == '-')) ++k;
                if (k < n && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    j = k;
                    while (j < n && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                }
            }
            push({Token::Kind::Number, Kw::None, std::string(s.substr(i, j - i)),
                  "", "", start, j});
            i = j;
            continue;
        }
        if (is_name_start(c)) {
            size_t j = i;
            while (j < n && is_name_char(s[j])) ++j;
            // prefixed name: label ':' local
            if (j < n && s[j] == ':') {
                std::string prefix(s.substr(i, j - i));
                size_t k = j + 1;
                std::string local;
                while (k < n) {
                    char lc = s[k];
                    if (is_local_char(lc)) {
                        local.push_back(lc);
                        ++k;
                    } else if (lc == '%' && k + 2 < n &&
                               std::isxdigit(static_cast<unsigned char>(s[k + 1])) &&
                               std::isxdigit(static_cast<unsigned char>(s[k + 2]))) {
                        local.append(s.substr(k, 3));
                        k += 3;
                    } else if (lc == '\\' && k + 1 < n) {
                        local.push_back(s[k + 1]);  // unescape
                        k += 2;
                    } else if (lc == '.' && k + 1 < n &&
                               (is_local_char(s[k + 1]) || s[k + 1] == '\\' ||
                                s[k + 1] == '%')) {
                        // internal dot; a trailing dot terminates the triple
                        local.push_back('.');
                        ++k;
                    } else {
                        break;
                    }
                }
                push({Token::Kind::PName, Kw::None,
                      std::string(s.substr(i, k - i)), prefix, local, start, k});
                i = k;
                continue;
            }
            std::string word(s.substr(i, j - i));
            if (word == "a") {  // case-sensitive per the grammar
                push({Token::Kind::Keyword, Kw::A, word, "", "", start, j});
            } else {
                Kw kw = keyword_of(word);
                push({kw == Kw::None ? Token::Kind::Name : Token::Kind::Keyword,
                      kw, word, "", "", start, j});
            }
            i = j;
            continue;
        }
        if (c == ':') {  // default-prefix pname  :local
            size_t k = i + 1;
            std::string local;
            while (k < n && (is_local_char(s[k]) ||
                             (s[k] == '.' && k + 1 < n && is_local_char(s[k + 1])))) {
                local.push_back(s[k]);
                ++k;
            }
            push({Token::Kind::PName, Kw::None, std::string(s.substr(i, k - i)),
                  "", local, start, k});
            i = k;
            continue;
        }
        push({Token::Kind::Punct, Kw::None, std::string(1, c), "", "", start,
              start + 1});
        ++i;
    }
    return out;
}

bool brackets_balanced(const std::vector<Token>& tokens) {
    std::vector<char> stack;
    for (const auto& t : tokens) {
        if (t.kind != Token::Kind::Punct) continue;
        char c = t.text[0];
        if (c == '{' || c == '(' || c == '[') {
            stack.push_back(c);
        } else if (c == '}' || c == ')' || c == ']') {
            char open = c == '}' ? '{' : (c == ')' ? '(' : '[');
            if (stack.empty() || stack.back() != open) return false;
            stack.pop_back();
        }
    }
    return stack.empty();
}

} // namespace sqt::sparql
