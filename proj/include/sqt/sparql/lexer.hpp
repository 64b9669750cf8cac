#ifndef SQT_SPARQL_LEXER_HPP
#define SQT_SPARQL_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

namespace sqt::sparql {

enum class Kw {
    None,
    Select, Ask, Construct, Describe,
    Where, Prefix, Base,
    Order, By, Limit, Offset,
    Distinct, Reduced, As,
    Filter, Optional, Union, Values, Bind, Service, Minus, Graph,
    From, Named, Group, Having, Asc, Desc,
    Not, Exists, In,
    A, // the rdf:type shorthand
};

struct Token {
    enum class Kind {
        Keyword,  // recognized SPARQL keyword (kw set)
        Name,     // bareword: function names, true/false, unknown keywords
        IriRef,   // <...>, text holds the IRI without brackets
        PName,    // prefixed name; prefix/local split out
        Var,      // ?x or $x, text holds the bare name
        String,   // quoted literal, text holds the raw lexeme incl. quotes
        LangTag,  // @en
        Number,
        Punct,    // single punctuation char in text
    };

    Kind kind;
    Kw kw = Kw::None;
    std::string text;    // see per-kind notes above
    std::string prefix;  // PName only
    std::string local;   // PName only, unescaped
    size_t begin = 0;    // byte range in the source text
    size_t end = 0;
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<std::string> errors;  // unterminated string/IRI etc.

    bool ok() const { return errors.empty(); }
};

/// Tokenizes SPARQL text. Never throws; lexical problems are reported in
/// errors and tokenization continues past them where possible.
LexResult lex(std::string_view text);

/// True when {}, () and [] nest correctly across the token stream.
bool brackets_balanced(const std::vector<Token>& tokens);

} // namespace sqt::sparql

#endif
