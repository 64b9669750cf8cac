#include "sqt/extract/extract.hpp"

#include <cctype>

#include <json.hpp>

#include "sqt/sparql/query_doc.hpp"
#include "sqt/util/jsonl.hpp"
#include "sqt/util/strings.hpp"

namespace sqt {

namespace {

bool word_boundary(const std::string& s, size_t pos, size_t len) {
    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (pos > 0 && is_word(s[pos - 1])) return false;
    if (pos + len < s.size() && is_word(s[pos + len])) return false;
    return true;
}

size_t find_word_ci(const std::string& s, const std::string& word, size_t from = 0) {
    size_t pos = from;
    while ((pos = ifind(s, word, pos)) != std::string::npos) {
        if (word_boundary(s, pos, word.size())) return pos;
        ++pos;
    }
    return std::string::npos;
}

bool contains_form_keyword(const std::string& s) {
    for (const char* kw : {"SELECT", "ASK", "CONSTRUCT", "DESCRIBE"})
        if (find_word_ci(s, kw) != std::string::npos) return true;
    return false;
}

// Trailing artifacts the keyword scan drags along: fences, stray close tags,
// whitespace.
std::string trim_suffix_junk(std::string s) {
    for (;;) {
        std::string t = trim(s);
        if (t.size() != s.size()) {
            s = std::move(t);
            continue;
        }
        if (s.size() >= 3 && s.compare(s.size() - 3, 3, "```") == 0) {
            s.erase(s.size() - 3);
            continue;
        }
        if (!s.empty() && s.back() == '`') {
            s.pop_back();
            continue;
        }
        if (!s.empty() && s.back() == '>') {
            auto open = s.rfind("</");
            if (open != std::string::npos &&
                s.find_first_of(" \t\n{}", open) == std::string::npos) {
                s.erase(open);
                continue;
            }
        }
        return s;
    }
}

struct FencedBlock {
    size_t content_begin;
    size_t content_end;
};

std::vector<FencedBlock> find_fenced_blocks(const std::string& s) {
    std::vector<FencedBlock> blocks;
    size_t pos = 0;
    for (;;) {
        size_t open = s.find("```", pos);
        if (open == std::string::npos) break;
        size_t content = open + 3;
        // optional language id up to end of line
        size_t nl = s.find('\n', content);
        size_t lang_end = content;
        while (lang_end < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[lang_end])) ||
                s[lang_end] == '-' || s[lang_end] == '_'))
            ++lang_end;
        if (nl != std::string::npos && lang_end > content && lang_end <= nl)
            content = lang_end;
        size_t close = s.find("```", content);
        if (close == std::string::npos) break;
        blocks.push_back({content, close});
        pos = close + 3;
    }
    return blocks;
}

} // namespace

std::string to_string(ExtractionMethod m) {
    switch (m) {
        case ExtractionMethod::SparqlTag: return "sparql_tag";
        case ExtractionMethod::CodeFence: return "code_fence";
        default: return "keyword_scan";
    }
}

std::optional<ExtractionMethod> extraction_method_from(const std::string& s) {
    if (s == "sparql_tag") return ExtractionMethod::SparqlTag;
    if (s == "code_fence") return ExtractionMethod::CodeFence;
    if (s == "keyword_scan") return ExtractionMethod::KeywordScan;
    return std::nullopt;
}

ExtractionResult extract_candidate(const std::string& raw) {
    ExtractionResult out;

    // 1. instructed tags; several pairs happen with drafting models, the
    //    final answer is the last complete pair
    const std::string open_tag = "<sparql>";
    const std::string close_tag = "</sparql>";
    size_t last_open = std::string::npos, last_close = std::string::npos;
    size_t scan = 0;
    for (;;) {
        size_t open = ifind(raw, open_tag, scan);
        if (open == std::string::npos) break;
        size_t close = ifind(raw, close_tag, open + open_tag.size());
        if (close == std::string::npos) {
            if (last_close == std::string::npos) {
                // truncated completion: take the remainder, validation gates it
                out.status = ExtractionResult::Status::Extracted;
                out.method = ExtractionMethod::SparqlTag;
                out.query_text = raw.substr(open + open_tag.size());
                out.tag_unclosed = true;
                return out;
            }
            break;
        }
        last_open = open;
        last_close = close;
        scan = close + close_tag.size();
    }
    if (last_open != std::string::npos) {
        out.status = ExtractionResult::Status::Extracted;
        out.method = ExtractionMethod::SparqlTag;
        out.query_text =
            raw.substr(last_open + open_tag.size(), last_close - last_open - open_tag.size());
        return out;
    }

    // 2. markdown code fences: the last block that holds a query form
    auto blocks = find_fenced_blocks(raw);
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        std::string content = raw.substr(it->content_begin,
                                         it->content_end - it->content_begin);
        if (contains_form_keyword(content)) {
            out.status = ExtractionResult::Status::Extracted;
            out.method = ExtractionMethod::CodeFence;
            out.query_text = std::move(content);
            return out;
        }
    }

    // 3. first query-form or PREFIX keyword to end of output
    size_t anchor = std::string::npos;
    for (const char* kw : {"PREFIX", "SELECT", "ASK", "CONSTRUCT", "DESCRIBE"}) {
        size_t pos = find_word_ci(raw, kw);
        if (pos != std::string::npos && (anchor == std::string::npos || pos < anchor))
            anchor = pos;
    }
    if (anchor != std::string::npos) {
        out.status = ExtractionResult::Status::Extracted;
        out.method = ExtractionMethod::KeywordScan;
        out.query_text = trim_suffix_junk(raw.substr(anchor));
        return out;
    }

    out.status = ExtractionResult::Status::Failed;
    out.failure_reason = "no_query_material";
    return out;
}

std::string sanitize(const std::string& query_text) {
    // pass 1: drop tag fragments, whole <think> blocks and fence ticks;
    // removals can splice new occurrences together, so run to a fixpoint
    std::string s = query_text;
    for (bool changed = true; changed;) {
        changed = false;
        for (;;) {
            size_t open = ifind(s, "<think>");
            if (open == std::string::npos) break;
            size_t close = ifind(s, "</think>", open);
            if (close == std::string::npos) {
                s.erase(open, std::string("<think>").size());
            } else {
                s.erase(open, close + std::string("</think>").size() - open);
            }
            changed = true;
        }
        for (const char* tag : {"</think>", "<sparql>", "</sparql>"}) {
            for (;;) {
                size_t pos = ifind(s, tag);
                if (pos == std::string::npos) break;
                s.erase(pos, std::string(tag).size());
                changed = true;
            }
        }
        for (;;) {
            size_t pos = s.find("```");
            if (pos == std::string::npos) break;
            s.erase(pos, 3);
            changed = true;
        }
    }

    // pass 2: strip comments and collapse whitespace, protecting string
    // literals and <...> IRIs
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    const size_t n = s.size();
    bool pending_space = false;
    auto emit = [&](char c) {
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        out += c;
    };
    while (i < n) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = true;
            ++i;
            continue;
        }
        if (c == '#') {  // comment to end of line
            while (i < n && s[i] != '\n') ++i;
            continue;
        }
        if (c == '<') {
            size_t close = i + 1;
            bool iri = false;
            for (; close < n; ++close) {
                if (s[close] == '>') {
                    iri = true;
                    break;
                }
                if (std::isspace(static_cast<unsigned char>(s[close])) ||
                    s[close] == '<')
                    break;
            }
            if (iri) {
                for (size_t k = i; k <= close; ++k) emit(s[k]);
                i = close + 1;
                continue;
            }
            emit(c);
            ++i;
            continue;
        }
        if (c == '"' || c == '\'') {
            // protected literal region; unlike the lexer this deliberately
            // spans newlines so that quote pairing stays stable across
            // repeated sanitize passes
            char q = c;
            bool is_long = i + 2 < n && s[i + 1] == q && s[i + 2] == q;
            size_t j = i + (is_long ? 3 : 1);
            size_t end = n;
            while (j < n) {
                if (s[j] == '\\' && j + 1 < n) {
                    j += 2;
                    continue;
                }
                if (is_long) {
                    if (s[j] == q && j + 2 < n && s[j + 1] == q && s[j + 2] == q) {
                        end = j + 3;
                        break;
                    }
                } else if (s[j] == q) {
                    end = j + 1;
                    break;
                }
                ++j;
            }
            if (end > n) end = n;
            for (size_t k = i; k < end && k < n; ++k) emit(s[k]);
            i = std::max(end, i + 1);
            continue;
        }
        emit(c);
        ++i;
    }
    return out;
}

std::optional<std::string> validate_candidate(const std::string& query_text) {
    auto lexed = sparql::lex(query_text);
    size_t form_idx = lexed.tokens.size();
    sparql::Kw form = sparql::Kw::None;
    for (size_t i = 0; i < lexed.tokens.size(); ++i) {
        const auto& t = lexed.tokens[i];
        if (t.kind == sparql::Token::Kind::Keyword &&
            (t.kw == sparql::Kw::Select || t.kw == sparql::Kw::Ask ||
             t.kw == sparql::Kw::Construct || t.kw == sparql::Kw::Describe)) {
            form_idx = i;
            form = t.kw;
            break;
        }
    }
    if (form_idx == lexed.tokens.size()) return "missing_query_form";

    if (form == sparql::Kw::Select) {
        bool has_where = false, has_projection = false;
        for (size_t i = form_idx + 1; i < lexed.tokens.size(); ++i) {
            const auto& t = lexed.tokens[i];
            if (t.kind == sparql::Token::Kind::Keyword && t.kw == sparql::Kw::Where) {
                has_where = true;
                break;
            }
            if (t.kind == sparql::Token::Kind::Punct && t.text[0] == '{') {
                has_where = true;  // bare group acts as the WHERE clause
                break;
            }
            if (t.kind == sparql::Token::Kind::Var) has_projection = true;
            if (t.kind == sparql::Token::Kind::Punct && t.text[0] == '*')
                has_projection = true;
        }
        if (!has_where) return "missing_where";
        if (!has_projection) return "missing_projection";
    }

    auto findings = validate_syntax(query_text);
    if (!findings.empty()) return findings.front().code;
    return std::nullopt;
}

void FailureLog::append(const FailureLogEntry& entry) const {
    nlohmann::ordered_json j;
    j["run_id"] = entry.run_id;
    j["raw_digest"] = entry.raw_digest;
    j["stage"] = entry.stage;
    j["reason"] = entry.reason;
    append_jsonl(path_, j);
}

std::vector<FailureLogEntry> FailureLog::load(const std::string& path) {
    std::vector<FailureLogEntry> out;
    read_jsonl(path, [&](const nlohmann::json& j, size_t) {
        out.push_back({j.value("run_id", ""), j.value("raw_digest", ""),
                       j.value("stage", ""), j.value("reason", "")});
    });
    return out;
}

} // namespace sqt
