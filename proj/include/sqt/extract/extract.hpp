#ifndef SQT_EXTRACT_EXTRACT_HPP
#define SQT_EXTRACT_EXTRACT_HPP

#include <optional>
#include <string>
#include <vector>

namespace sqt {

enum class ExtractionMethod { SparqlTag, CodeFence, KeywordScan };

std::string to_string(ExtractionMethod m);
std::optional<ExtractionMethod> extraction_method_from(const std::string& s);

/// What fell out of one raw LLM output.
struct ExtractionResult {
    enum class Status { Extracted, Failed };

    Status status = Status::Failed;
    std::optional<std::string> query_text;       // present iff extracted
    std::optional<ExtractionMethod> method;      // present iff extracted
    std::optional<std::string> failure_reason;   // present iff failed
    bool tag_unclosed = false;  // <sparql> was never closed; content ran to EOF

    bool extracted() const { return status == Status::Extracted; }
};

/// Isolates a candidate query: instructed <sparql> tags first (last complete
/// pair wins; an unclosed tag takes the remainder of the output), then the
/// last fenced code block containing a query-form keyword, then the segment
/// starting at the first query-form or PREFIX keyword. Failures are data,
/// never exceptions.
ExtractionResult extract_candidate(const std::string& raw);

/// Removes residual <think>/<sparql> fragments, code-fence ticks and SPARQL
/// comments, then collapses whitespace runs outside string literals to a
/// single space and trims. Idempotent; string-literal contents untouched.
std::string sanitize(const std::string& query_text);

/// nullopt when the candidate is executable enough to try: a query form is
/// present, SELECT has a WHERE group and a projection, and the light syntax
/// check passes. Otherwise the failure reason.
std::optional<std::string> validate_candidate(const std::string& query_text);

struct FailureLogEntry {
    std::string run_id;
    std::string raw_digest;
    std::string stage;   // extraction | validation
    std::string reason;
};

/// Append-only JSONL failure log.
class FailureLog {
public:
    explicit FailureLog(std::string path) : path_(std::move(path)) {}

    void append(const FailureLogEntry& entry) const;
    static std::vector<FailureLogEntry> load(const std::string& path);

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace sqt

#endif
