#ifndef SQT_ERRORS_TAXONOMY_HPP
#define SQT_ERRORS_TAXONOMY_HPP

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqt/align/er2.hpp"
#include "sqt/kg/profile.hpp"
#include "sqt/sparql/query_doc.hpp"

namespace sqt {

enum class ErrorLabel {
    UnadaptedDatasetPatterns,
    QueryBadFormed,
    PropertyAsEntity,      // property/ontology term where a resource belongs
    EntityAsProperty,      // resource/entity term where a property belongs
    MissingTypeAssertion,  // Missing P31 / Missing rdf:type
    WrongOrMissingProperty,
    WrongOrMissingEntity,
    StructuralError,
};

constexpr std::array<ErrorLabel, 8> kAllErrorLabels = {
    ErrorLabel::UnadaptedDatasetPatterns, ErrorLabel::QueryBadFormed,
    ErrorLabel::PropertyAsEntity,         ErrorLabel::EntityAsProperty,
    ErrorLabel::MissingTypeAssertion,     ErrorLabel::WrongOrMissingProperty,
    ErrorLabel::WrongOrMissingEntity,     ErrorLabel::StructuralError};

std::string to_string(ErrorLabel l);
std::optional<ErrorLabel> error_label_from(const std::string& s);

/// Direction-aware display name, e.g. MissingTypeAssertion shows as
/// "Missing P31" toward Wikidata and "Missing rdf:type" toward DBpedia.
std::string display_label(ErrorLabel l, const KgProfile& target);

/// Row order used by the error-distribution report.
const std::array<ErrorLabel, 8>& report_row_order();

enum class AnnotationSource { Heuristic, Manual, Merged };

std::string to_string(AnnotationSource s);
AnnotationSource annotation_source_from(const std::string& s);

struct Annotation {
    std::string run_id;
    std::set<ErrorLabel> labels;  // never empty for an incorrect run
    AnnotationSource source = AnnotationSource::Heuristic;
    std::string notes;
    std::string annotator;
    std::string timestamp;
};

struct IdMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything the heuristics look at for one incorrect run. candidate_doc is
/// null when the candidate failed to parse or validate; candidate_text is
/// the best-effort text either way.
struct PrescreenInput {
    const QueryDoc* gold_source_doc = nullptr;  // gold query on the source KG
    const QueryDoc* gold_target_doc = nullptr;  // gold query on the target KG
    const QueryDoc* candidate_doc = nullptr;
    std::string candidate_text;
    const Er2Doc* er2 = nullptr;
    bool execution_error = false;   // endpoint rejected or timed out
    bool candidate_empty = false;   // executed but returned nothing
    bool comparison_equal = false;  // false for every run reaching prescreen
};

/// Applies the eight per-category heuristics; multi-label, deterministic,
/// never empty (StructuralError is the guaranteed fallback).
std::set<ErrorLabel> prescreen(const PrescreenInput& input,
                               const TranslationDirection& direction);

/// Manual labels replace heuristic ones when present (source becomes Merged,
/// the heuristic set is preserved in notes); otherwise the heuristic
/// annotation passes through. Throws IdMismatch when run ids differ.
Annotation merge_annotations(const Annotation& heuristic,
                             const std::optional<Annotation>& manual);

struct CooccurrenceMatrix {
    // counts[a][b] = annotations carrying both a and b; diagonal = totals
    std::array<std::array<size_t, 8>, 8> counts{};

    size_t count(ErrorLabel a, ErrorLabel b) const {
        return counts[size_t(a)][size_t(b)];
    }
    /// Row-conditional percentage P(b | a) in [0,100]; 0 when a never occurs.
    double percentage(ErrorLabel a, ErrorLabel b) const;
};

CooccurrenceMatrix cooccurrence_matrix(const std::vector<Annotation>& annotations);

/// Line-oriented sidecar: one JSON record per annotation.
void save_annotations(const std::string& path, const std::vector<Annotation>& annotations);
std::vector<Annotation> load_annotations(const std::string& path);

} // namespace sqt

#endif
