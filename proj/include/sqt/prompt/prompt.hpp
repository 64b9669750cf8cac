#ifndef SQT_PROMPT_PROMPT_HPP
#define SQT_PROMPT_PROMPT_HPP

#include <optional>
#include <string>
#include <vector>

#include "sqt/align/er2.hpp"
#include "sqt/exemplar/exemplar.hpp"

namespace sqt {

enum class Strategy { ZeroShot, ZeroShotER, FewShotER, CoT, CoTTags };

std::string to_string(Strategy s);
std::optional<Strategy> strategy_from(const std::string& s);
constexpr size_t kFewShotExemplars = 4;

/// The five-field prompt payload before rendering. instruction overrides the
/// strategy's default wording when non-empty; it must still carry the
/// <sparql> tag instruction.
struct PromptSpec {
    std::string nlq;
    std::string sparql_query_kg1;
    std::string kg1_name;
    std::string kg2_name;
    std::optional<Er2Doc> er2;
    std::vector<Exemplar> exemplars;
    Strategy strategy = Strategy::ZeroShot;
    std::string instruction;
};

struct SpecFinding {
    std::string code;
    std::string message;
};

/// Checks the strategy/field invariants: ZeroShot carries no er2, FewShotER
/// carries er2 and exactly four exemplars, CoT variants carry er2, KG names
/// differ, and any instruction override keeps the tag instruction.
std::vector<SpecFinding> validate_spec(const PromptSpec& spec);

struct RenderedPrompt {
    std::string text;
    Strategy strategy;
    std::string spec_digest;  // sha256 over the spec payload and rendered text
};

/// Per-strategy prompt templates with {{placeholder}} substitution. Override
/// files (zero_shot.txt, zero_shot_er.txt, few_shot_er.txt, cot.txt,
/// cot_tags.txt) replace the defaults individually.
struct TemplateSet {
    std::string zero_shot;
    std::string zero_shot_er;
    std::string few_shot_er;
    std::string cot;
    std::string cot_tags;

    static const TemplateSet& defaults();
    static TemplateSet from_directory(const std::string& dir);

    const std::string& for_strategy(Strategy s) const;
};

/// Byte-deterministic rendering of the spec into the exact prompt text.
/// Throws std::invalid_argument when validate_spec reports findings.
RenderedPrompt render_prompt(const PromptSpec& spec,
                             const TemplateSet& templates = TemplateSet::defaults());

} // namespace sqt

#endif
