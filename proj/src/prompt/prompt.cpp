#include "sqt/prompt/prompt.hpp"

#include <stdexcept>

#include <json.hpp>

#include "sqt/util/jsonl.hpp"
#include "sqt/util/sha256.hpp"

namespace sqt {

using nlohmann::json;

namespace {

const char* kTagInstruction =
    "Given the information above, produce a SPARQL query for KG2. In your "
    "answer please highlight the final, complete SPARQL query within the tags "
    "'<sparql>' and '</sparql>'.";

const char* kCotPreamble =
    "Before giving the final query, explain your reasoning step by step: how "
    "each part of the KG2 query is formed and how every entity and property is "
    "chosen from the source query and the er2 mapping. ";

const char* kCotTagsPreamble =
    "Work through five sub-tasks inside <think> and </think> tags before "
    "answering: (a) identify the key entities and relations in the natural "
    "language question and map them using er2; (b) analyze the structure of "
    "the source SPARQL query; (c) find the equivalent KG2 properties and "
    "entities using the mappings; (d) construct the KG2 SPARQL query, keeping "
    "its logical structure; (e) validate the constructed query against the "
    "KG2 data model. Then ";

// One layout shared by every strategy: the er2 block placeholder expands to
// a full line for ER strategies and to nothing for the bare zero-shot, so
// the two renderings differ by exactly one contiguous region.
const char* kBaseTemplate =
    "{\"natural_language_question\": {{natural_language_question}},\n"
    "\"sparql_query_kg1\": {{sparql_query_kg1}},\n"
    "\"kg1_name\": {{kg1_name}}, \"kg2_name\": {{kg2_name}},\n"
    "{{er2_block}}\"instruction\": {{instruction}}}{{exemplars}}";

std::string default_instruction(Strategy s) {
    switch (s) {
        case Strategy::ZeroShot:
        case Strategy::ZeroShotER:
            return kTagInstruction;
        case Strategy::FewShotER:
            return std::string(kTagInstruction) + " Here are 4 examples:";
        case Strategy::CoT:
            return std::string(kCotPreamble) + kTagInstruction;
        default:
            return std::string(kCotTagsPreamble) + kTagInstruction;
    }
}

void replace_all(std::string& text, const std::string& placeholder,
                 const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
}

std::string render_exemplar_block(const std::vector<Exemplar>& exemplars,
                                  const std::string& kg1, const std::string& kg2) {
    std::string out;
    size_t n = 0;
    for (const auto& e : exemplars) {
        ++n;
        out += "\n\nExample " + std::to_string(n) + ":\n";
        out += "{\"natural_language_question\": " + json(e.nlq).dump() + ",\n";
        out += "\"sparql_query_kg1\": " + json(e.query_kg1).dump() + ",\n";
        out += "\"kg1_name\": " + json(kg1).dump() + ", \"kg2_name\": " +
               json(kg2).dump() + ",\n";
        out += "\"er2\": " + render_er2(e.er2) + ",\n";
        out += "\"sparql_query_kg2\": " + json(e.query_kg2).dump() + "}";
    }
    return out;
}

} // namespace

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::ZeroShot: return "ZeroShot";
        case Strategy::ZeroShotER: return "ZeroShotER";
        case Strategy::FewShotER: return "FewShotER";
        case Strategy::CoT: return "CoT";
        default: return "CoTTags";
    }
}

std::optional<Strategy> strategy_from(const std::string& s) {
    if (s == "ZeroShot") return Strategy::ZeroShot;
    if (s == "ZeroShotER") return Strategy::ZeroShotER;
    if (s == "FewShotER") return Strategy::FewShotER;
    if (s == "CoT") return Strategy::CoT;
    if (s == "CoTTags") return Strategy::CoTTags;
    return std::nullopt;
}

std::vector<SpecFinding> validate_spec(const PromptSpec& spec) {
    std::vector<SpecFinding> findings;
    auto add = [&](const char* code, const std::string& msg) {
        findings.push_back({code, msg});
    };

    if (spec.nlq.empty()) add("empty_nlq", "natural language question is empty");
    if (spec.sparql_query_kg1.empty())
        add("empty_source_query", "source query is empty");
    if (spec.kg1_name == spec.kg2_name)
        add("kg_names_equal", "kg1_name and kg2_name must differ");

    bool er2_present = spec.er2.has_value();
    switch (spec.strategy) {
        case Strategy::ZeroShot:
            if (er2_present)
                add("er2_not_allowed", "ZeroShot carries no er2; use ZeroShotER");
            if (!spec.exemplars.empty())
                add("exemplars_not_allowed", "ZeroShot carries no exemplars");
            break;
        case Strategy::ZeroShotER:
        case Strategy::CoT:
        case Strategy::CoTTags:
            if (!er2_present) add("er2_required", to_string(spec.strategy) + " requires er2");
            if (!spec.exemplars.empty())
                add("exemplars_not_allowed",
                    to_string(spec.strategy) + " carries no exemplars");
            break;
        case Strategy::FewShotER:
            if (!er2_present) add("er2_required", "FewShotER requires er2");
            if (spec.exemplars.size() != kFewShotExemplars)
                add("exemplar_count", "FewShotER carries exactly " +
                                          std::to_string(kFewShotExemplars) +
                                          " exemplars, got " +
                                          std::to_string(spec.exemplars.size()));
            break;
    }

    if (!spec.instruction.empty() &&
        (spec.instruction.find("<sparql>") == std::string::npos ||
         spec.instruction.find("</sparql>") == std::string::npos))
        add("missing_tag_instruction",
            "instruction override must keep the <sparql> tag instruction");
    return findings;
}

const TemplateSet& TemplateSet::defaults() {
    static const TemplateSet set = [] {
        TemplateSet t;
        t.zero_shot = kBaseTemplate;
        t.zero_shot_er = kBaseTemplate;
        t.few_shot_er = kBaseTemplate;
        t.cot = kBaseTemplate;
        t.cot_tags = kBaseTemplate;
        return t;
    }();
    return set;
}

TemplateSet TemplateSet::from_directory(const std::string& dir) {
    TemplateSet t = defaults();
    auto maybe = [&](const char* file, std::string& slot) {
        std::string path = dir + "/" + file;
        if (file_exists(path)) slot = read_file(path);
    };
    maybe("zero_shot.txt", t.zero_shot);
    maybe("zero_shot_er.txt", t.zero_shot_er);
    maybe("few_shot_er.txt", t.few_shot_er);
    maybe("cot.txt", t.cot);
    maybe("cot_tags.txt", t.cot_tags);
    return t;
}

const std::string& TemplateSet::for_strategy(Strategy s) const {
    switch (s) {
        case Strategy::ZeroShot: return zero_shot;
        case Strategy::ZeroShotER: return zero_shot_er;
        case Strategy::FewShotER: return few_shot_er;
        case Strategy::CoT: return cot;
        default: return cot_tags;
    }
}

RenderedPrompt render_prompt(const PromptSpec& spec, const TemplateSet& templates) {
    auto findings = validate_spec(spec);
    if (!findings.empty()) {
        std::string msg = "invalid prompt spec:";
        for (const auto& f : findings) msg += " " + f.code;
        throw std::invalid_argument(msg);
    }

    std::string instruction =
        spec.instruction.empty() ? default_instruction(spec.strategy) : spec.instruction;

    std::string text = templates.for_strategy(spec.strategy);
    replace_all(text, "{{natural_language_question}}", json(spec.nlq).dump());
    replace_all(text, "{{sparql_query_kg1}}", json(spec.sparql_query_kg1).dump());
    replace_all(text, "{{kg1_name}}", json(spec.kg1_name).dump());
    replace_all(text, "{{kg2_name}}", json(spec.kg2_name).dump());
    replace_all(text, "{{er2_block}}",
                spec.er2 ? "\"er2\": " + render_er2(*spec.er2) + ",\n" : "");
    replace_all(text, "{{instruction}}", json(instruction).dump());
    replace_all(text, "{{exemplars}}",
                spec.strategy == Strategy::FewShotER
                    ? render_exemplar_block(spec.exemplars, spec.kg1_name, spec.kg2_name)
                    : "");

    RenderedPrompt out;
    out.text = std::move(text);
    out.strategy = spec.strategy;

    Sha256 digest;
    digest.update(to_string(spec.strategy));
    digest.update("\x1f");
    digest.update(spec.nlq);
    digest.update("\x1f");
    digest.update(spec.sparql_query_kg1);
    digest.update("\x1f");
    digest.update(spec.kg1_name);
    digest.update("\x1f");
    digest.update(spec.kg2_name);
    digest.update("\x1f");
    if (spec.er2) digest.update(render_er2(*spec.er2));
    digest.update("\x1f");
    for (const auto& e : spec.exemplars) {
        digest.update(e.id);
        digest.update("\x1e");
    }
    digest.update("\x1f");
    digest.update(instruction);
    digest.update("\x00", 1);
    digest.update(out.text);
    out.spec_digest = digest.hex_digest();
    return out;
}

} // namespace sqt
