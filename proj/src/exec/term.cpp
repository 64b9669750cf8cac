#include "sqt/exec/term.hpp"

#include <cctype>
#include <cstdlib>
#include <cstring>

#include "sqt/util/strings.hpp"

namespace sqt {

namespace {

constexpr const char* kXsd = "http://www.w3.org/2001/XMLSchema#";

bool is_xsd(const std::string& datatype, const char* local) {
    return datatype == std::string(kXsd) + local;
}

bool xsd_integer_family(const std::string& dt) {
    static const char* locals[] = {
        "integer", "int", "long", "short", "byte",
        "nonNegativeInteger", "nonPositiveInteger", "negativeInteger",
        "positiveInteger", "unsignedLong", "unsignedInt", "unsignedShort",
        "unsignedByte"};
    for (const char* l : locals)
        if (is_xsd(dt, l)) return true;
    return false;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// "007" -> "7", "+5" -> "5", "-0" -> "0"; nullopt when not an integer lexical.
std::optional<std::string> canonical_integer(const std::string& raw) {
    std::string s = trim(raw);
    bool negative = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = s[i] == '-';
        ++i;
    }
    if (!all_digits(std::string_view(s).substr(i))) return std::nullopt;
    size_t first = s.find_first_not_of('0', i);
    if (first == std::string::npos) return "0";
    std::string digits = s.substr(first);
    return negative ? "-" + digits : digits;
}

// "2.50" -> "2.5", ".5" -> "0.5", "2.0" -> "2".
std::optional<std::string> canonical_decimal(const std::string& raw) {
    std::string s = trim(raw);
    bool negative = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = s[i] == '-';
        ++i;
    }
    std::string int_part, frac_part;
    size_t dot = s.find('.', i);
    if (dot == std::string::npos) {
        int_part = s.substr(i);
    } else {
        int_part = s.substr(i, dot - i);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) return std::nullopt;
    if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
    if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;

    size_t first = int_part.find_first_not_of('0');
    int_part = first == std::string::npos ? "0" : int_part.substr(first);
    size_t last = frac_part.find_last_not_of('0');
    frac_part = last == std::string::npos ? "" : frac_part.substr(0, last + 1);

    std::string out = int_part;
    if (!frac_part.empty()) out += "." + frac_part;
    if (negative && out != "0") out = "-" + out;
    return out;
}

std::optional<std::string> canonical_double(const std::string& raw) {
    std::string s = trim(raw);
    if (s == "NaN" || s == "INF" || s == "-INF") return s;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') return std::nullopt;
    return format_double(v);
}

// Zero-pads date components; normalizes +00:00 to Z; trims trailing zeros
// in second fractions. Returns nullopt when the shape is unrecognized.
std::optional<std::string> canonical_datetime(const std::string& raw, bool has_time) {
    std::string s = trim(raw);
    bool negative_year = false;
    size_t i = 0;
    if (i < s.size() && s[i] == '-') {
        negative_year = true;
        ++i;
    }
    auto read_digits = [&](size_t min_count) -> std::optional<std::string> {
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i - start < min_count && i - start == 0) return std::nullopt;
        return s.substr(start, i - start);
    };
    auto expect = [&](char c) {
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    };
    auto pad = [](const std::string& d, size_t width) {
        return d.size() >= width ? d : std::string(width - d.size(), '0') + d;
    };

    auto year = read_digits(1);
    if (!year) return std::nullopt;
    std::string out = (negative_year ? "-" : "") + pad(*year, 4);

    if (expect('-')) {
        auto month = read_digits(1);
        if (!month) return std::nullopt;
        out += "-" + pad(*month, 2);
        if (expect('-')) {
            auto day = read_digits(1);
            if (!day) return std::nullopt;
            out += "-" + pad(*day, 2);
        }
    }

    if (has_time) {
        if (!expect('T')) return std::nullopt;
        auto hour = read_digits(1);
        if (!hour || !expect(':')) return std::nullopt;
        auto minute = read_digits(1);
        if (!minute) return std::nullopt;
        out += "T" + pad(*hour, 2) + ":" + pad(*minute, 2);
        if (expect(':')) {
            auto sec = read_digits(1);
            if (!sec) return std::nullopt;
            out += ":" + pad(*sec, 2);
            if (expect('.')) {
                auto frac = read_digits(1);
                if (!frac) return std::nullopt;
                size_t last = frac->find_last_not_of('0');
                if (last != std::string::npos) out += "." + frac->substr(0, last + 1);
            }
        } else {
            out += ":00";
        }
    }

    std::string tz = s.substr(i);
    if (tz == "+00:00" || tz == "-00:00" || tz == "Z") {
        out += "Z";
    } else if (!tz.empty()) {
        if ((tz[0] != '+' && tz[0] != '-') || tz.size() != 6) return std::nullopt;
        out += tz;
    }
    return out;
}

} // namespace

RdfTerm normalize_term(const RdfTerm& t) {
    if (t.kind != RdfTerm::Kind::Literal) return t;

    RdfTerm out = t;
    if (out.lang) out.lang = to_lower(*out.lang);

    if (!out.datatype) return out;
    const std::string& dt = *out.datatype;

    if (is_xsd(dt, "string")) {
        out.datatype.reset();  // plain-literal equivalence
        return out;
    }
    std::optional<std::string> canon;
    if (xsd_integer_family(dt)) {
        canon = canonical_integer(out.value);
    } else if (is_xsd(dt, "decimal")) {
        canon = canonical_decimal(out.value);
    } else if (is_xsd(dt, "double") || is_xsd(dt, "float")) {
        canon = canonical_double(out.value);
    } else if (is_xsd(dt, "date") || is_xsd(dt, "gYear") || is_xsd(dt, "gYearMonth")) {
        canon = canonical_datetime(out.value, /*has_time=*/false);
    } else if (is_xsd(dt, "dateTime")) {
        canon = canonical_datetime(out.value, /*has_time=*/true);
    }
    if (canon) out.value = *canon;
    return out;
}

} // namespace sqt
