#include "sqt/report/emit.hpp"

#include <cstdio>
#include <filesystem>

#include "sqt/util/jsonl.hpp"

namespace sqt {

namespace {

std::string fixed(double v, int digits = 1) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

} // namespace

std::optional<OutputFormat> output_format_from(const std::string& s) {
    if (s == "text") return OutputFormat::Text;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "svg") return OutputFormat::Svg;
    return std::nullopt;
}

std::string emit_accuracy_text(const AccuracyTable& table) {
    std::string out;
    out += "Correctly translated queries by model and strategy\n";
    out += "===================================================\n";
    std::string current_direction;
    for (const auto& row : table.rows) {
        if (row.direction != current_direction) {
            current_direction = row.direction;
            out += "\n" + current_direction + " (N=" + std::to_string(row.n()) + " per row)\n";
        }
        char line[256];
        std::snprintf(line, sizeof(line), "  %-28s %-12s correct %3zu  incorrect %3zu (of which failed %zu)  accuracy %s%%\n",
                      row.model.c_str(), row.strategy.c_str(), row.correct,
                      row.incorrect, row.failed, fixed(100.0 * row.accuracy()).c_str());
        out += line;
    }
    out += "\nnote: full-scale reference result for this task shape: " +
           std::string(kReferenceBestResult.model) + " " +
           kReferenceBestResult.strategy + " " + kReferenceBestResult.direction + " " +
           std::to_string(kReferenceBestResult.correct) + "/" +
           std::to_string(kReferenceBestResult.n) + "\n";
    return out;
}

std::string emit_accuracy_csv(const AccuracyTable& table) {
    std::string out = "direction,model,strategy,correct,incorrect,failed,n,accuracy\n";
    for (const auto& row : table.rows) {
        out += csv_escape(row.direction) + "," + csv_escape(row.model) + "," +
               csv_escape(row.strategy) + "," + std::to_string(row.correct) + "," +
               std::to_string(row.incorrect) + "," + std::to_string(row.failed) + "," +
               std::to_string(row.n()) + "," + fixed(row.accuracy(), 4) + "\n";
    }
    return out;
}

std::string emit_accuracy_svg(const AccuracyTable& table, const std::string& direction) {
    std::vector<const AccuracyRow*> rows;
    std::vector<std::string> models;
    std::vector<std::string> strategies;
    size_t max_n = 1;
    for (const auto& row : table.rows) {
        if (row.direction != direction) continue;
        rows.push_back(&row);
        if (std::find(models.begin(), models.end(), row.model) == models.end())
            models.push_back(row.model);
        if (std::find(strategies.begin(), strategies.end(), row.strategy) ==
            strategies.end())
            strategies.push_back(row.strategy);
        max_n = std::max(max_n, row.n());
    }

    const double width = 840.0, height = 420.0;
    const double margin_left = 60.0, margin_bottom = 70.0, margin_top = 40.0;
    const double plot_w = width - margin_left - 20.0;
    const double plot_h = height - margin_top - margin_bottom;

    static const char* palette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                    "#8172b3"};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) +
           "\" height=\"" + fixed(height, 0) + "\">\n";
    svg += "<text x=\"" + fixed(width / 2) + "\" y=\"20\" text-anchor=\"middle\" "
           "font-size=\"16\">Correctly Translated Queries: Model &amp; Strategy (" +
           direction + ")</text>\n";
    svg += "<line x1=\"" + fixed(margin_left) + "\" y1=\"" + fixed(margin_top) +
           "\" x2=\"" + fixed(margin_left) + "\" y2=\"" + fixed(margin_top + plot_h) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fixed(margin_left) + "\" y1=\"" + fixed(margin_top + plot_h) +
           "\" x2=\"" + fixed(margin_left + plot_w) + "\" y2=\"" +
           fixed(margin_top + plot_h) + "\" stroke=\"black\"/>\n";

    if (!models.empty()) {
        double group_w = plot_w / double(models.size());
        double bar_w = group_w * 0.8 / double(std::max<size_t>(1, strategies.size()));
        for (size_t m = 0; m < models.size(); ++m) {
            for (size_t s = 0; s < strategies.size(); ++s) {
                const AccuracyRow* row = nullptr;
                for (const auto* r : rows)
                    if (r->model == models[m] && r->strategy == strategies[s]) row = r;
                if (!row) continue;
                double h = plot_h * double(row->correct) / double(max_n);
                double x = margin_left + group_w * double(m) + group_w * 0.1 +
                           bar_w * double(s);
                double y = margin_top + plot_h - h;
                svg += "<rect class=\"bar\" data-model=\"" + models[m] +
                       "\" data-strategy=\"" + strategies[s] + "\" data-correct=\"" +
                       std::to_string(row->correct) + "\" x=\"" + fixed(x) + "\" y=\"" +
                       fixed(y) + "\" width=\"" + fixed(bar_w) + "\" height=\"" +
                       fixed(h) + "\" fill=\"" + palette[s % 5] + "\"/>\n";
                svg += "<text x=\"" + fixed(x + bar_w / 2) + "\" y=\"" + fixed(y - 4) +
                       "\" text-anchor=\"middle\" font-size=\"11\">" +
                       std::to_string(row->correct) + "</text>\n";
            }
            svg += "<text x=\"" +
                   fixed(margin_left + group_w * (double(m) + 0.5)) + "\" y=\"" +
                   fixed(margin_top + plot_h + 16) +
                   "\" text-anchor=\"middle\" font-size=\"12\">" + models[m] +
                   "</text>\n";
        }
        // legend
        double lx = margin_left, ly = margin_top + plot_h + 36;
        for (size_t s = 0; s < strategies.size(); ++s) {
            svg += "<rect x=\"" + fixed(lx) + "\" y=\"" + fixed(ly - 10) +
                   "\" width=\"12\" height=\"12\" fill=\"" + palette[s % 5] + "\"/>\n";
            svg += "<text x=\"" + fixed(lx + 16) + "\" y=\"" + fixed(ly) +
                   "\" font-size=\"12\">" + strategies[s] + "</text>\n";
            lx += 150.0;
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string emit_error_text(const ErrorReportTables& report) {
    std::string out;
    out += "Distribution of error types per target direction\n";
    out += "=================================================\n";
    char line[256];
    std::snprintf(line, sizeof(line), "  %-36s", "Error Category");
    out += line;
    for (const auto& d : report.directions) {
        std::snprintf(line, sizeof(line), " %20s", d.c_str());
        out += line;
    }
    out += "\n";
    for (const auto& row : report.distribution) {
        std::snprintf(line, sizeof(line), "  %-36s", to_string(row.label).c_str());
        out += line;
        for (const auto& d : report.directions) {
            std::snprintf(line, sizeof(line), " %20zu", row.count_by_direction.at(d));
            out += line;
        }
        out += "\n";
    }
    std::snprintf(line, sizeof(line), "  %-36s", "Total Error Instances");
    out += line;
    for (const auto& d : report.directions) {
        std::snprintf(line, sizeof(line), " %20zu", report.total_by_direction.at(d));
        out += line;
    }
    out += "\n\nMean distinct labels per question category\n";
    for (const auto& [direction, stats] : report.category_stats) {
        out += "  " + direction + "\n";
        for (const auto& [category, stat] : stats) {
            std::snprintf(line, sizeof(line), "    %-28s %s (over %zu runs)\n",
                          category.c_str(), fixed(stat.mean(), 2).c_str(), stat.runs);
            out += line;
        }
    }
    return out;
}

std::string emit_error_csv(const ErrorReportTables& report) {
    std::string out = "label";
    for (const auto& d : report.directions) out += "," + csv_escape(d);
    out += "\n";
    for (const auto& row : report.distribution) {
        out += to_string(row.label);
        for (const auto& d : report.directions)
            out += "," + std::to_string(row.count_by_direction.at(d));
        out += "\n";
    }
    out += "total";
    for (const auto& d : report.directions)
        out += "," + std::to_string(report.total_by_direction.at(d));
    out += "\n";
    return out;
}

std::string emit_cooccurrence_csv(const ErrorReportTables& report) {
    std::string out = "direction,label_a,label_b,count,conditional_pct\n";
    for (const auto& d : report.directions) {
        const auto& m = report.cooccurrence_by_direction.at(d);
        for (ErrorLabel a : kAllErrorLabels) {
            for (ErrorLabel b : kAllErrorLabels) {
                out += csv_escape(d) + "," + to_string(a) + "," + to_string(b) + "," +
                       std::to_string(m.count(a, b)) + "," +
                       fixed(m.percentage(a, b), 1) + "\n";
            }
        }
    }
    return out;
}

std::string emit_category_csv(const ErrorReportTables& report) {
    std::string out = "direction,category,annotated_runs,mean_distinct_labels\n";
    for (const auto& [direction, stats] : report.category_stats) {
        for (const auto& [category, stat] : stats) {
            out += csv_escape(direction) + "," + csv_escape(category) + "," +
                   std::to_string(stat.runs) + "," + fixed(stat.mean(), 3) + "\n";
        }
    }
    return out;
}

std::vector<std::string> emit_outputs(const AccuracyTable& accuracy,
                                      const ErrorReportTables& errors,
                                      const std::set<OutputFormat>& formats,
                                      const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        std::string path = out_dir + "/" + name;
        write_file(path, content);
        written.push_back(path);
    };

    if (formats.count(OutputFormat::Text)) {
        emit("accuracy.txt", emit_accuracy_text(accuracy));
        emit("errors.txt", emit_error_text(errors));
    }
    if (formats.count(OutputFormat::Csv)) {
        emit("accuracy.csv", emit_accuracy_csv(accuracy));
        emit("errors.csv", emit_error_csv(errors));
        emit("cooccurrence.csv", emit_cooccurrence_csv(errors));
        emit("categories.csv", emit_category_csv(errors));
    }
    if (formats.count(OutputFormat::Svg)) {
        std::set<std::string> directions;
        for (const auto& row : accuracy.rows) directions.insert(row.direction);
        for (const auto& d : directions) {
            std::string safe = d;
            for (auto& c : safe)
                if (c == '>' || c == '<' || c == '-' || c == ' ') c = '_';
            emit("accuracy_" + safe + ".svg", emit_accuracy_svg(accuracy, d));
        }
    }
    return written;
}

} // namespace sqt
