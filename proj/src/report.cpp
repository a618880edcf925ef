#include "classeq/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace classeq {

RunReport::RunReport(std::string command) {
    doc_["command"] = std::move(command);
    doc_["inputs"] = nlohmann::json::object();
    doc_["sections"] = nlohmann::json::array();
    doc_["warnings"] = nlohmann::json::array();
}

void RunReport::set_inputs(nlohmann::json inputs) { doc_["inputs"] = std::move(inputs); }

void RunReport::add_warning(std::string message) {
    doc_["warnings"].push_back(std::move(message));
}

nlohmann::json& RunReport::section(const std::string& title) {
    for (auto& sec : doc_["sections"]) {
        if (sec["title"] == title) return sec;
    }
    doc_["sections"].push_back({{"title", title}, {"items", nlohmann::json::array()}});
    return doc_["sections"].back();
}

void RunReport::add_value(const std::string& sec, const std::string& label, double value,
                          const std::string& formula) {
    section(sec)["items"].push_back(
        {{"kind", "value"}, {"label", label}, {"v", value}, {"formula", formula}});
}

void RunReport::add_text(const std::string& sec, const std::string& label, std::string text) {
    section(sec)["items"].push_back(
        {{"kind", "text"}, {"label", label}, {"text", std::move(text)}});
}

void RunReport::add_check(const std::string& sec, const std::string& label, double computed,
                          const std::string& formula, double reference, double tolerance,
                          bool flagged, const std::string& note) {
    const bool within = std::abs(computed - reference) <= tolerance;
    CheckStatus status = CheckStatus::Pass;
    if (flagged) {
        status = CheckStatus::Flagged;
    } else if (!within) {
        status = CheckStatus::Fail;
        ++failed_checks_;
    }
    const char* name = status == CheckStatus::Pass   ? "pass"
                       : status == CheckStatus::Fail ? "fail"
                                                     : "flagged";
    section(sec)["items"].push_back({{"kind", "check"},
                                     {"label", label},
                                     {"v", computed},
                                     {"formula", formula},
                                     {"reference", reference},
                                     {"tolerance", tolerance},
                                     {"status", name},
                                     {"note", note}});
}

void RunReport::add_table(const std::string& sec, std::vector<std::string> columns,
                          std::vector<std::vector<nlohmann::json>> rows) {
    nlohmann::json jrows = nlohmann::json::array();
    for (auto& row : rows) jrows.push_back(row);
    section(sec)["items"].push_back({{"kind", "table"},
                                     {"columns", std::move(columns)},
                                     {"rows", std::move(jrows)}});
}

nlohmann::json RunReport::cell(double value, const std::string& formula) {
    return {{"v", value}, {"formula", formula}};
}

std::string format_table_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

namespace {

std::string cell_text(const nlohmann::json& cell) {
    if (cell.is_string()) return cell.get<std::string>();
    if (cell.is_object() && cell.contains("v")) {
        return format_table_number(cell["v"].get<double>());
    }
    if (cell.is_number()) return format_table_number(cell.get<double>());
    return cell.dump();
}

}  // namespace

std::string RunReport::render_text() const {
    std::ostringstream os;
    os << "== " << doc_["command"].get<std::string>() << " ==\n";
    if (!doc_["inputs"].empty()) os << "inputs: " << doc_["inputs"].dump() << "\n";
    for (const auto& sec : doc_["sections"]) {
        os << "\n-- " << sec["title"].get<std::string>() << " --\n";
        for (const auto& item : sec["items"]) {
            const std::string kind = item["kind"];
            if (kind == "value") {
                os << "  " << item["label"].get<std::string>() << " = "
                   << format_table_number(item["v"].get<double>()) << "   ["
                   << item["formula"].get<std::string>() << "]\n";
            } else if (kind == "text") {
                os << "  " << item["label"].get<std::string>() << ": "
                   << item["text"].get<std::string>() << "\n";
            } else if (kind == "check") {
                const std::string status = item["status"];
                os << "  [" << (status == "pass" ? "PASS" : status == "fail" ? "FAIL" : "FLAG")
                   << "] " << item["label"].get<std::string>() << ": computed "
                   << format_table_number(item["v"].get<double>()) << " vs reference "
                   << format_table_number(item["reference"].get<double>()) << " (tol "
                   << format_table_number(item["tolerance"].get<double>()) << ")   ["
                   << item["formula"].get<std::string>() << "]";
                const std::string note = item["note"];
                if (!note.empty()) os << "  -- " << note;
                os << "\n";
            } else if (kind == "table") {
                os << "  ";
                for (const auto& col : item["columns"]) os << col.get<std::string>() << "\t";
                os << "\n";
                for (const auto& row : item["rows"]) {
                    os << "  ";
                    for (const auto& cell : row) os << cell_text(cell) << "\t";
                    os << "\n";
                }
            }
        }
    }
    for (const auto& w : doc_["warnings"]) {
        os << "warning: " << w.get<std::string>() << "\n";
    }
    return os.str();
}

}  // namespace classeq
