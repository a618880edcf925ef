#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace classeq {

// Structured run report. Every numeric cell carries the formula that produced
// it, and the human-readable rendering is generated from the same JSON tree,
// so table and machine output can never disagree (tables round at render time
// only, to four significant digits).
class RunReport {
public:
    enum class CheckStatus { Pass, Fail, Flagged };

    explicit RunReport(std::string command);

    void set_inputs(nlohmann::json inputs);
    void add_warning(std::string message);

    void add_value(const std::string& section, const std::string& label, double value,
                   const std::string& formula);
    void add_text(const std::string& section, const std::string& label, std::string text);

    /// Computed-versus-reference cell. Flagged cells record a known
    /// inconsistency in the reference value and never fail the run.
    void add_check(const std::string& section, const std::string& label, double computed,
                   const std::string& formula, double reference, double tolerance,
                   bool flagged = false, const std::string& note = "");

    /// Table whose cells are {"v": number, "formula": string} objects (or
    /// plain strings).
    void add_table(const std::string& section, std::vector<std::string> columns,
                   std::vector<std::vector<nlohmann::json>> rows);

    static nlohmann::json cell(double value, const std::string& formula);

    bool any_failed_check() const { return failed_checks_ > 0; }
    int failed_checks() const { return failed_checks_; }

    const nlohmann::json& json() const { return doc_; }
    std::string render_text() const;

private:
    nlohmann::json& section(const std::string& title);
    nlohmann::json doc_;
    int failed_checks_ = 0;
};

/// Render a double the way tables do (4 significant digits).
std::string format_table_number(double v);

}  // namespace classeq
