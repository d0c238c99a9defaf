#include "report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace consensus::cli {

namespace {

std::string format_human_number(const Json& v) {
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", v.get<double>());
        return buf;
    }
    return v.dump();
}

std::string format_scalar(const Json& v, bool human) {
    if (v.is_null()) return human ? "n/a" : "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return human ? format_human_number(v) : v.dump();
    return v.dump();
}

void render_human_tree(const Json& node, int depth, std::ostream& out) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    for (const auto& [key, value] : node.items()) {
        if (value.is_object()) {
            out << indent << key << ":\n";
            render_human_tree(value, depth + 1, out);
        } else if (value.is_array()) {
            out << indent << key << ": [";
            bool first = true;
            for (const auto& item : value) {
                out << (first ? "" : ", ") << format_scalar(item, true);
                first = false;
            }
            out << "]\n";
        } else {
            out << indent << key << ": " << format_scalar(value, true) << "\n";
        }
    }
}

bool is_grid(const Json& result) {
    return result.is_object() && result.contains("rows") && result.contains("columns") &&
           result.contains("computed") && result.contains("published");
}

void render_human_grid(const Json& r, std::ostream& out) {
    out << r.value("title", std::string{}) << "\n\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-8s", r.value("row_label", std::string{}).c_str());
    out << buf;
    for (const auto& c : r["columns"]) {
        std::snprintf(buf, sizeof buf, "  %s=%.2f", r.value("column_label", std::string{}).c_str(),
                      c.get<double>());
        out << buf;
    }
    out << "\n";
    const auto& rows = r["rows"];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%-8g", rows[i].get<double>());
        out << buf;
        for (const auto& v : r["computed"][i]) {
            std::snprintf(buf, sizeof buf, "  %6.3f", v.get<double>());
            out << buf;
        }
        out << "\n";
    }
    out << "\nmax |rounded - published| = " << format_human_number(r["max_abs_diff_rounded"])
        << "\nmax |raw - published|     = ";
    std::snprintf(buf, sizeof buf, "%.6f", r["max_abs_diff_raw"].get<double>());
    out << buf << "\n";
}

void flatten_csv(const Json& node, const std::string& prefix, std::ostream& out) {
    for (const auto& [key, value] : node.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten_csv(value, path, out);
        } else if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                out << path << "[" << i << "]," << format_scalar(value[i], false) << "\n";
            }
        } else {
            out << path << "," << format_scalar(value, false) << "\n";
        }
    }
}

void render_csv_grid(const Json& r, std::ostream& out) {
    out << r["row_label"].get<std::string>() << "," << r["column_label"].get<std::string>()
        << ",computed,published,rounded_diff\n";
    const auto& rows = r["rows"];
    const auto& cols = r["columns"];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out << rows[i].dump() << "," << cols[j].dump() << "," << r["computed"][i][j].dump() << ","
                << r["published"][i][j].dump() << "," << r["diff"][i][j].dump() << "\n";
        }
    }
}

}  // namespace

Json to_json(const Report& report) {
    Json provenance = Json::object();
    provenance["tool"] = kToolName;
    provenance["version"] = report.tool_version;
    if (report.seed) provenance["seed"] = *report.seed;

    Json doc = Json::object();
    doc["schema"] = kReportSchema;
    doc["command"] = report.command;
    doc["inputs"] = report.inputs;
    doc["result"] = report.result;
    doc["provenance"] = std::move(provenance);
    return doc;
}

Report report_from_json(const Json& doc) {
    if (!doc.is_object() || doc.value("schema", std::string{}) != kReportSchema) {
        throw std::invalid_argument("not a consensus.report/v1 document");
    }
    for (const char* key : {"command", "inputs", "result", "provenance"}) {
        if (!doc.contains(key)) throw std::invalid_argument(std::string("report is missing '") + key + "'");
    }
    Report r;
    r.command = doc.at("command").get<std::string>();
    r.inputs = doc.at("inputs");
    r.result = doc.at("result");
    const auto& prov = doc.at("provenance");
    r.tool_version = prov.at("version").get<std::string>();
    if (prov.contains("seed")) r.seed = prov.at("seed").get<std::uint64_t>();
    return r;
}

std::string render(const Report& report, OutputFormat format) {
    std::ostringstream out;
    switch (format) {
        case OutputFormat::Json:
            out << to_json(report).dump(2) << "\n";
            break;
        case OutputFormat::Csv:
            if (is_grid(report.result)) {
                render_csv_grid(report.result, out);
            } else {
                out << "key,value\n";
                out << "command," << report.command << "\n";
                flatten_csv(report.inputs, "inputs", out);
                flatten_csv(report.result, "result", out);
                if (report.seed) out << "provenance.seed," << *report.seed << "\n";
            }
            break;
        case OutputFormat::Human:
            out << kToolName << " " << report.command << " (v" << report.tool_version << ")\n";
            if (!report.inputs.empty()) {
                out << "inputs:\n";
                render_human_tree(report.inputs, 1, out);
            }
            if (report.seed) out << "seed: " << *report.seed << "\n";
            out << "\n";
            if (is_grid(report.result)) {
                render_human_grid(report.result, out);
            } else {
                render_human_tree(report.result, 0, out);
            }
            break;
    }
    return out.str();
}

}  // namespace consensus::cli
