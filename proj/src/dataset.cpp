#include "qmse/dataset.hpp"
#include "qmse/error.hpp"
#include "qmse/molgraph.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qmse {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

// Validates everything but the SMILES text itself; returns an error
// message or an empty string.
std::string finish_record(DatasetRecord& rec) {
    if (rec.smiles.empty()) return "empty smiles";
    if (rec.name.empty()) return "empty name";
    if (!rec.label && !rec.target) return "missing both label and target";
    try {
        parse_smiles(rec.smiles);
    } catch (const Error& e) {
        return e.kind() + ": " + e.what();
    }
    return "";
}

[[noreturn]] void report(const std::vector<std::string>& errs) {
    std::ostringstream os;
    os << errs.size() << (errs.size() == 1 ? " bad row:" : " bad rows:");
    for (const auto& e : errs) os << "\n  " << e;
    fail("dataset-errors", os.str());
}

} // namespace

DatasetFormat format_from_path(const std::string& path) {
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        return DatasetFormat::JSON;
    return DatasetFormat::CSV;
}

std::vector<DatasetRecord> parse_dataset_csv(const std::string& text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) fail("dataset-format", "empty dataset, header row expected");
    if (lines[0] != "smiles,name,label,target")
        fail("dataset-format",
             "CSV header must be exactly \"smiles,name,label,target\", got \"" + lines[0] +
                 "\"");

    std::vector<DatasetRecord> records;
    std::vector<std::string> errs;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::string where = "line " + std::to_string(i + 1) + ": ";
        std::vector<std::string> f = split_fields(lines[i]);
        if (f.size() != 4) {
            errs.push_back(where + "expected 4 fields, got " + std::to_string(f.size()));
            continue;
        }
        DatasetRecord rec;
        rec.smiles = f[0];
        rec.name = f[1];
        bool field_ok = true;
        if (!f[2].empty()) {
            if (f[2] == "0" || f[2] == "1") {
                rec.label = f[2][0] - '0';
            } else {
                errs.push_back(where + "label must be 0 or 1, got \"" + f[2] + "\"");
                field_ok = false;
            }
        }
        if (!f[3].empty()) {
            char* end = nullptr;
            double v = std::strtod(f[3].c_str(), &end);
            if (end == f[3].c_str() + f[3].size() && std::isfinite(v)) {
                rec.target = v;
            } else {
                errs.push_back(where + "target must be a finite number, got \"" + f[3] +
                               "\"");
                field_ok = false;
            }
        }
        if (!field_ok) continue;
        std::string msg = finish_record(rec);
        if (!msg.empty()) {
            errs.push_back(where + msg);
            continue;
        }
        records.push_back(std::move(rec));
    }
    if (!errs.empty()) report(errs);
    if (records.empty()) fail("dataset-empty", "dataset has no data rows");
    return records;
}

std::vector<DatasetRecord> parse_dataset_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail("dataset-format", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) fail("dataset-format", "JSON dataset must be an array of objects");

    std::vector<DatasetRecord> records;
    std::vector<std::string> errs;
    for (size_t i = 0; i < doc.size(); ++i) {
        const std::string where = "record " + std::to_string(i + 1) + ": ";
        const auto& e = doc[i];
        if (!e.is_object()) {
            errs.push_back(where + "not an object");
            continue;
        }
        bool field_ok = true;
        for (const auto& [key, val] : e.items()) {
            if (key != "smiles" && key != "name" && key != "label" && key != "target") {
                errs.push_back(where + "unknown key \"" + key + "\"");
                field_ok = false;
            }
        }
        if (!e.contains("smiles") || !e["smiles"].is_string() || !e.contains("name") ||
            !e["name"].is_string()) {
            errs.push_back(where + "smiles and name must be present as strings");
            continue;
        }
        DatasetRecord rec;
        rec.smiles = e["smiles"].get<std::string>();
        rec.name = e["name"].get<std::string>();
        if (e.contains("label") && !e["label"].is_null()) {
            if (e["label"].is_number_integer() &&
                (e["label"] == 0 || e["label"] == 1)) {
                rec.label = e["label"].get<int>();
            } else {
                errs.push_back(where + "label must be 0 or 1");
                field_ok = false;
            }
        }
        if (e.contains("target") && !e["target"].is_null()) {
            if (e["target"].is_number() &&
                std::isfinite(e["target"].get<double>())) {
                rec.target = e["target"].get<double>();
            } else {
                errs.push_back(where + "target must be a finite number");
                field_ok = false;
            }
        }
        if (!field_ok) continue;
        std::string msg = finish_record(rec);
        if (!msg.empty()) {
            errs.push_back(where + msg);
            continue;
        }
        records.push_back(std::move(rec));
    }
    if (!errs.empty()) report(errs);
    if (records.empty()) fail("dataset-empty", "dataset has no records");
    return records;
}

std::vector<DatasetRecord> ingest(const std::string& path, DatasetFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file-missing", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return format == DatasetFormat::CSV ? parse_dataset_csv(buf.str())
                                        : parse_dataset_json(buf.str());
}

std::vector<DatasetRecord> ingest(const std::string& path) {
    return ingest(path, format_from_path(path));
}

const std::vector<DatasetRecord>& fatty_acid_table() {
    // FA1..FA7, carboxylic head written first. Labels split the set by
    // degree of unsaturation (1 = four or more C=C bonds).
    static const std::vector<DatasetRecord> table = {
        {"OC(=O)CCCCCCCCCCCCCCCCC/C=C\\C/C=C\\C/C=C\\C/C=C\\CCCCC", "FA1", 1, {}},
        {"OC(=O)CCCCCCCCCCCCCCCCC/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\CC", "FA2", 1, {}},
        {"OC(=O)CCCCCCCCCCCCCC/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\CC", "FA3", 1, {}},
        {"OC(=O)CCCCCCCCCCCCCC/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\CCCCC", "FA4", 1, {}},
        {"OC(=O)CCCCCCCCCCCCCCCCCCCCCCC/C=C\\CCCCCCCC", "FA5", 0, {}},
        {"OC(=O)CCCCCCCCCCCCCCCCCCCCCCC/C=C\\C/C=C\\C/C=C\\CC", "FA6", 0, {}},
        {"OC(=O)CC/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\C/C=C\\CC",
         "FA7", 1, {}},
    };
    return table;
}

} // namespace qmse
