#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qmse {

// One dataset row. Classification rows carry `label`, regression rows
// carry `target` (e.g. a boiling point in Kelvin); a row may carry both
// but never neither.
struct DatasetRecord {
    std::string smiles;
    std::string name;
    std::optional<int> label;    // 0 or 1
    std::optional<double> target;
};

enum class DatasetFormat { CSV, JSON };

// Picks CSV unless the path ends in .json.
DatasetFormat format_from_path(const std::string& path);

// Parse dataset text. CSV needs the exact header `smiles,name,label,target`;
// JSON is an array of {smiles, name, label?, target?} objects. Every row is
// validated eagerly (SMILES parsed, label/target checked); all row errors
// are collected and reported together, and nothing loads if any row fails.
std::vector<DatasetRecord> parse_dataset_csv(const std::string& text);
std::vector<DatasetRecord> parse_dataset_json(const std::string& text);

std::vector<DatasetRecord> ingest(const std::string& path, DatasetFormat format);
std::vector<DatasetRecord> ingest(const std::string& path); // format from extension

// Built-in fixture: the seven fatty acids FA1..FA7 (36 heavy atoms each,
// carboxylic head first). Labels mark the polyunsaturated ones.
const std::vector<DatasetRecord>& fatty_acid_table();

} // namespace qmse
