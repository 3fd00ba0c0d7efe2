#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "wigi/entity.hpp"

namespace wigi::records {

/// Column layout of the records file.
inline const std::vector<std::string> kColumns = {
    "qid",           "gender",      "birth_year",   "birth_precision",
    "death_year",    "death_precision", "pob_qid",  "country_qid",
    "citizen_qids",  "ethnic_qids", "sitelinks",
};

inline const std::vector<std::string> kTitleColumns = {"qid", "wiki", "title"};

/// Writes rows sorted by numeric id. Throws InputError on duplicate ids.
std::size_t write_records(std::vector<HumanRecord> records, std::ostream& out);
std::size_t write_records(std::vector<HumanRecord> records, const std::string& path);

/// Throws RowError naming the offending row for missing columns, duplicate
/// ids and malformed fields.
std::vector<HumanRecord> read_records(std::istream& in, const std::string& name = "records");
std::vector<HumanRecord> read_records(const std::string& path);

std::size_t write_titles(std::vector<SitelinkTitle> titles, std::ostream& out);
std::size_t write_titles(std::vector<SitelinkTitle> titles, const std::string& path);
std::vector<SitelinkTitle> read_titles(const std::string& path);

}  // namespace wigi::records
