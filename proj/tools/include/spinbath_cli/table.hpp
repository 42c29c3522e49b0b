#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace spinbath::cli {

/// Empty cells (std::monostate) stand for values that do not exist for a row,
/// e.g. the oracle column of a CPF run above the enumeration limit.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_double(double v);

/// Header line plus one line per row, '\n' terminated.
void write_csv(std::ostream& out, const Table& table);

/// {"columns": [...], "rows": [[...], ...]}; non-finite doubles as strings.
nlohmann::ordered_json table_to_json(const Table& table);

}  // namespace spinbath::cli
