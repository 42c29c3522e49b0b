#include "spinbath_cli/table.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace spinbath::cli {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_cell(const Cell& cell) {
  return std::visit(overloaded{[](std::monostate) { return std::string(); },
                               [](double v) { return format_double(v); },
                               [](std::int64_t v) { return std::to_string(v); },
                               [](bool v) { return std::string(v ? "true" : "false"); },
                               [](const std::string& v) { return v; }},
                    cell);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_cell(row[i]);
    }
    out << '\n';
  }
}

nlohmann::ordered_json table_to_json(const Table& table) {
  nlohmann::ordered_json j;
  j["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      std::visit(overloaded{[&](std::monostate) { r.push_back(nullptr); },
                            [&](double v) {
                              if (std::isfinite(v)) {
                                r.push_back(v);
                              } else {
                                r.push_back(format_double(v));
                              }
                            },
                            [&](std::int64_t v) { r.push_back(v); },
                            [&](bool v) { r.push_back(v); },
                            [&](const std::string& v) { r.push_back(v); }},
                 cell);
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace spinbath::cli
