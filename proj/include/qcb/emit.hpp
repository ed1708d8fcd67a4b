#ifndef QCB_EMIT_HPP
#define QCB_EMIT_HPP

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

// CSV/JSON emission. CSV rows carry decimal-point floats at 12 significant
// digits with no locale formatting; byte output is a pure function of the
// table. JSON keeps native double precision (values round-trip bit-exactly)
// and stable key order; the +inf sentinel serializes as the string "INF".

namespace qcb {

struct Cell {
    enum class Type { Num, Inf, Text };
    Type type = Type::Num;
    double num = 0.0;
    std::string text;

    Cell() = default;
    Cell(double v) : type(Type::Num), num(v) {}                       // NOLINT(google-explicit-constructor)
    Cell(std::string s) : type(Type::Text), text(std::move(s)) {}     // NOLINT(google-explicit-constructor)
    Cell(const char* s) : type(Type::Text), text(s) {}                // NOLINT(google-explicit-constructor)
    static Cell inf() { Cell c; c.type = Type::Inf; return c; }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// 12-significant-digit decimal formatting, C locale.
inline std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string cell_to_string(const Cell& c) {
    switch (c.type) {
        case Cell::Type::Num: return format_sig12(c.num);
        case Cell::Type::Inf: return "INF";
        case Cell::Type::Text: return c.text;
    }
    return "";
}

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_to_string(row[i]);
        }
        out += '\n';
    }
    return out;
}

/// {meta: {command, params}, data: [...]} with row objects keyed by column.
inline nlohmann::ordered_json to_json(const std::string& command,
                                      const std::map<std::string, std::string>& params, const Table& t) {
    nlohmann::ordered_json j;
    j["meta"]["command"] = command;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["meta"]["params"] = std::move(p);
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            const Cell& c = row[i];
            if (c.type == Cell::Type::Num) obj[t.columns[i]] = c.num;
            else if (c.type == Cell::Type::Inf) obj[t.columns[i]] = "INF";
            else obj[t.columns[i]] = c.text;
        }
        data.push_back(std::move(obj));
    }
    j["data"] = std::move(data);
    return j;
}

} // namespace qcb

#endif // QCB_EMIT_HPP
